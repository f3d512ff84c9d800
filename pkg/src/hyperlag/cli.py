"""Command-line front end.

Hypergraphs are read as JSON (``{"r":3,"n":..,"edges":[..]}``) from a path
or ``-`` for stdin. Output is JSON by default, with every float printed to
12 significant digits.

Exit codes: 0 ok, 1 verification failure (or no homomorphism), 2 usage or
parse error, 3 optimizer did not converge, 4 construction infeasible,
5 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import verify
from .blowup import construct_G_n_i, max_blowup, shadow_density_report
from .construct import (
    MixCrossSpec,
    codegree_table,
    construct_Gi,
    edit_distance_under,
    equivalence_classes,
    gi_labels,
    heuristic_min_edit,
    is_blowup_reconstruction,
    is_symmetrized,
    mix_crossed_blowup,
    quotient,
    verify_codegree_table,
)
from .core import Hypergraph, complete_minus
from .errors import CodegreeTooSmall, HypergraphError, SearchBudgetExceeded
from .hom import find_homomorphism, is_colorable, mt_member
from .lagrangian import (
    closed_form_lambda,
    lagrangian,
    lagrangian_grid_oracle,
    optimal_point,
    optimal_weights,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NONCONVERGED = 3
EXIT_INFEASIBLE = 4
EXIT_BUDGET = 5


class UsageError(Exception):
    pass


def _plain(obj):
    """Convert numpy scalars/arrays and tuples, rounding floats to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}")
    return obj


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v)}")
    return lines


def _emit(args, payload: dict) -> None:
    payload = _plain(payload)
    if args.fmt == "text":
        out = "\n".join(_text(payload)) + "\n"
    else:
        out = json.dumps(payload) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _read_graph(path: str) -> Hypergraph:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return Hypergraph.from_json(text)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: not a hypergraph JSON document ({exc})") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in json.loads(text)] if text.strip().startswith("[") else \
            [int(x) for x in text.split(",") if x.strip()]
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"expected a list of integers, got {text!r}") from exc


def _config(args) -> verify.RunConfig:
    try:
        return verify.RunConfig(args.seed, args.restarts, args.tol, args.budget)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_lagrangian(args) -> int:
    cfg = _config(args)
    H = _read_graph(args.graph)
    rep = lagrangian(H, restarts=cfg.restarts, max_iters=args.max_iters, tol=cfg.tol, seed=cfg.seed)
    _emit(args, rep.to_dict())
    return EXIT_OK if rep.converged else EXIT_NONCONVERGED


def cmd_grid_oracle(args) -> int:
    H = _read_graph(args.graph)
    _emit(args, {"resolution": args.resolution, "value": lagrangian_grid_oracle(H, args.resolution)})
    return EXIT_OK


def cmd_closed_form(args) -> int:
    a, b = optimal_weights(args.t)
    _emit(args, {"t": args.t, "lambda": closed_form_lambda(args.t), "a": a, "b": b,
                 "point": optimal_point(args.t, args.layout)})
    return EXIT_OK


def cmd_construct(args) -> int:
    cfg = _config(args)
    if args.kind == "kminus":
        _emit(args, complete_minus(args.t).to_dict())
    elif args.kind == "gi":
        G = construct_Gi(args.t, args.i)
        _emit(args, {**G.to_dict(), "labels": gi_labels(args.t)})
    else:
        if args.n is None:
            raise UsageError("--gni needs --n")
        R = construct_G_n_i(args.t, args.i, args.n, seed=cfg.seed, restarts=cfg.restarts)
        _emit(args, {**R.graph.to_dict(), **R.sidecar()})
    return EXIT_OK


def cmd_mix_blowup(args) -> int:
    G = _read_graph(args.graph)
    if args.ordering is None:
        spec = MixCrossSpec.canonical(G, args.v1, args.v2, args.a, args.b)
    else:
        spec = MixCrossSpec(args.v1, args.v2, args.a, args.b, tuple(_int_list(args.ordering)))
    _emit(args, {**mix_crossed_blowup(G, spec).to_dict(), "spec": spec.to_dict()})
    return EXIT_OK


def cmd_max_blowup(args) -> int:
    cfg = _config(args)
    G = _read_graph(args.graph)
    parts, count = max_blowup(G, args.n, args.iters, seed=cfg.seed, restarts=cfg.restarts)
    _emit(args, {"n": args.n, "parts": parts, "edge_count": count})
    return EXIT_OK


def cmd_hom(args) -> int:
    cfg = _config(args)
    F, G = _read_graph(args.source), _read_graph(args.target)
    phi = find_homomorphism(F, G, injective=args.injective, budget=cfg.budget)
    _emit(args, {"map": phi})
    return EXIT_OK if phi is not None else EXIT_FAIL


def cmd_colorable(args) -> int:
    cfg = _config(args)
    F, G = _read_graph(args.source), _read_graph(args.target)
    _emit(args, {"colorable": is_colorable(F, G, cfg.budget)})
    return EXIT_OK


def cmd_mt_member(args) -> int:
    cfg = _config(args)
    F = _read_graph(args.graph)
    _emit(args, {"t": args.t, "member": mt_member(F, args.t, budget=cfg.budget)})
    return EXIT_OK


def cmd_codegree_table(args) -> int:
    if (args.graph is None) == (args.gi_t is None):
        raise UsageError("give exactly one of a graph path or --gi-t")
    G = construct_Gi(args.gi_t, 1) if args.graph is None else _read_graph(args.graph)
    table = [[u, v, c] for (u, v), c in sorted(codegree_table(G).items())]
    payload = {"table": table}
    code = EXIT_OK
    if args.gi_t is not None:
        payload["labels"] = gi_labels(args.gi_t)
        payload["matches_expected"] = verify_codegree_table(args.gi_t)
        code = EXIT_OK if payload["matches_expected"] else EXIT_FAIL
    _emit(args, payload)
    return code


def cmd_symmetrize(args) -> int:
    H = _read_graph(args.graph)
    part = equivalence_classes(H)
    T, vmap = quotient(H)
    _emit(args, {
        "classes": part.blocks,
        "symmetrized": is_symmetrized(H),
        "quotient": T.to_dict(),
        "vertex_map": vmap,
        "reconstructs": is_blowup_reconstruction(H, T, vmap),
    })
    return EXIT_OK


def cmd_shadow(args) -> int:
    _emit(args, shadow_density_report(_read_graph(args.graph)).to_dict())
    return EXIT_OK


def cmd_edit_dist(args) -> int:
    cfg = _config(args)
    H1, H2 = _read_graph(args.first), _read_graph(args.second)
    if args.sigma is not None:
        sigma = _int_list(args.sigma)
        _emit(args, {"exact": True, "distance": edit_distance_under(H1, H2, sigma), "sigma": sigma})
    else:
        d, sigma = heuristic_min_edit(H1, H2, iters=args.iters, seed=cfg.seed,
                                      restarts=args.edit_restarts, return_bijection=True)
        _emit(args, {"exact": False, "distance": d, "sigma": sigma})
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    cfg = _config(args)
    if args.t < 1:
        raise UsageError("--t must be >= 1")
    checks = verify.run_all(args.t, cfg)
    passed = all(c.passed for c in checks)
    if args.fmt == "text":
        lines = [f"{'PASS' if c.passed else 'FAIL'} {c.key} {c.title}: "
                 f"{json.dumps(_plain(c.measured), separators=(',', ':'))}" for c in checks]
        lines.append(f"{'ALL PASS' if passed else 'FAILURES'}: "
                     f"{sum(c.passed for c in checks)}/{len(checks)}")
        out = "\n".join(lines) + "\n"
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    else:
        _emit(args, {"t_max": args.t, "seed": cfg.seed, "passed": passed,
                     "checks": [c.to_dict() for c in checks]})
    return EXIT_OK if passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=64)
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--budget", type=int, default=10**8)
    common.add_argument("--output", "-o", default=None, help="write here instead of stdout")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    common.set_defaults(fmt="json")

    p = argparse.ArgumentParser(prog="hyperlag", description="Hypergraph Lagrangians and blowup constructions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(func=func)
        return s

    s = add("lagrangian", cmd_lagrangian, "maximize the edge polynomial over the simplex")
    s.add_argument("graph")
    s.add_argument("--max-iters", type=int, default=100_000)

    s = add("grid-oracle", cmd_grid_oracle, "exact maximum over a rational grid")
    s.add_argument("graph")
    s.add_argument("--resolution", type=int, default=60)

    s = add("closed-form", cmd_closed_form, "closed-form Lagrangian and optimum of K_{3t+3} minus an edge")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--layout", choices=["base", "mixed"], default="base")

    s = add("construct", cmd_construct, "build K-minus, G_i or G_n^i")
    kind = s.add_mutually_exclusive_group(required=True)
    kind.add_argument("--kminus", dest="kind", action="store_const", const="kminus")
    kind.add_argument("--gi", dest="kind", action="store_const", const="gi")
    kind.add_argument("--gni", dest="kind", action="store_const", const="gni")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--i", type=int, default=1)
    s.add_argument("--n", type=int, default=None)

    s = add("mix-blowup", cmd_mix_blowup, "mix-crossed blowup of a symmetric pair")
    s.add_argument("graph")
    for flag in ("--v1", "--v2", "--a", "--b"):
        s.add_argument(flag, type=int, required=True)
    s.add_argument("--ordering", default=None, help="comma list or JSON array; default sorted")

    s = add("max-blowup", cmd_max_blowup, "locally maximal blowup on n vertices")
    s.add_argument("graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--iters", type=int, default=None, help="cap on hill-climbing moves")

    s = add("hom", cmd_hom, "find a homomorphism F -> G (exit 1 if none)")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--injective", action="store_true")

    s = add("colorable", cmd_colorable, "whether F is G-colorable")
    s.add_argument("source")
    s.add_argument("target")

    s = add("mt-member", cmd_mt_member, "membership in the forbidden family")
    s.add_argument("graph")
    s.add_argument("--t", type=int, required=True)

    s = add("codegree-table", cmd_codegree_table, "pair codegrees; --gi-t checks G_1 against the expected table")
    s.add_argument("graph", nargs="?", default=None)
    s.add_argument("--gi-t", type=int, default=None)

    s = add("symmetrize", cmd_symmetrize, "equivalence classes and quotient")
    s.add_argument("graph")

    s = add("shadow", cmd_shadow, "shadow size and multipartite structure")
    s.add_argument("graph")

    s = add("edit-dist", cmd_edit_dist, "edit distance under a bijection, or a heuristic minimum")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--sigma", default=None, help="bijection V(second) -> V(first)")
    s.add_argument("--iters", type=int, default=50)
    s.add_argument("--edit-restarts", type=int, default=8)

    s = add("verify-paper", cmd_verify_paper, "run the full verification suite")
    s.add_argument("--t", type=int, default=3)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hyperlag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchBudgetExceeded as exc:
        print(f"hyperlag: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CodegreeTooSmall as exc:
        print(f"hyperlag: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (HypergraphError, ValueError) as exc:
        print(f"hyperlag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
