"""Hypergraph Lagrangians, mix-crossed blowups and the extremal constructions built from them."""

from .blowup import (
    BlowupResult,
    ShadowReport,
    blowup,
    blowup_edge_count,
    construct_G_n_i,
    max_blowup,
    shadow_density_report,
)
from .construct import (
    EquivalencePartition,
    MixCrossSpec,
    codegree_table,
    construct_Gi,
    edit_distance_under,
    equivalence_classes,
    heuristic_min_edit,
    is_symmetrized,
    mix_crossed_blowup,
    quotient,
    verify_codegree_table,
)
from .core import (
    Hypergraph,
    codegree,
    complete_hypergraph,
    complete_minus,
    degree,
    empty_hypergraph,
    induced,
    is_2_covered,
    is_symmetric_pair,
    link,
    make_hypergraph,
    neighborhood,
    shadow,
)
from .errors import *  # noqa: F401,F403
from .hom import find_homomorphism, in_K_ell_family, is_colorable, is_F_free, mt_member
from .lagrangian import (
    LagrangianReport,
    closed_form_lambda,
    kkt_check,
    lagrangian,
    lagrangian_grid_oracle,
    optimal_point,
    poly_eval,
    poly_grad,
    project_simplex,
)

__version__ = "0.1.0"
