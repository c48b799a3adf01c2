"""Exact polytopes of coherent lower previsions.

Compute, over exact rational arithmetic, the convex polytope of coherent
lower previsions on a finite set of gambles: generate a finite sufficient
constraint set, remove redundancy, project out auxiliary coordinates,
enumerate extreme points with adjacency, check coherence, and compute
credal sets and natural extensions.
"""

from ._rat import Rat, rat, rat_str
from .errors import (
    BudgetExceeded,
    DependentColumns,
    DimensionMismatch,
    EmptyPolytope,
    FamilyParameterError,
    IndexMismatch,
    MissingIndicators,
    NotNormalized,
    PrevpolyError,
    SureLoss,
    UnboundedPolytope,
)
from .gambles import (
    AffineRecord,
    Event,
    Gamble,
    GambleSet,
    LowerPrevision,
    PossibilitySpace,
    augment_with_indicators,
    complement_gamble,
    degenerate_prevision,
    denormalize_value,
    indicator,
    normalize,
    support,
    vacuous_prevision,
)
from .ratlinalg import LPResult, RatMatrix, is_independent, lp_optimize, rank, solve_unique
from .polytope import (
    AdjacencyGraph,
    HRep,
    VRep,
    adjacency,
    contains,
    enumerate_vertices,
    fm_project,
    remove_redundant,
)
from .coherence import (
    CoherenceResult,
    ConstraintSet,
    LinearConstraint,
    check_against,
    check_direct,
    combination_solution,
    generate_constraints,
    independent_subsets,
)
from .credal import (
    CredalSet,
    MassFunction,
    credal_hrep,
    credal_vertices,
    is_lower_envelope,
    natural_extension,
)
from .catalog import (
    Budget,
    FamilySpec,
    PipelineSummary,
    family_gambles,
    run_pipeline,
    reproduce_table,
)

__version__ = "0.1.0"
