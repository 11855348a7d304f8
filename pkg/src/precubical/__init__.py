"""Pre-cubical sets, exact directed paths, and schedule-space topology.

The package computes with finite pre-cubical sets (the state spaces of
higher dimensional automata): it represents directed piecewise-linear
paths exactly over the rationals, strictifies and tames them, enumerates
the cube-chain refinement poset between two states, and determines the
homotopy type of the schedule space through nerve homology.
"""

from .carrier import (
    FacePartition,
    Point,
    canonicalize,
    face,
    hyperplane_level,
    in_collar,
    in_face_collar,
    in_star,
    l1_distance_in_cube,
    leq_in_cube,
)
from .chains import (
    NO_COARSEST,
    CubeChain,
    RefinementPoset,
    chain_diagonal,
    coarsest_common_refinement,
    common_refinement_exists,
    elementary_refinements,
    enumerate_chains,
    finest_chain,
    refinement_set,
    refines,
    subordinate_to_collar,
)
from .cubeset import (
    BoxSpec,
    CubeSet,
    Violation,
    boundary_cube,
    euclidean,
    full_cube,
    is_non_self_linked,
    is_proper,
    q_complex,
    source_vertex,
    target_vertex,
    validate,
    z_complex,
)
from .dpath import (
    KinkSequence,
    PLPath,
    Segment,
    concatenate,
    evaluate,
    exponential_flow,
    is_strict,
    is_tame,
    kinks_to_path,
    l1_length,
    naturalize,
    path,
    path_to_kinks,
    paths_equal,
    rational_flow,
    reparametrize,
    strictify,
    strictify_homotopy,
)
from .errors import (
    FormatError,
    NoCommonCarrierError,
    PrecubicalError,
    SubordinationError,
    UnknownCubeError,
)
from .nerve import (
    HomologyResult,
    SimplicialComplex,
    betti,
    components,
    covering_nerve,
    euler,
    homology,
    order_complex,
    smith_normal_form,
)
from .taming import CrossingProfile, MSurface, crossing_times, tame, tame_cube, taming_homotopy

__version__ = "0.1.0"
