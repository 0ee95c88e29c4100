"""Disks touching three sides of a polygonal quadrilateral.

Core capabilities: medial axes of simple polygons, a sweep that finds a
disk whose boundary meets three sides, geodesic internal side distances,
a finite-difference modulus estimator, and the analytic double bounds
relating the modulus to the side distances.
"""

from .errors import *  # noqa: F401,F403
from .geometry import (  # noqa: F401
    BoundaryFeature,
    Contact,
    ContactDisk,
    PolygonalQuadrilateral,
    SIDE_LABELS,
    conjugate,
    hausdorff_distance,
    load_quadrilateral,
    validate,
)
from .medial_axis import (  # noqa: F401
    MedialAxisEdge,
    MedialAxisGraph,
    compute_medial_axis,
    maximal_disk,
    tree_path,
)
from .sweep import (  # noqa: F401
    SweepTranscript,
    brute_force_three_side_disk,
    classify_contacts,
    find_three_side_disk,
)
from .geodesic import GeodesicWitness, internal_side_distance  # noqa: F401
from .modulus import ModulusEstimate, conjugate_modulus_check, estimate_modulus  # noqa: F401
from .bounds import LvBounds, L_from_K, delta_from_K, lv_bounds, verify_corollary  # noqa: F401
from .approximation import (  # noqa: F401
    ApproximationSequence,
    build_approximation_sequence,
    check_convergence_from_inside,
    inner_right_angle_approximation,
    limit_disk,
)

__version__ = "0.1.0"
