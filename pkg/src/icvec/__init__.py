"""Interconnectivity vectorizations of persistence diagrams.

Pipeline: point clouds -> Vietoris-Rips filtrations -> persistence diagrams
-> feature vectors (persistence, interconnectivity, stable interconnectivity)
plus diagram metrics (Wasserstein, bottleneck, sliced Wasserstein) and an
experiment harness exercising the stability properties of each vector.
"""

from .homology import (
    PersistenceDiagram,
    PersistencePoint,
    betti_numbers,
    compute_persistence,
    from_barcode,
    load_diagram_csv,
    rips_persistence,
    save_diagram_csv,
    to_barcode,
)
from .metrics import (
    MatchingResult,
    bottleneck,
    sliced_wasserstein,
    wasserstein,
    wasserstein_bruteforce,
)
from .pointcloud import (
    PointCloud,
    distance_matrix,
    generate,
    image_to_point_cloud,
    linked_twist_orbit,
    load_points_csv,
    perturb,
    save_points_csv,
    sliding_window_embed,
)
from .rips import Filtration, Simplex, build_rips
from .vectorize import (
    FeatureVector,
    GaussianParams,
    interconnectivity_from_barcode,
    interconnectivity_vector,
    persistence_vector,
    stable_interconnectivity_vector,
    vector_distance_inf,
)

__version__ = "0.1.0"

__all__ = [
    "PersistenceDiagram",
    "PersistencePoint",
    "betti_numbers",
    "compute_persistence",
    "from_barcode",
    "load_diagram_csv",
    "rips_persistence",
    "save_diagram_csv",
    "to_barcode",
    "MatchingResult",
    "bottleneck",
    "sliced_wasserstein",
    "wasserstein",
    "wasserstein_bruteforce",
    "PointCloud",
    "distance_matrix",
    "generate",
    "image_to_point_cloud",
    "linked_twist_orbit",
    "load_points_csv",
    "perturb",
    "save_points_csv",
    "sliding_window_embed",
    "Filtration",
    "Simplex",
    "build_rips",
    "FeatureVector",
    "GaussianParams",
    "interconnectivity_from_barcode",
    "interconnectivity_vector",
    "persistence_vector",
    "stable_interconnectivity_vector",
    "vector_distance_inf",
    "__version__",
]
