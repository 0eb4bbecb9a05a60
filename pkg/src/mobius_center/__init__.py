"""Center of mass, circumcenter of mass and Möbius center of simplicial polytopes."""

from .derivative import (
    DerivativeReport,
    dlogvol_analytic,
    dlogvol_fd,
    mobius_center_from_derivatives,
    verify_center_identity,
)
from .errors import (
    DegenerateSimplex,
    DegenerateTriangulation,
    DimensionMismatch,
    FormatError,
    GeometryError,
    InvalidField,
    InvalidSimilarity,
    NonFinite,
    PoleHit,
    SingularMatrix,
    VolumeCollapse,
    ZeroVolume,
)
from .fields import (
    FlowTrajectory,
    QuadraticField,
    divergence,
    divergence_fd,
    evaluate,
    integrate_flow,
    invert_in_sphere,
    mobius_field,
)
from .linalg import determinant, is_skew_symmetric_shifted, solve_linear
from .polytope import (
    CenterReport,
    Facet,
    SimplicialPolytope,
    Triangulation,
    apply_similarity,
    center_of_mass,
    centers,
    circumcenter_of_mass,
    cone_triangulation,
    mobius_center,
    validate_cycle,
    volume,
)
from .simplex import Circumdata, Simplex, centroid, circumcenter, medial_simplex, mobius_center_simplex, signed_volume

__version__ = "0.1.0"
