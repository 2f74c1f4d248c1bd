"""Point-vortex flow in a circular annulus.

The velocity, potential and stream function of N point vortices between two
coaxial cylinders are computed through three mutually cross-validating
representations (Laurent boundary solve, image-lattice sums, q-logarithm /
q-exponential closed forms), a Jacobi-theta stream function, plus the orbit
dynamics and the one-wall limit flows.
"""

from .errors import (
    ConvergenceError,
    DomainError,
    IntegrationAborted,
    PoleProximityError,
    QVortexError,
    RangeError,
    SingularityError,
)
from .images import AnnulusGeometry, Family, ImageSet, ImageVortex, Vortex, cascade, lattice_images
from .qcalc import DEFAULT_POLICY, QBase, TruncationPolicy
from .flow import (
    FieldSample,
    LaurentCoefficients,
    VortexSystem,
    boundary_residual,
    field_sample,
    laurent_coefficients,
    potential,
    stream,
    velocity,
    velocity_images,
    velocity_laurent,
    velocity_qlog,
)
from .theta import RectangleCoords, ThetaParams, rescale_to_unit_outer, stream_theta, theta1
from .dynamics import (
    AlphaParam,
    OrbitState,
    Trajectory,
    integrate,
    limit_one_cylinder,
    limit_one_disk,
    orbit_frequency,
    self_velocity,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaParam",
    "AnnulusGeometry",
    "ConvergenceError",
    "DEFAULT_POLICY",
    "DomainError",
    "Family",
    "FieldSample",
    "ImageSet",
    "ImageVortex",
    "IntegrationAborted",
    "LaurentCoefficients",
    "OrbitState",
    "PoleProximityError",
    "QBase",
    "QVortexError",
    "RangeError",
    "RectangleCoords",
    "SingularityError",
    "ThetaParams",
    "Trajectory",
    "TruncationPolicy",
    "Vortex",
    "VortexSystem",
    "boundary_residual",
    "cascade",
    "field_sample",
    "integrate",
    "lattice_images",
    "laurent_coefficients",
    "limit_one_cylinder",
    "limit_one_disk",
    "orbit_frequency",
    "potential",
    "rescale_to_unit_outer",
    "self_velocity",
    "stream",
    "stream_theta",
    "theta1",
    "velocity",
    "velocity_images",
    "velocity_laurent",
    "velocity_qlog",
]
