"""Stream function via the first Jacobi theta function.

Mapping the annulus (outer radius normalized to 1) to a rectangle by
``tau = -log z`` turns the image ladders into the zero set of the first
Jacobi theta function with nome ``q_tilde = r1/r2 = 1/sqrt(q)``:

    Psi(z) = sum_k kappa_k log | Theta1(i (tau - tau_k)/2)
                                / Theta1(i (tau + conj(tau_k))/2) |

Theta1 itself is the product of a sine factor with two second Jackson
q-exponentials of base q_tilde**2, which ties this module back to
:mod:`qvortex.qcalc`.  Psi depends only on moduli of Theta1 ratios, so the
branch cut of the principal logarithm in ``tau = -log z`` drops out.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, SingularityError
from .flow import VortexSystem
from .images import AnnulusGeometry, Vortex
from .qcalc import DEFAULT_POLICY, TruncationPolicy


@dataclass(frozen=True)
class ThetaParams:
    """Nome ``q_tilde`` in (0, 1) plus the cached scale product G.

    G = prod_{n>=1} (1 - q_tilde**(2n)) appears in every theta evaluation
    (it cancels in stream-function ratios but keeps standalone Theta1
    values correct), so it is computed once per parameter set, with the
    same truncation policy the theta products use.
    """

    q_tilde: float
    policy: TruncationPolicy = DEFAULT_POLICY
    G: float = 0.0

    def __post_init__(self):
        qt = self.q_tilde
        if not (0.0 < qt < 1.0):
            raise DomainError(f"nome must lie in (0, 1), got {qt!r}")
        object.__setattr__(self, "G", _scale_product(qt, self.policy))


@functools.lru_cache(maxsize=64)
def _scale_product(q_tilde: float, policy: TruncationPolicy) -> float:
    qt2 = q_tilde * q_tilde
    acc = 1.0
    qp = 1.0
    for _ in range(policy.max_terms):
        qp *= qt2
        acc *= 1.0 - qp
        if policy.abs_tol > 0.0 and qp < policy.abs_tol:
            return acc
    if policy.abs_tol == 0.0:
        return acc
    raise ConvergenceError(
        f"scale product needed more than {policy.max_terms} factors for "
        f"tolerance {policy.abs_tol:g}",
        achieved_bound=qp, terms_used=policy.max_terms,
    )


@dataclass(frozen=True)
class RectangleCoords:
    """Log coordinates tau = -log z of a field point and of each vortex."""

    tau: complex
    tau_k: tuple[complex, ...]


def to_rectangle(sys: VortexSystem, z: complex) -> RectangleCoords:
    """Map a field point and the system's vortices to the log rectangle.

    Principal branch; Re tau runs from -log r2 to -log r1 across the
    annulus and exp(-tau) recovers z exactly.
    """
    z = complex(z)
    if z == 0:
        raise DomainError("tau = -log z is undefined at z = 0")
    return RectangleCoords(
        tau=-cmath.log(z),
        tau_k=tuple(-cmath.log(complex(v.position)) for v in sys.vortices),
    )


def theta1(x: complex, params: ThetaParams,
           policy: TruncationPolicy | None = None) -> complex:
    """First Jacobi theta function by its infinite product:

        Theta1(x; qt) = 2 G qt**(1/4) sin x
                        prod_{n>=1} (1 - qt**(2n) e^{2ix}) (1 - qt**(2n) e^{-2ix})

    Odd in x.  Factors approach 1 geometrically since qt < 1; truncation
    stops once qt**(2n) max(|e^{2ix}|, |e^{-2ix}|) falls below the policy
    tolerance.
    """
    pol = params.policy if policy is None else policy
    x = complex(x)
    qt = params.q_tilde
    qt2 = qt * qt
    e_plus = cmath.exp(2j * x)
    e_minus = cmath.exp(-2j * x)
    grow = max(abs(e_plus), abs(e_minus))
    acc = 1 + 0j
    qp = 1.0
    converged = pol.abs_tol == 0.0
    for _ in range(pol.max_terms):
        qp *= qt2
        acc *= (1.0 - qp * e_plus) * (1.0 - qp * e_minus)
        if pol.abs_tol > 0.0 and qp * grow < pol.abs_tol:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"theta product needed more than {pol.max_terms} factors for "
            f"tolerance {pol.abs_tol:g}",
            achieved_bound=qp * grow, terms_used=pol.max_terms,
        )
    return 2.0 * params.G * qt ** 0.25 * cmath.sin(x) * acc


@functools.lru_cache(maxsize=64)
def _cached_params(q_tilde: float, policy: TruncationPolicy) -> ThetaParams:
    return ThetaParams(q_tilde=q_tilde, policy=policy)


def stream_theta(sys: VortexSystem, z: complex,
                 policy: TruncationPolicy | None = None) -> float:
    """Stream function from theta ratios, for systems with r2 = 1.

    Callers with r2 != 1 rescale through :func:`rescale_to_unit_outer`
    first (Psi is similarity invariant up to an additive constant).
    Matches Im(potential) from :mod:`qvortex.flow` up to a z-independent
    constant.
    """
    geom = sys.geom
    if abs(geom.r2 - 1.0) > 1e-12:
        raise DomainError(
            f"stream_theta expects r2 = 1 (got r2={geom.r2!r}); "
            "rescale with rescale_to_unit_outer first"
        )
    z = complex(z)
    az = abs(z)
    if not (geom.r1 * (1.0 - 1e-12) <= az <= geom.r2 * (1.0 + 1e-12)):
        raise DomainError(
            f"field point {z!r} (|z|={az:g}) lies outside the closed annulus"
        )
    pol = DEFAULT_POLICY if policy is None else policy
    params = _cached_params(geom.r1, pol)
    tau = -cmath.log(z)
    psi = 0.0
    for v in sys.vortices:
        tau_k = -cmath.log(complex(v.position))
        num = theta1(0.5j * (tau - tau_k), params, pol)
        den = theta1(0.5j * (tau + tau_k.conjugate()), params, pol)
        if num == 0 or abs(num) < 1e-306:
            raise SingularityError(
                f"field point {z!r} sits on the vortex/image ladder of {v.position!r}"
            )
        if den == 0 or abs(den) < 1e-306:
            raise SingularityError(
                f"field point {z!r} sits on a theta zero (image ladder) of {v.position!r}"
            )
        psi += v.strength * math.log(abs(num / den))
    return psi


def rescale_to_unit_outer(sys: VortexSystem) -> tuple[VortexSystem, float]:
    """Similarity-rescale a system so the outer radius is 1.

    Returns the rescaled system and the scale factor s = 1/r2 applied to
    every length; q is invariant and conjugate velocities transform as
    Vbar -> Vbar / s.
    """
    s = 1.0 / sys.geom.r2
    geom = AnnulusGeometry(r1=sys.geom.r1 * s, r2=1.0)
    vortices = tuple(
        Vortex(position=complex(v.position) * s, strength=v.strength)
        for v in sys.vortices
    )
    return VortexSystem(geom=geom, vortices=vortices), s
