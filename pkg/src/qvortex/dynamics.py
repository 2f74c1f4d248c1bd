"""Vortex motion: orbit frequency, trajectories, and the q -> infinity limits.

A single vortex keeps |z0| constant and orbits with angular frequency

    omega = kappa [ Ln_q(1 - |z0|**2/r1**2) - Ln_q(1 - r2**2/|z0|**2) ]
            / (|z0|**2 (q - 1))

which vanishes exactly at the geometric mean radius sqrt(r1 r2) and blows
up like +-kappa/(2 r**2 eps) at the walls.  Both q-log arguments lie in
(1, q), so the pole-sum evaluation is used throughout (the power series
slows down near the walls).

``omega`` splits into the inner-image part ``omega1`` (positive for
kappa > 0, divergent at the inner wall) and the outer-image part ``omega2``
(negative, divergent at the outer wall); omega = omega1 + omega2.

For several vortices each one is advected by the full fields of the others
plus its own image field, whose two self-referencing q-logarithms cancel at
the vortex position.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IntegrationAborted, QVortexError, SingularityError
from .flow import VortexSystem, _qlog_correction
from .images import AnnulusGeometry
from .qcalc import TruncationPolicy, q_log_1m

# Minimum pairwise separation (relative to the gap width) before
# integration aborts.
_MIN_SEPARATION_RTOL = 1e-9


@dataclass(frozen=True)
class OrbitState:
    """Single-vortex orbit: conserved radius, phase, and frequency split."""

    radius: float
    phase: float
    omega: float
    omega1: float
    omega2: float


@dataclass(frozen=True)
class Trajectory:
    """Fixed-step trajectory of all vortices.

    ``positions[i, k]`` is vortex k at ``times[i]``; ``conserved_radii``
    holds the initial moduli (the single-vortex invariant).
    """

    times: np.ndarray
    positions: np.ndarray
    conserved_radii: tuple[float, ...]


@dataclass(frozen=True)
class AlphaParam:
    """Logarithmic radial coordinate alpha = log_q(|z|**2 / r1**2).

    Runs over (0, 1) across the open annulus; alpha = 1/2 exactly at the
    geometric mean radius.
    """

    alpha: float

    @classmethod
    def from_position(cls, geom: AnnulusGeometry, z: complex) -> "AlphaParam":
        if not geom.contains(z):
            raise DomainError(f"{z!r} is not strictly inside the annulus")
        alpha = math.log(abs(complex(z)) ** 2 / (geom.r1 * geom.r1)) / math.log(geom.q)
        return cls(alpha=alpha)


def _own_image_velocity(geom: AnnulusGeometry, zk: complex, kappa: float,
                        policy: TruncationPolicy | None) -> complex:
    # the z/z_k and z_k/z q-logs of the image field cancel at z = z_k,
    # leaving only the wall terms
    base = geom.base
    q = geom.q
    mod2 = (zk * zk.conjugate()).real
    l_outer = q_log_1m((geom.r2 * geom.r2) / mod2, base, policy)
    l_inner = q_log_1m(mod2 / (geom.r1 * geom.r1), base, policy)
    return 1j * kappa * (l_outer - l_inner) / (zk * (q - 1.0))


def _advecting_velocity(geom: AnnulusGeometry, positions: list[complex],
                        strengths: list[float], k: int,
                        policy: TruncationPolicy | None) -> complex:
    """Conjugate velocity moving vortex k: own images + full fields of others."""
    zk = positions[k]
    vbar = _own_image_velocity(geom, zk, strengths[k], policy)
    for j, zj in enumerate(positions):
        if j == k:
            continue
        dz = zk - zj
        if dz == 0:
            raise SingularityError(f"vortices {j} and {k} coincide at {zk!r}")
        vbar += 1j * strengths[j] * (1.0 / dz + _qlog_correction(geom, zj, zk, policy))
    return vbar


def self_velocity(sys: VortexSystem, k: int,
                  policy: TruncationPolicy | None = None) -> complex:
    """Conjugate velocity advecting vortex k (self pole excluded).

    The vortex moves with dz_k/dt = conj(self_velocity(sys, k)).
    """
    if not 0 <= k < len(sys.vortices):
        raise DomainError(f"vortex index {k} out of range (N={len(sys.vortices)})")
    positions = [complex(v.position) for v in sys.vortices]
    strengths = [v.strength for v in sys.vortices]
    return _advecting_velocity(sys.geom, positions, strengths, k, policy)


def orbit_frequency(geom: AnnulusGeometry, kappa: float, radius: float,
                    policy: TruncationPolicy | None = None) -> OrbitState:
    """Angular frequency of a single vortex at the given radius.

    ``omega1`` collects the inner-cylinder image ladder (positive for
    kappa > 0) and ``omega2`` the outer one (negative); their sum is the
    orbit frequency, zero exactly at sqrt(r1 r2).
    """
    if not (geom.r1 < radius < geom.r2):
        raise DomainError(
            f"radius {radius!r} outside the open annulus ({geom.r1:g}, {geom.r2:g})"
        )
    if not math.isfinite(kappa):
        raise DomainError(f"strength must be finite, got {kappa!r}")
    q = geom.q
    rsq = radius * radius
    x_inner = rsq / (geom.r1 * geom.r1)          # in (1, q)
    x_outer = (geom.r2 * geom.r2) / rsq          # in (1, q)
    l_inner = q_log_1m(x_inner, geom.base, policy).real
    l_outer = q_log_1m(x_outer, geom.base, policy).real
    pref = kappa / (rsq * (q - 1.0))
    omega1 = -pref * l_outer
    omega2 = pref * l_inner
    return OrbitState(radius=radius, phase=0.0, omega=omega1 + omega2,
                      omega1=omega1, omega2=omega2)


def integrate(sys: VortexSystem, t_end: float, dt: float,
              policy: TruncationPolicy | None = None) -> Trajectory:
    """Classical fixed-step 4th-order trajectory of all vortices.

    Runs floor(t_end/dt) steps of size dt.  Aborts with
    :class:`~qvortex.errors.IntegrationAborted` (carrying the partial
    trajectory) if a vortex leaves the open annulus or two vortices
    approach within the pole tolerance.
    """
    if dt <= 0 or not math.isfinite(dt):
        raise DomainError(f"dt must be positive and finite, got {dt!r}")
    if t_end <= 0 or not math.isfinite(t_end):
        raise DomainError(f"t_end must be positive and finite, got {t_end!r}")
    geom = sys.geom
    strengths = [v.strength for v in sys.vortices]
    n_vortices = len(strengths)
    n_steps = int(math.floor(t_end / dt + 1e-9))
    state = np.array([complex(v.position) for v in sys.vortices], dtype=complex)

    times = [0.0]
    history = [state.copy()]
    radii = tuple(float(abs(z)) for z in state)

    def _partial() -> Trajectory:
        return Trajectory(times=np.asarray(times), positions=np.vstack(history),
                          conserved_radii=radii)

    def rhs(zs: np.ndarray) -> np.ndarray:
        pos = [complex(z) for z in zs]
        return np.array(
            [_advecting_velocity(geom, pos, strengths, k, policy).conjugate()
             for k in range(n_vortices)],
            dtype=complex,
        )

    gap = geom.r2 - geom.r1
    for step in range(n_steps):
        t = step * dt
        try:
            k1 = rhs(state)
            k2 = rhs(state + 0.5 * dt * k1)
            k3 = rhs(state + 0.5 * dt * k2)
            k4 = rhs(state + dt * k3)
        except QVortexError as exc:
            raise IntegrationAborted(
                f"integration aborted at t={t:g}: stage evaluation failed "
                f"(vortex at or beyond a wall, or vortices too close): {exc}",
                trajectory=_partial(),
                reason=f"stage evaluation failed: {exc}", time=t,
            ) from exc
        state = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t_next = (step + 1) * dt
        for k in range(n_vortices):
            if not geom.contains(complex(state[k])):
                raise IntegrationAborted(
                    f"vortex {k} left the annulus at t={t_next:g} "
                    f"(|z|={abs(state[k]):g})",
                    trajectory=_partial(),
                    reason=f"vortex {k} left the annulus", time=t_next,
                )
        for i in range(n_vortices):
            for j in range(i + 1, n_vortices):
                if abs(state[i] - state[j]) < _MIN_SEPARATION_RTOL * gap:
                    raise IntegrationAborted(
                        f"vortices {i} and {j} collided at t={t_next:g}",
                        trajectory=_partial(),
                        reason=f"vortices {i} and {j} collided", time=t_next,
                    )
        times.append(t_next)
        history.append(state.copy())
    return Trajectory(times=np.asarray(times), positions=np.vstack(history),
                      conserved_radii=radii)


def limit_one_cylinder(r1: float, kappa: float, z0: complex,
                       z: complex) -> tuple[complex, float]:
    """Flow of a vortex outside a single cylinder (outer wall removed).

    This is the q -> infinity limit of the annulus at fixed r1 with
    r2**2 = q r1**2:

        Vbar(z) = i kappa/(z - z0) - (i kappa / z) a/(z - a),  a = r1**2/conj(z0)
        omega   = kappa r1**2 / (|z0|**2 (|z0|**2 - r1**2))

    The velocity is identically the circle-theorem flow with a negative
    image at the inverse point and a positive image at the center.
    """
    z0 = complex(z0)
    z = complex(z)
    if r1 <= 0 or not math.isfinite(r1):
        raise DomainError(f"r1 must be positive and finite, got {r1!r}")
    if abs(z0) <= r1:
        raise DomainError(f"vortex must lie outside the cylinder (|z0|={abs(z0):g} <= r1={r1:g})")
    a = r1 * r1 / z0.conjugate()
    for pole, what in ((z0, "the vortex"), (a, "the image"), (0j, "the center")):
        if abs(z - pole) <= 1e-12 * max(r1, abs(z), abs(pole)):
            raise SingularityError(f"field point {z!r} coincides with {what}")
    vbar = 1j * kappa / (z - z0) - (1j * kappa / z) * a / (z - a)
    mod2 = abs(z0) ** 2
    omega = kappa * r1 * r1 / (mod2 * (mod2 - r1 * r1))
    return vbar, omega


def limit_one_disk(r2: float, kappa: float, z0: complex,
                   z: complex) -> tuple[complex, float]:
    """Flow of a vortex inside a single disk (inner cylinder shrunk away).

    The q -> infinity limit of the annulus at fixed r2 with r1**2 = r2**2/q:

        Vbar(z) = i kappa/(z - z0) - i kappa/(z - r2**2/conj(z0))
        omega   = -kappa / (r2**2 - |z0|**2)
    """
    z0 = complex(z0)
    z = complex(z)
    if r2 <= 0 or not math.isfinite(r2):
        raise DomainError(f"r2 must be positive and finite, got {r2!r}")
    if abs(z0) >= r2:
        raise DomainError(f"vortex must lie inside the disk (|z0|={abs(z0):g} >= r2={r2:g})")
    b = r2 * r2 / z0.conjugate()
    for pole, what in ((z0, "the vortex"), (b, "the image")):
        if abs(z - pole) <= 1e-12 * max(r2, abs(z), abs(pole)):
            raise SingularityError(f"field point {z!r} coincides with {what}")
    vbar = 1j * kappa / (z - z0) - 1j * kappa / (z - b)
    omega = -kappa / (r2 * r2 - abs(z0) ** 2)
    return vbar, omega


def potential_one_cylinder(r1: float, kappa: float, z0: complex, z: complex) -> complex:
    """Limit potential: vortex, negative image at r1**2/conj(z0), center log."""
    z0 = complex(z0)
    z = complex(z)
    a = r1 * r1 / z0.conjugate()
    return 1j * kappa * (cmath.log(z - z0) - cmath.log(z - a) + cmath.log(z))


def potential_one_disk(r2: float, kappa: float, z0: complex, z: complex) -> complex:
    """Limit potential: vortex plus one negative image at r2**2/conj(z0)."""
    z0 = complex(z0)
    z = complex(z)
    b = r2 * r2 / z0.conjugate()
    return 1j * kappa * (cmath.log(z - z0) - cmath.log(z - b) + cmath.log(-b))
