"""Complex velocity and potential of N vortices in an annulus.

Three mutually cross-validating representations of the conjugate velocity
``Vbar(z) = u1 - i u2`` are provided:

* :func:`velocity_laurent` -- Laurent series with coefficients solved from
  the impermeability conditions on both cylinders (the independent oracle);
* :func:`velocity_images` -- truncated sum over the image lattice;
* :func:`velocity_qlog` -- closed form built from four q-logarithms.

The image lattice is only conditionally convergent as a double sum; pairing
the +/- terms shell by shell makes it absolutely convergent but drops a
residual center-vortex contribution i*kappa/z per vortex, which
:func:`velocity_images` restores explicitly.  (With a single shell the
result is then exactly the one-cylinder circle-theorem flow, so the inner
boundary condition already holds at zeroth truncation.)

:func:`potential` assembles the holomorphic potential F with F' = Vbar from
four Jackson q-exponentials; only derivatives and differences of Im F are
contract-bearing, since F carries an arbitrary additive constant and
per-factor log branches.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, PoleProximityError, SingularityError
from .images import AnnulusGeometry, Vortex
from .qcalc import TruncationPolicy, q_exp, q_log_1m

# Relative distance below which a field point counts as sitting on a
# vortex or image.
_COINCIDENCE_RTOL = 1e-12

DEFAULT_LAURENT_ORDER = 60

REPRESENTATIONS = ("laurent", "images", "qlog")


@dataclass(frozen=True)
class VortexSystem:
    """A geometry plus N >= 1 vortices strictly inside it."""

    geom: AnnulusGeometry
    vortices: tuple[Vortex, ...]

    def __post_init__(self):
        if not self.vortices:
            raise DomainError("a vortex system needs at least one vortex")
        object.__setattr__(self, "vortices", tuple(self.vortices))
        scale = self.geom.r2 - self.geom.r1
        for v in self.vortices:
            if not self.geom.contains(v.position):
                raise DomainError(
                    f"vortex at {v.position!r} is not strictly inside the annulus "
                    f"({self.geom.r1:g}, {self.geom.r2:g})"
                )
        for i, a in enumerate(self.vortices):
            for b in self.vortices[i + 1:]:
                if abs(complex(a.position) - complex(b.position)) <= _COINCIDENCE_RTOL * scale:
                    raise DomainError(
                        f"vortices at {a.position!r} and {b.position!r} coincide"
                    )


@dataclass(frozen=True)
class LaurentCoefficients:
    """Solved series coefficients a_n (n = 0..M) and b_{n+2} (n = 0..M).

    b_1 vanishes identically and is therefore not stored; the velocity
    assembly starts the principal part at 1/z**2.
    """

    a: tuple[complex, ...]
    b: tuple[complex, ...]
    order: int


@dataclass(frozen=True)
class FieldSample:
    """Velocity, potential and stream function at one field point."""

    z: complex
    velocity_conj: complex
    potential: complex
    stream: float


def laurent_coefficients(sys: VortexSystem, order: int = DEFAULT_LAURENT_ORDER) -> LaurentCoefficients:
    """Solve the boundary conditions for the Laurent coefficients.

    Subtracting the two per-mode boundary systems eliminates a_n and yields

        b_{n+2} = sum_k -i kappa_k (r2**(2(n+1)) - |z_k|**(2(n+1)))
                  / (conj(z_k)**(n+1) (q**(n+1) - 1))
        a_n     = sum_k -i kappa_k (r1**(2(n+1)) - |z_k|**(2(n+1)))
                  / (z_k**(n+1) r1**(2(n+1)) (q**(n+1) - 1))

    These are explicit, so this representation is independent of the
    q-function machinery and serves as its oracle.
    """
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order}")
    geom = sys.geom
    q = geom.q
    r1sq = geom.r1 * geom.r1
    r2sq = geom.r2 * geom.r2
    a: list[complex] = []
    b: list[complex] = []
    qn1 = 1.0            # q**(n+1)
    r1p = 1.0            # r1**(2(n+1))
    r2p = 1.0            # r2**(2(n+1))
    powers = [complex(v.position) for v in sys.vortices]      # z_k**(n+1)
    mods = [abs(complex(v.position)) ** 2 for v in sys.vortices]
    modp = list(mods)                                          # |z_k|**(2(n+1))
    for n in range(order + 1):
        qn1 *= q
        r1p *= r1sq
        r2p *= r2sq
        an = 0j
        bn = 0j
        for k, v in enumerate(sys.vortices):
            kap = v.strength
            zkp = powers[k]
            mp = modp[k]
            an += (-1j * kap) * (r1p - mp) / (zkp * r1p * (qn1 - 1.0))
            bn += (-1j * kap) * (r2p - mp) / (zkp.conjugate() * (qn1 - 1.0))
            powers[k] = zkp * complex(v.position)
            modp[k] = mp * mods[k]
        a.append(an)
        b.append(bn)
    return LaurentCoefficients(a=tuple(a), b=tuple(b), order=order)


def _pole_guard(z: complex, pole: complex, scale: float, what: str) -> None:
    if abs(z - pole) <= _COINCIDENCE_RTOL * max(scale, abs(z), abs(pole)):
        raise SingularityError(f"field point {z!r} coincides with {what} at {pole!r}")


def velocity_laurent(sys: VortexSystem, coeffs: LaurentCoefficients, z: complex) -> complex:
    """Conjugate velocity from the truncated Laurent representation."""
    z = complex(z)
    geom = sys.geom
    total = 0j
    for v in sys.vortices:
        zk = complex(v.position)
        _pole_guard(z, zk, geom.r1, "a vortex")
        total += 1j * v.strength / (z - zk)
    zp = 1 + 0j
    for an in coeffs.a:
        total += an * zp
        zp *= z
    w = 1.0 / (z * z)
    for bn in coeffs.b:
        total += bn * w
        w /= z
    return total


def velocity_images(sys: VortexSystem, z: complex, n_range: int) -> complex:
    """Conjugate velocity from the image lattice truncated at ``n_range`` shells.

    The + and - family poles of each shell are paired before accumulation
    (individually the two families diverge as n -> -inf), shells are summed
    in the fixed order 0, +1, -1, +2, -2, ..., and the center-vortex term
    i*kappa/z left over from the conditionally convergent regrouping is
    added per vortex.
    """
    if n_range < 0:
        raise DomainError(f"n_range must be >= 0, got {n_range}")
    z = complex(z)
    geom = sys.geom
    q = geom.q
    r1sq = geom.r1 * geom.r1
    shells = [0]
    for m in range(1, n_range + 1):
        shells.extend((m, -m))
    total = 0j
    for v in sys.vortices:
        zk = complex(v.position)
        wk = r1sq / zk.conjugate()
        acc = 1.0 / z
        for n in shells:
            qn = q ** n
            p_plus = zk * qn
            p_minus = wk * qn
            if n == 0:
                _pole_guard(z, p_plus, geom.r1, "a vortex")
            elif abs(z - p_plus) <= _COINCIDENCE_RTOL * max(abs(z), abs(p_plus)):
                raise PoleProximityError(
                    f"field point {z!r} sits on the image {p_plus!r} (shell {n}, + family)",
                    index=n, pole=p_plus,
                )
            if abs(z - p_minus) <= _COINCIDENCE_RTOL * max(abs(z), abs(p_minus)):
                raise PoleProximityError(
                    f"field point {z!r} sits on the image {p_minus!r} (shell {n}, - family)",
                    index=n, pole=p_minus,
                )
            acc += 1.0 / (z - p_plus) - 1.0 / (z - p_minus)
        total += 1j * v.strength * acc
    return total


def _require_closed_annulus(geom: AnnulusGeometry, z: complex) -> None:
    az = abs(z)
    if not (geom.r1 * (1.0 - 1e-12) <= az <= geom.r2 * (1.0 + 1e-12)):
        raise DomainError(
            f"field point {z!r} (|z|={az:g}) lies outside the closed annulus "
            f"[{geom.r1:g}, {geom.r2:g}]; the closed forms are not evaluated there"
        )


def _qlog_correction(geom: AnnulusGeometry, zk: complex, z: complex,
                     policy: TruncationPolicy | None) -> complex:
    """Image contribution of one vortex: four q-logarithms over z (q - 1).

    Evaluated through the pole sum, whose geometric ratio 1/q keeps full
    accuracy even when an argument modulus approaches q near the walls.
    """
    base = geom.base
    q = geom.q
    zkc = zk.conjugate()
    r1sq = geom.r1 * geom.r1
    r2sq = geom.r2 * geom.r2
    s = (q_log_1m(z / zk, base, policy)
         - q_log_1m(z * zkc / r1sq, base, policy)
         + q_log_1m(r2sq / (z * zkc), base, policy)
         - q_log_1m(zk / z, base, policy))
    return s / (z * (q - 1.0))


def velocity_qlog(sys: VortexSystem, z: complex,
                  policy: TruncationPolicy | None = None) -> complex:
    """Closed-form conjugate velocity from four q-logarithms per vortex:

        Vbar(z) = sum_k i kappa_k [ 1/(z - z_k)
                   + (Ln_q(1 - z/z_k) - Ln_q(1 - z conj(z_k)/r1**2)
                      + Ln_q(1 - r2**2/(z conj(z_k))) - Ln_q(1 - z_k/z))
                     / (z (q - 1)) ]

    Valid for z in the closed annulus (all four arguments then stay inside
    the |.| < q domain).
    """
    z = complex(z)
    geom = sys.geom
    _require_closed_annulus(geom, z)
    total = 0j
    for v in sys.vortices:
        zk = complex(v.position)
        _pole_guard(z, zk, geom.r1, "a vortex")
        total += 1j * v.strength * (1.0 / (z - zk) + _qlog_correction(geom, zk, z, policy))
    return total


def velocity(sys: VortexSystem, z: complex, representation: str = "qlog", *,
             policy: TruncationPolicy | None = None,
             coeffs: LaurentCoefficients | None = None,
             laurent_order: int = DEFAULT_LAURENT_ORDER,
             n_range: int | None = None) -> complex:
    """Dispatch to one of the three velocity representations."""
    if representation == "qlog":
        return velocity_qlog(sys, z, policy)
    if representation == "images":
        if n_range is None:
            n_range = (policy or TruncationPolicy()).image_pairs
        return velocity_images(sys, z, n_range)
    if representation == "laurent":
        if coeffs is None:
            coeffs = laurent_coefficients(sys, laurent_order)
        return velocity_laurent(sys, coeffs, z)
    raise DomainError(f"unknown representation {representation!r}")


def potential(sys: VortexSystem, z: complex,
              policy: TruncationPolicy | None = None) -> complex:
    """Complex potential F(z), holomorphic with F'(z) = Vbar(z).

        F(z) = sum_k i kappa_k [ log(z - z_k)
                 + log E_q(z/((1-q) z_k)) + log E_q(z_k/((1-q) z))
                 - log E_q(z conj(z_k)/((1-q) r1**2))
                 - log E_q(r2**2/((1-q) z conj(z_k))) ]

    Principal branches per factor; F is meaningful only up to an additive
    constant and branch jumps in Re F.  Im F (the stream function) is
    branch-free, single-valued, and constant on both boundary circles.
    """
    z = complex(z)
    geom = sys.geom
    _require_closed_annulus(geom, z)
    q = geom.q
    r1sq = geom.r1 * geom.r1
    r2sq = geom.r2 * geom.r2
    total = 0j
    for v in sys.vortices:
        zk = complex(v.position)
        _pole_guard(z, zk, geom.r1, "a vortex")
        zkc = zk.conjugate()
        e1 = q_exp(z / ((1.0 - q) * zk), geom.base, policy)
        e2 = q_exp(zk / ((1.0 - q) * z), geom.base, policy)
        e3 = q_exp(z * zkc / ((1.0 - q) * r1sq), geom.base, policy)
        e4 = q_exp(r2sq / ((1.0 - q) * z * zkc), geom.base, policy)
        total += 1j * v.strength * (
            cmath.log(z - zk)
            + cmath.log(e1) + cmath.log(e2) - cmath.log(e3) - cmath.log(e4)
        )
    return total


def stream(sys: VortexSystem, z: complex,
           policy: TruncationPolicy | None = None) -> float:
    """Stream function Psi = Im F; constant along streamlines and walls."""
    return potential(sys, z, policy).imag


def boundary_residual(sys: VortexSystem, representation: str,
                      samples_per_circle: int, *,
                      policy: TruncationPolicy | None = None,
                      laurent_order: int = DEFAULT_LAURENT_ORDER,
                      n_range: int | None = None) -> tuple[float, float]:
    """Maximum normal-velocity magnitude on each wall.

    Impermeability demands Re(Vbar(z) z) = 0 on |z| = r1 and |z| = r2
    (equivalently Vbar(z) z + V(conj z) conj(z) = 0: the two agree on the
    circles since the sum is twice the real part).  The residual reported
    per circle is max_j |Re(Vbar(z_j) z_j)| / |z_j| over
    ``samples_per_circle`` uniformly spaced boundary points.  Samples that
    land on a pole (a vortex hugging a wall) are reported via a warning and
    skipped.
    """
    if samples_per_circle < 4:
        raise DomainError(f"need at least 4 samples per circle, got {samples_per_circle}")
    if representation not in REPRESENTATIONS:
        raise DomainError(f"unknown representation {representation!r}")
    geom = sys.geom
    coeffs = laurent_coefficients(sys, laurent_order) if representation == "laurent" else None
    if n_range is None:
        n_range = (policy or TruncationPolicy()).image_pairs
    maxima = []
    for radius in (geom.r1, geom.r2):
        worst = 0.0
        for j in range(samples_per_circle):
            zb = radius * cmath.exp(2j * math.pi * j / samples_per_circle)
            try:
                vbar = velocity(sys, zb, representation, policy=policy,
                                coeffs=coeffs, n_range=n_range)
            except (PoleProximityError, SingularityError) as exc:
                warnings.warn(f"boundary sample {zb!r} skipped: {exc}", stacklevel=2)
                continue
            worst = max(worst, abs((vbar * zb).real) / abs(zb))
        maxima.append(worst)
    return maxima[0], maxima[1]


def field_sample(sys: VortexSystem, z: complex, representation: str = "qlog", *,
                 policy: TruncationPolicy | None = None,
                 coeffs: LaurentCoefficients | None = None,
                 laurent_order: int = DEFAULT_LAURENT_ORDER,
                 n_range: int | None = None) -> FieldSample:
    """Evaluate velocity (chosen representation), potential and stream at z."""
    vbar = velocity(sys, z, representation, policy=policy, coeffs=coeffs,
                    laurent_order=laurent_order, n_range=n_range)
    pot = potential(sys, z, policy)
    return FieldSample(z=complex(z), velocity_conj=vbar, potential=pot,
                       stream=pot.imag)


def _velocity_alpha_form(sys: VortexSystem, z: complex,
                         policy: TruncationPolicy | None = None) -> complex:
    """Compact q-derivative form of the velocity; test-only, not a public path.

    With alpha = log_q(|z_k|**2 / r1**2), the rescalings z -> q**alpha z and
    z -> q**(alpha-1) z map the vortex q-logarithms onto the wall ones, so
    the four-term bracket collapses into two q-difference quotients:

        Vbar = sum_k i kappa_k [ 1/(z - z_k)
                 - [alpha]_q   D_{q**alpha}     Ln_q(1 - z/z_k)
                 + [alpha-1]_q D_{q**(alpha-1)} Ln_q(1 - z_k/z) ]

    Mathematically identical to :func:`velocity_qlog`; kept as a cross-check
    of the rescaling identity.
    """
    z = complex(z)
    geom = sys.geom
    _require_closed_annulus(geom, z)
    base = geom.base
    q = geom.q
    r1sq = geom.r1 * geom.r1
    total = 0j
    for v in sys.vortices:
        zk = complex(v.position)
        _pole_guard(z, zk, geom.r1, "a vortex")
        alpha = math.log(abs(zk) ** 2 / r1sq) / math.log(q)
        qa = q ** alpha            # = |z_k|**2 / r1**2
        qb = q ** (alpha - 1.0)    # = |z_k|**2 / r2**2, in (0, 1)
        na = (qa - 1.0) / (q - 1.0)
        nb = (qb - 1.0) / (q - 1.0)
        d1 = (q_log_1m(qa * z / zk, base, policy)
              - q_log_1m(z / zk, base, policy)) / ((qa - 1.0) * z)
        d2 = (q_log_1m(zk / (qb * z), base, policy)
              - q_log_1m(zk / z, base, policy)) / ((qb - 1.0) * z)
        total += 1j * v.strength * (1.0 / (z - zk) - na * d1 + nb * d2)
    return total
