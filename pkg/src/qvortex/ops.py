"""Grid, orbit, validation and limit-sweep assemblies behind the service.

Everything here is deterministic: fixed sample layouts, fixed summation
order, no randomness, so repeated runs with one configuration produce
bit-identical numbers.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

from .dynamics import (
    integrate,
    limit_one_cylinder,
    limit_one_disk,
    orbit_frequency,
)
from .errors import DomainError, IntegrationAborted, PoleProximityError, SingularityError
from .flow import (
    DEFAULT_LAURENT_ORDER,
    VortexSystem,
    boundary_residual,
    laurent_coefficients,
    potential,
    velocity,
    velocity_images,
    velocity_laurent,
    velocity_qlog,
)
from .images import AnnulusGeometry, Vortex, cascade
from .qcalc import TruncationPolicy
from .theta import rescale_to_unit_outer, stream_theta

FIELD_REPRESENTATIONS = ("laurent", "images", "qlog", "theta")


def field_grid(sys: VortexSystem, n_r: int, n_theta: int,
               representation: str = "qlog", *,
               policy: TruncationPolicy | None = None,
               laurent_order: int = DEFAULT_LAURENT_ORDER,
               residual_samples: int = 64) -> tuple[list[tuple[float, float, float, float, float]], dict]:
    """Sample (x, y, u, v, psi) on a polar grid of cell centers.

    Radii sit at r1 + (i + 1/2) (r2 - r1)/n_r, angles at 2 pi j / n_theta;
    rows are emitted radius-major.  u, v come from the requested velocity
    representation ("theta" reuses the q-log closed form for velocity and
    takes psi from the theta-function stream); psi otherwise is Im F.
    Grid points within pole tolerance of a vortex get NaN velocity entries.
    """
    if n_r < 1 or n_theta < 1:
        raise DomainError(f"grid must be at least 1x1, got {n_r}x{n_theta}")
    if representation not in FIELD_REPRESENTATIONS:
        raise DomainError(f"unknown representation {representation!r}")
    geom = sys.geom
    pol = policy or TruncationPolicy()
    coeffs = laurent_coefficients(sys, laurent_order) if representation == "laurent" else None
    unit_sys = scale = None
    if representation == "theta":
        unit_sys, scale = rescale_to_unit_outer(sys)

    velocity_rep = "qlog" if representation == "theta" else representation
    rows: list[tuple[float, float, float, float, float]] = []
    dr = (geom.r2 - geom.r1) / n_r
    for i in range(n_r):
        radius = geom.r1 + (i + 0.5) * dr
        for j in range(n_theta):
            z = radius * cmath.exp(2j * math.pi * j / n_theta)
            try:
                vbar = velocity(sys, z, velocity_rep, policy=pol, coeffs=coeffs,
                                n_range=pol.image_pairs)
                if representation == "theta":
                    psi = stream_theta(unit_sys, z * scale, pol)
                else:
                    psi = potential(sys, z, pol).imag
                rows.append((z.real, z.imag, vbar.real, -vbar.imag, psi))
            except (SingularityError, PoleProximityError):
                rows.append((z.real, z.imag, math.nan, math.nan, math.nan))
    res_inner, res_outer = boundary_residual(
        sys, velocity_rep, residual_samples, policy=pol, laurent_order=laurent_order)
    meta = {
        "r1": geom.r1,
        "r2": geom.r2,
        "q": geom.q,
        "vortices": [[complex(v.position).real, complex(v.position).imag, v.strength]
                     for v in sys.vortices],
        "representation": representation,
        "n_r": n_r,
        "n_theta": n_theta,
        "max_terms": pol.max_terms,
        "abs_tol": pol.abs_tol,
        "image_pairs": pol.image_pairs,
        "laurent_order": laurent_order,
        "residual_inner": res_inner,
        "residual_outer": res_outer,
    }
    return rows, meta


def orbit_run(sys: VortexSystem, t_end: float, dt: float, *,
              policy: TruncationPolicy | None = None) -> dict:
    """Integrate a system and summarize conservation diagnostics.

    An aborted integration is reported, not raised: the partial trajectory
    is returned together with the diagnostic under ``aborted_reason``.
    """
    aborted_reason = None
    try:
        traj = integrate(sys, t_end, dt, policy)
    except IntegrationAborted as exc:
        traj = exc.trajectory
        aborted_reason = exc.reason
    drifts = []
    for k, r0 in enumerate(traj.conserved_radii):
        moduli = abs(traj.positions[:, k])
        drifts.append(float(max(abs(moduli - r0))))
    summary: dict = {
        "n_steps": len(traj.times) - 1,
        "dt": dt,
        "t_final": float(traj.times[-1]),
        "radius_drift": drifts,
        "aborted_reason": aborted_reason,
    }
    if len(sys.vortices) == 1:
        state = orbit_frequency(sys.geom, sys.vortices[0].strength,
                                abs(complex(sys.vortices[0].position)), policy)
        summary["omega"] = state.omega
        summary["omega1"] = state.omega1
        summary["omega2"] = state.omega2
        summary["period"] = (2.0 * math.pi / abs(state.omega)
                             if state.omega != 0.0 else None)
    return {"times": traj.times.tolist(),
            "positions": [[[z.real, z.imag] for z in row] for row in traj.positions],
            "summary": summary}


def images_run(vortex: Vortex, geom: AnnulusGeometry, depth: int = 3) -> list[dict]:
    """Cascade images of one vortex as JSON-ready entries."""
    image_set = cascade(vortex, geom, depth)
    return [
        {"re": complex(img.position).real, "im": complex(img.position).imag,
         "sign": img.strength_sign, "generation": img.generation,
         "family": img.family.value}
        for img in image_set.images
    ]


def _validation_points(sys: VortexSystem, n_samples: int) -> list[complex]:
    # five radial bands in the middle of the annulus, golden-ratio angle
    # stepping; points too close to a vortex are nudged in angle
    geom = sys.geom
    log_ratio = math.log(geom.r2 / geom.r1)
    exclusion = 0.05 * (geom.r2 - geom.r1)
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    pts: list[complex] = []
    for i in range(n_samples):
        sigma = 0.35 + 0.30 * (i % 5) / 4.0
        radius = geom.r1 * math.exp(sigma * log_ratio)
        angle = 2.0 * math.pi * ((0.17 + golden * i) % 1.0)
        z = radius * cmath.exp(1j * angle)
        for _ in range(64):
            if all(abs(z - complex(v.position)) > exclusion for v in sys.vortices):
                break
            angle += 0.11
            z = radius * cmath.exp(1j * angle)
        pts.append(z)
    return pts


def validate_system(sys: VortexSystem, *, n_samples: int = 50,
                    samples_per_circle: int = 256, tol: float = 1e-8,
                    policy: TruncationPolicy | None = None,
                    laurent_order: int = DEFAULT_LAURENT_ORDER) -> dict:
    """Cross-check the three velocity representations and wall residuals.

    Returns the maximum pairwise discrepancies over the sample set, the
    boundary residuals of the closed-form representation, and a pass flag
    (everything below ``tol``).
    """
    if n_samples < 1:
        raise DomainError(f"n_samples must be >= 1, got {n_samples}")
    pol = policy or TruncationPolicy()
    coeffs = laurent_coefficients(sys, laurent_order)
    d_li = d_iq = d_lq = 0.0
    for z in _validation_points(sys, n_samples):
        v_l = velocity_laurent(sys, coeffs, z)
        v_i = velocity_images(sys, z, pol.image_pairs)
        v_q = velocity_qlog(sys, z, pol)
        d_li = max(d_li, abs(v_l - v_i))
        d_iq = max(d_iq, abs(v_i - v_q))
        d_lq = max(d_lq, abs(v_l - v_q))
    res_inner, res_outer = boundary_residual(sys, "qlog", samples_per_circle,
                                             policy=pol)
    worst = max(d_li, d_iq, d_lq)
    return {
        "n_samples": n_samples,
        "laurent_order": laurent_order,
        "image_pairs": pol.image_pairs,
        "discrepancy_laurent_images": d_li,
        "discrepancy_images_qlog": d_iq,
        "discrepancy_laurent_qlog": d_lq,
        "max_discrepancy": worst,
        "residual_inner": res_inner,
        "residual_outer": res_outer,
        "tol": tol,
        "passed": bool(worst < tol and res_inner < tol and res_outer < tol),
    }


# Canonical scenarios for the q -> infinity comparisons.  The vortex and
# the sample ring stay fixed while one wall runs away.
_CYL_R1 = 1.0
_CYL_VORTEX = 1.7 + 0.6j
_DISK_R2 = 1.0
_DISK_VORTEX = 0.55 + 0.2j
_KAPPA = 1.0


def _limit_case_error(case: str, q: float, n_points: int,
                      policy: TruncationPolicy | None) -> dict:
    if case == "cylinder":
        geom_args = (_CYL_R1, _CYL_R1 * math.sqrt(q))
        z0 = _CYL_VORTEX
        radii = [1.2 + 2.2 * j / max(n_points - 1, 1) for j in range(n_points)]
        limit = lambda z: limit_one_cylinder(_CYL_R1, _KAPPA, z0, z)
        omega_limit = limit_one_cylinder(_CYL_R1, _KAPPA, z0, 3.0 + 0j)[1]
    else:
        geom_args = (_DISK_R2 / math.sqrt(q), _DISK_R2)
        z0 = _DISK_VORTEX
        radii = [0.25 + 0.65 * j / max(n_points - 1, 1) for j in range(n_points)]
        limit = lambda z: limit_one_disk(_DISK_R2, _KAPPA, z0, z)
        omega_limit = limit_one_disk(_DISK_R2, _KAPPA, z0, 0.9 + 0j)[1]
    geom = AnnulusGeometry(*geom_args)
    sys = VortexSystem(geom=geom, vortices=(Vortex(z0, _KAPPA),))
    worst = 0.0
    for j, radius in enumerate(radii):
        z = radius * cmath.exp(1j * (0.3 + 2.0 * math.pi * j / max(n_points, 1)))
        if abs(z - z0) < 0.1:
            z = radius * cmath.exp(1j * (0.3 + 2.0 * math.pi * j / max(n_points, 1) + 0.25))
        v_full = velocity_qlog(sys, z, policy)
        v_lim = limit(z)[0]
        worst = max(worst, abs(v_full - v_lim) / abs(v_lim))
    omega_full = orbit_frequency(geom, _KAPPA, abs(z0), policy).omega
    return {
        "case": case,
        "q": q,
        "max_rel_err": worst,
        "omega_rel_err": abs(omega_full - omega_limit) / abs(omega_limit),
    }


def limits_table(q_values: Sequence[float] = (1e3, 1e4, 1e5, 1e6),
                 n_points: int = 20, case: str = "both", *,
                 policy: TruncationPolicy | None = None) -> dict:
    """Compare the annulus solution against both one-wall limits.

    For each q the full closed-form velocity of a canonical single-vortex
    system is evaluated at ``n_points`` sample points and compared with the
    corresponding limit flow; the table reports the max relative error, and
    ``monotone`` states whether the error decreases as q grows.
    """
    if case not in ("cylinder", "disk", "both"):
        raise DomainError(f"unknown limit case {case!r}")
    if not q_values:
        raise DomainError("q_values must be non-empty")
    qs = sorted(float(q) for q in q_values)
    if qs[0] <= 16.0:
        raise DomainError("limit comparisons need q > 16 so the far wall is remote")
    cases = ("cylinder", "disk") if case == "both" else (case,)
    rows = []
    monotone = True
    for c in cases:
        errs = []
        for q in qs:
            row = _limit_case_error(c, q, n_points, policy)
            rows.append(row)
            errs.append(row["max_rel_err"])
        monotone = monotone and all(b < a for a, b in zip(errs, errs[1:]))
    return {"rows": rows, "monotone": monotone}
