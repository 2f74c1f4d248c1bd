"""Vortex-motion tests: frequencies, conservation, limits, halting."""

import cmath
import math

import numpy as np
import pytest

from qvortex.dynamics import (
    AlphaParam,
    integrate,
    limit_one_cylinder,
    limit_one_disk,
    orbit_frequency,
    potential_one_cylinder,
    potential_one_disk,
    self_velocity,
)
from qvortex.errors import DomainError, IntegrationAborted, SingularityError
from qvortex.flow import VortexSystem, velocity_qlog
from qvortex.images import AnnulusGeometry, Vortex
from qvortex.qcalc import TruncationPolicy, q_harmonic

GEOM = AnnulusGeometry(1.0, 2.0)  # q = 4
TIGHT = TruncationPolicy(max_terms=400, abs_tol=1e-14)


class TestSelfVelocity:
    def test_rest_at_geometric_mean(self):
        sys = VortexSystem(geom=GEOM,
                           vortices=(Vortex(GEOM.mean_radius + 0j, 1.0),))
        assert abs(self_velocity(sys, 0)) < 1e-12

    def test_rest_point_rotated(self):
        z0 = GEOM.mean_radius * cmath.exp(2.3j)
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(z0, -0.7),))
        assert abs(self_velocity(sys, 0)) < 1e-12

    @pytest.mark.parametrize("z0", [1.2 * cmath.exp(0.7j), 1.8 * cmath.exp(-2.0j)])
    def test_motion_is_tangential(self, z0):
        # d|z0|^2/dt = 2 Re(conj(z0) dz0/dt) = 0, with dz0/dt the conjugate
        # of the returned velocity
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(z0, 1.0),))
        vbar = self_velocity(sys, 0)
        radial = (z0.conjugate() * vbar.conjugate()).real
        assert abs(radial) < 1e-12 * max(1.0, abs(vbar))

    def test_mirror_pair_velocities_conjugate(self):
        # opposite-strength vortices mirrored across the real axis move as
        # mirror images of each other
        z0 = 1.5 * cmath.exp(0.5j)
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(z0, 1.0),
                                                Vortex(z0.conjugate(), -1.0)))
        v0 = self_velocity(sys, 0)
        v1 = self_velocity(sys, 1)
        assert abs(v1 - v0.conjugate()) < 1e-12

    def test_index_validated(self):
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(1.4 + 0j, 1.0),))
        with pytest.raises(DomainError):
            self_velocity(sys, 1)


class TestOrbitFrequency:
    @pytest.mark.parametrize("q", [2.0, 4.0, 16.0])
    def test_rest_radius(self, q):
        geom = AnnulusGeometry(1.0, math.sqrt(q))
        kappa = 1.0
        state = orbit_frequency(geom, kappa, geom.mean_radius)
        assert abs(state.omega) < 1e-12 * kappa / geom.r1 ** 2

    @pytest.mark.parametrize("q", [2.0, 4.0, 16.0])
    def test_near_wall_asymptotics(self, q):
        geom = AnnulusGeometry(1.0, math.sqrt(q))
        kappa, eps = 1.0, 1e-3
        inner = orbit_frequency(geom, kappa, geom.r1 * math.exp(eps)).omega
        outer = orbit_frequency(geom, kappa, geom.r2 * math.exp(-eps)).omega
        assert inner == pytest.approx(kappa / (2 * geom.r1 ** 2 * eps), rel=0.05)
        assert outer == pytest.approx(-kappa / (2 * geom.r2 ** 2 * eps), rel=0.05)

    def test_sign_structure_across_annulus(self):
        mean = GEOM.mean_radius
        for s in range(1, 40):
            radius = GEOM.r1 * math.exp(s / 40.0 * math.log(GEOM.r2 / GEOM.r1))
            state = orbit_frequency(GEOM, 1.0, radius)
            assert state.omega1 > 0.0 > state.omega2
            assert state.omega == state.omega1 + state.omega2
            if abs(radius - mean) > 1e-9:
                assert (state.omega > 0) == (radius < mean)

    def test_linear_in_strength(self):
        radius = 1.3
        base = orbit_frequency(GEOM, 1.0, radius).omega
        assert orbit_frequency(GEOM, -2.5, radius).omega == pytest.approx(
            -2.5 * base, rel=1e-14)

    def test_matches_self_velocity(self):
        # conj(self_velocity) = i omega z0 for a single vortex
        z0 = 1.3 * cmath.exp(1.1j)
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(z0, 1.0),))
        omega = orbit_frequency(GEOM, 1.0, abs(z0)).omega
        zdot = self_velocity(sys, 0).conjugate()
        assert abs(zdot - 1j * omega * z0) < 1e-12 * max(1.0, abs(zdot))

    def test_inner_frequency_tends_to_q_harmonic(self):
        # approaching the inner wall, the outer-ladder term of omega tends
        # to -H(q) in units of kappa/(|z0|^2 (q-1))
        geom = GEOM
        radius = geom.r1 * (1.0 + 1e-9)
        state = orbit_frequency(geom, 1.0, radius, TIGHT)
        scale = radius * radius * (geom.q - 1.0)
        assert state.omega2 * scale == pytest.approx(-q_harmonic(geom.q, TIGHT),
                                                     rel=1e-6)

    def test_radius_validated(self):
        with pytest.raises(DomainError):
            orbit_frequency(GEOM, 1.0, 0.9)
        with pytest.raises(DomainError):
            orbit_frequency(GEOM, 1.0, 2.0)


class TestAlphaParam:
    def test_bounds_and_midpoint(self):
        assert 0.0 < AlphaParam.from_position(GEOM, 1.05 + 0j).alpha < 0.5
        assert AlphaParam.from_position(GEOM, GEOM.mean_radius + 0j).alpha == \
            pytest.approx(0.5, abs=1e-14)
        assert 0.5 < AlphaParam.from_position(GEOM, 1.9 + 0j).alpha < 1.0

    def test_outside_rejected(self):
        with pytest.raises(DomainError):
            AlphaParam.from_position(GEOM, 2.5 + 0j)


class TestIntegrate:
    def test_single_vortex_closes_orbit_after_one_period(self):
        z0 = 1.3 + 0j
        kappa = 1.0
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(z0, kappa),))
        omega = orbit_frequency(GEOM, kappa, abs(z0)).omega
        period = 2.0 * math.pi / abs(omega)
        traj = integrate(sys, period, period / 2000.0)
        end = complex(traj.positions[-1, 0])
        assert abs(end - z0) < 1e-6 * abs(z0)
        moduli = np.abs(traj.positions[:, 0])
        assert float(np.max(np.abs(moduli - abs(z0)))) < 1e-8

    def test_phase_advances_linearly(self):
        z0 = 1.2 + 0j
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(z0, 1.0),))
        omega = orbit_frequency(GEOM, 1.0, abs(z0)).omega
        t_end = 0.4 * 2.0 * math.pi / abs(omega)
        traj = integrate(sys, t_end, t_end / 800.0)
        for i in (200, 400, 800):
            expected = z0 * cmath.exp(1j * omega * traj.times[i])
            assert abs(complex(traj.positions[i, 0]) - expected) < 1e-7

    def test_stationary_at_geometric_mean(self):
        z0 = GEOM.mean_radius * cmath.exp(0.6j)
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(z0, 1.0),))
        traj = integrate(sys, 10.0, 0.01)
        drift = max(abs(complex(p) - z0) for p in traj.positions[:, 0])
        assert drift < 1e-10

    def test_radius_conserved_over_ten_periods(self):
        # drift accumulates one dt**5 local error per step; at 800 steps
        # per period ten periods stay well inside 1e-8
        z0 = 1.3 + 0j
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(z0, 1.0),))
        omega = orbit_frequency(GEOM, 1.0, abs(z0)).omega
        period = 2.0 * math.pi / abs(omega)
        traj = integrate(sys, 10.0 * period, period / 800.0)
        moduli = np.abs(traj.positions[:, 0])
        assert float(np.max(np.abs(moduli - abs(z0)))) < 1e-8

    def test_corotating_pair_keeps_distance(self):
        rho = GEOM.mean_radius
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(rho + 0j, 1.0),
                                                Vortex(-rho + 0j, 1.0)))
        traj = integrate(sys, 2.0, 1e-3)
        dist0 = abs(complex(traj.positions[0, 0]) - complex(traj.positions[0, 1]))
        dists = np.abs(traj.positions[:, 0] - traj.positions[:, 1])
        assert float(np.max(np.abs(dists - dist0))) < 1e-6 * dist0
        # the configuration rotates rigidly: both vortices stay on their circle
        for k in (0, 1):
            moduli = np.abs(traj.positions[:, k])
            assert float(np.max(np.abs(moduli - rho))) < 1e-7

    def test_wall_overshoot_aborts_with_partial_trajectory(self):
        # exact dynamics never cross a wall (every advecting field is
        # impermeable), but a step far too large for the near-wall orbit
        # frequency overshoots; the integrator must halt with a diagnostic
        radius = GEOM.r2 * (1.0 - 1e-3)
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(radius + 0j, 1.0),))
        with pytest.raises(IntegrationAborted) as err:
            integrate(sys, 1.0, 0.05)
        partial = err.value.trajectory
        assert partial is not None
        assert len(partial.times) >= 1
        assert err.value.time < 1.0
        assert err.value.reason

    def test_dipole_cannot_cross_wall(self):
        # a dipole aimed at the inner wall is steered along it by its
        # images; both vortices stay strictly inside
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(1.5 + 0.03j, 1.0),
                                                Vortex(1.5 - 0.03j, -1.0)))
        traj = integrate(sys, 0.3, 5e-4)
        moduli = np.abs(traj.positions)
        assert float(np.min(moduli)) > GEOM.r1
        assert float(np.max(moduli)) < GEOM.r2

    def test_parameters_validated(self):
        sys = VortexSystem(geom=GEOM, vortices=(Vortex(1.4 + 0j, 1.0),))
        with pytest.raises(DomainError):
            integrate(sys, 1.0, 0.0)
        with pytest.raises(DomainError):
            integrate(sys, -1.0, 0.1)


class TestOneCylinderLimit:
    R1 = 1.0
    Z0 = 1.7 + 0.6j

    def test_equals_circle_theorem_form(self):
        # vortex, negative image at the inverse point, positive image at
        # the center: term-for-term identical to the pair+center form
        kappa = 0.8
        a = self.R1 ** 2 / self.Z0.conjugate()
        for z in (2.5 + 0.3j, 1.4 - 1.1j, -2.0 + 0.5j):
            vbar, _ = limit_one_cylinder(self.R1, kappa, self.Z0, z)
            explicit = (1j * kappa / (z - self.Z0)
                        - 1j * kappa / (z - a) + 1j * kappa / z)
            assert abs(vbar - explicit) < 1e-14

    def test_annulus_converges_to_limit(self):
        errs = []
        for q in (1e3, 1e4, 1e5, 1e6):
            geom = AnnulusGeometry(self.R1, math.sqrt(q))
            sys = VortexSystem(geom=geom, vortices=(Vortex(self.Z0, 1.0),))
            worst = 0.0
            for j in range(20):
                z = (1.2 + 2.0 * j / 19) * cmath.exp(1j * (0.3 + 0.31 * j))
                v_full = velocity_qlog(sys, z)
                v_lim, _ = limit_one_cylinder(self.R1, 1.0, self.Z0, z)
                worst = max(worst, abs(v_full - v_lim) / abs(v_lim))
            errs.append(worst)
        assert errs[-1] < 1e-4
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_omega_value(self):
        # |z0| = r1 sqrt(2): omega = kappa/(2 r1**2)
        kappa = 1.3
        _, omega = limit_one_cylinder(self.R1, kappa, math.sqrt(2.0) + 0j, 3.0 + 0j)
        assert omega == pytest.approx(kappa / (2.0 * self.R1 ** 2), rel=1e-14)

    def test_omega_matches_annulus(self):
        geom = AnnulusGeometry(self.R1, 1000.0)
        full = orbit_frequency(geom, 1.0, abs(self.Z0)).omega
        _, lim = limit_one_cylinder(self.R1, 1.0, self.Z0, 3.0 + 0j)
        assert full == pytest.approx(lim, rel=1e-4)

    def test_potential_derivative(self):
        kappa = 1.0
        z = 2.2 + 0.4j
        h = 1e-6
        dfdz = (potential_one_cylinder(self.R1, kappa, self.Z0, z + h)
                - potential_one_cylinder(self.R1, kappa, self.Z0, z - h)) / (2 * h)
        vbar, _ = limit_one_cylinder(self.R1, kappa, self.Z0, z)
        assert abs(dfdz - vbar) < 1e-8

    def test_singularities_rejected(self):
        with pytest.raises(SingularityError):
            limit_one_cylinder(self.R1, 1.0, self.Z0, self.Z0)
        with pytest.raises(SingularityError):
            limit_one_cylinder(self.R1, 1.0, self.Z0, 0j)
        with pytest.raises(DomainError):
            limit_one_cylinder(self.R1, 1.0, 0.5 + 0j, 2.0 + 0j)


class TestOneDiskLimit:
    R2 = 1.0
    Z0 = 0.55 + 0.2j

    def test_two_image_structure(self):
        kappa = 1.1
        b = self.R2 ** 2 / self.Z0.conjugate()
        for z in (0.3 + 0.4j, -0.6 + 0.2j, 0.8j):
            vbar, _ = limit_one_disk(self.R2, kappa, self.Z0, z)
            explicit = 1j * kappa / (z - self.Z0) - 1j * kappa / (z - b)
            assert abs(vbar - explicit) < 1e-14

    def test_annulus_converges_to_limit(self):
        errs = []
        for q in (1e3, 1e4, 1e5, 1e6):
            geom = AnnulusGeometry(self.R2 / math.sqrt(q), self.R2)
            sys = VortexSystem(geom=geom, vortices=(Vortex(self.Z0, 1.0),))
            worst = 0.0
            for j in range(20):
                z = (0.25 + 0.65 * j / 19) * cmath.exp(1j * (0.9 + 0.33 * j))
                if abs(z - self.Z0) < 0.1:
                    continue
                v_full = velocity_qlog(sys, z)
                v_lim, _ = limit_one_disk(self.R2, 1.0, self.Z0, z)
                worst = max(worst, abs(v_full - v_lim) / abs(v_lim))
            errs.append(worst)
        assert errs[-1] < 1e-4
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_omega_at_center(self):
        kappa = 0.9
        _, omega = limit_one_disk(self.R2, kappa, 1e-12 + 0j, 0.5 + 0j)
        assert omega == pytest.approx(-kappa / self.R2 ** 2, rel=1e-9)

    def test_potential_derivative(self):
        kappa = 1.0
        z = 0.35 - 0.5j
        h = 1e-6
        dfdz = (potential_one_disk(self.R2, kappa, self.Z0, z + h)
                - potential_one_disk(self.R2, kappa, self.Z0, z - h)) / (2 * h)
        vbar, _ = limit_one_disk(self.R2, kappa, self.Z0, z)
        assert abs(dfdz - vbar) < 1e-8

    def test_vortex_outside_rejected(self):
        with pytest.raises(DomainError):
            limit_one_disk(self.R2, 1.0, 1.5 + 0j, 0.5 + 0j)
