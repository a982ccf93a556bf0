"""Fock-space oracle: generator structure, integration, and cross-checks
against the Gaussian solution."""

import math

import numpy as np
import pytest

from oscar_sim.errors import DimensionError, LeakageError
from oscar_sim.gaussian_dynamics import CoeffKey, evolve_closed_form
from oscar_sim.model import DimensionlessParams
from oscar_sim.oracle import (TruncatedSpace, build_generator,
                              compare_with_gaussian, dense_expm_reference,
                              displaced_thermal_density, field_theta,
                              initial_density, integrate,
                              matched_eta_sequence, phase_from_density,
                              validate_adiabatic)
from oscar_sim.phase import SystemState, find_peaks


def params(gamma=0.1, chi=0.5, kog=0.1, N=1.0, epsilon=None, eta=None):
    return DimensionlessParams.from_ratio(gamma=gamma, chi=chi,
                                          kappa_over_gamma=kog, N_th=N,
                                          epsilon=epsilon, eta=eta)


SMALL = params()
SMALL_STATE = SystemState.superposition(1j, 1.0)


class TestSpace:
    def test_dimensions(self):
        sp = TruncatedSpace(d_c=5, d_r=3)
        assert sp.dim == 30 and sp.block_dim == 15

    def test_rejects_tiny(self):
        with pytest.raises(DimensionError):
            TruncatedSpace(d_c=1, d_r=3)


class TestGenerator:
    def test_free_generator_conserves_numbers(self):
        # gamma -> 0, kappa = 0, eta = 0: occupation numbers and S_z frozen
        p = DimensionlessParams(gamma=1e-300, chi=0.3, kappa=0.0, N_th=1.0)
        sp = TruncatedSpace(d_c=4, d_r=3)
        liou = build_generator(p, sp, "effective", block="full")
        rng = np.random.default_rng(0)
        d = sp.dim
        A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho0 = A @ A.conj().T
        rho0 /= np.trace(rho0).real
        traj = integrate(rho0, liou, [0.7], engine="dop853",
                         check_leakage=False, compute_spectrum=False)
        rho_t = dense_expm_reference(liou, rho0, 0.7)

        def occupations(rho):
            r = rho.reshape(2, 4, 3, 2, 4, 3)
            return (np.einsum("scnscn->c", r).real,
                    np.einsum("scnscn->n", r).real,
                    np.einsum("scnscn->s", r).real)

        for got, want in zip(occupations(rho_t), occupations(rho0)):
            assert np.abs(got - want).max() < 1e-10

    def test_effective_diagonal_energies(self):
        # diagonal of H_eff on |s> x |n_c> x |n_r>: n_c (1 +- chi) +- eps
        from oscar_sim.oracle import _full_ops
        p = params(chi=0.25, epsilon=3.0, kog=0.1)
        sp = TruncatedSpace(d_c=2, d_r=2)
        a, b, sz, sx = _full_ops(sp)
        X = (a + a.conj().T).tocsr()
        H = ((a.conj().T @ a) + p.epsilon * sz
             + p.chi * ((a.conj().T @ a) @ sz)
             - p.kappa * ((b.conj().T @ b) @ X)).toarray()
        diag = H.diagonal().real
        expected = []
        for s in (+1, -1):
            for n_c in range(2):
                for n_r in range(2):
                    expected.append(n_c * (1 + s * p.chi) + s * p.epsilon)
        assert np.allclose(diag, expected, atol=1e-12)

    def test_block_restriction_matches_full(self):
        # evolving the ee block alone equals the ee block of the full run
        sp = TruncatedSpace(d_c=6, d_r=3)
        state = SystemState.superposition(0.5j, 0.8)
        rho_full = initial_density(SMALL, state, sp, block="full")
        rho_blk = initial_density(SMALL, state, sp, block="ee")
        L_full = build_generator(SMALL, sp, "effective", "full")
        L_blk = build_generator(SMALL, sp, "effective", "ee")
        t = 1.7
        out_full = dense_expm_reference(L_full, rho_full, t)
        out_blk = dense_expm_reference(L_blk, rho_blk, t)
        bd = sp.block_dim
        ee = out_full.reshape(2, bd, 2, bd)[0, :, 0, :]
        assert np.abs(ee / state.w_e - out_blk).max() < 1e-10

    def test_pre_adiabatic_needs_full_block(self):
        p = params(epsilon=4.0, eta=0.3)
        sp = TruncatedSpace(d_c=4, d_r=2)
        with pytest.raises(ValueError):
            build_generator(p, sp, "pre_adiabatic", block="ee")

    def test_integrator_matches_dense_expm(self):
        sp = TruncatedSpace(d_c=3, d_r=2)
        liou = build_generator(params(epsilon=1.5), sp, "effective", "full")
        rho0 = initial_density(SMALL, SystemState.superposition(0.3j, 0.5),
                               sp, block="full")
        for engine in ("dop853", "expm"):
            traj = integrate(rho0, liou, [0.1], engine=engine,
                             check_leakage=False, store_states=True)
            ref = dense_expm_reference(liou, rho0, 0.1)
            assert np.abs(traj.final_rho() - ref).max() < 1e-9


class TestIntegrate:
    def test_time_zero_identity(self):
        sp = TruncatedSpace(d_c=5, d_r=3)
        rho0 = initial_density(SMALL, SMALL_STATE, sp, block="full")
        liou = build_generator(SMALL, sp, "effective", "full")
        traj = integrate(rho0, liou, [0.0], store_states=True,
                         check_leakage=False)
        assert np.abs(traj.final_rho() - rho0).max() == 0.0

    def test_trace_hermiticity_positivity(self):
        sp = TruncatedSpace(d_c=32, d_r=6)
        rho0 = initial_density(SMALL, SMALL_STATE, sp, block="ee")
        liou = build_generator(SMALL, sp, "effective", "ee")
        traj = integrate(rho0, liou, [2.0, 5.0, 10.0], engine="expm")
        for pt in traj.points:
            assert pt.trace_error < 1e-9
            assert pt.herm_error < 1e-12
            assert pt.min_eigenvalue > -1e-6

    def test_damped_coherent_mean_matches_coefficients(self):
        # gamma > 0, kappa = chi = 0: <a>(t) equals -B(tau) of the
        # coefficient ODEs (closed form), tau = gamma t
        p = params(gamma=0.2, chi=0.0, kog=0.0, N=1.0)
        state = SystemState.eigenstate("e", 1.0 + 0.5j, 0.0)
        # <a> weights the thermal tail by sqrt(n); needs headroom beyond the
        # population-leakage threshold to reach 1e-6
        sp = TruncatedSpace(d_c=60, d_r=2)
        rho0 = initial_density(p, state, sp, block="ee")
        liou = build_generator(p, sp, "effective", "ee")
        a = np.kron(np.diag(np.sqrt(np.arange(1, sp.d_c)), 1), np.eye(sp.d_r))
        taus = [0.2, 0.6, 1.2]
        traj = integrate(rho0, liou, [t / p.gamma for t in taus],
                         engine="expm", store_states=True,
                         compute_spectrum=False)
        for tau, pt in zip(taus, traj.points):
            mean_a = np.trace(a @ pt.rho)
            c = evolve_closed_form(p, state, CoeffKey(0, 0, "e"), tau)
            assert abs(mean_a - (-c.B)) < 1e-6

    def test_leakage_error(self):
        p = params(gamma=0.05, N=2.0)
        state = SystemState.superposition(2.0 + 0j, 0.5)
        sp = TruncatedSpace(d_c=4, d_r=2)
        rho0 = initial_density(p, state, sp, block="ee")
        liou = build_generator(p, sp, "effective", "ee")
        with pytest.raises(LeakageError):
            integrate(rho0, liou, [1.0], engine="expm")

    def test_readout_distribution_conserved(self):
        sp = TruncatedSpace(d_c=16, d_r=6)
        rho0 = initial_density(SMALL, SMALL_STATE, sp, block="full")
        liou = build_generator(SMALL, sp, "effective", "full")
        traj = integrate(rho0, liou, [3.0, 8.0], engine="expm",
                         compute_spectrum=False, store_states=True,
                         check_leakage=False)
        pops0 = np.diag(field_theta(rho0, sp, "full")).real
        for pt in traj.points:
            pops = np.diag(pt.theta).real
            assert np.abs(pops - pops0).max() < 1e-10

    def test_spin_populations_frozen_at_chi_zero(self):
        p = params(chi=0.0, epsilon=2.0)
        sp = TruncatedSpace(d_c=10, d_r=3)
        state = SystemState(alpha=0.7j, beta=0.6, w_e=0.35, w_g=0.65)
        rho0 = initial_density(p, state, sp, block="full")
        liou = build_generator(p, sp, "effective", "full")
        traj = integrate(rho0, liou, [2.0, 6.0], engine="expm",
                         compute_spectrum=False, check_leakage=False)
        for pt in traj.points:
            assert pt.s_z == pytest.approx(state.w_e - state.w_g, abs=1e-10)


class TestPhaseFromDensity:
    def test_vacuum_uniform(self):
        sp = TruncatedSpace(d_c=4, d_r=4)
        state = SystemState.superposition(0.5j, 0.0)
        rho0 = initial_density(SMALL, state, sp, block="full")
        dist = phase_from_density(rho0, sp, block="full")
        assert np.allclose(dist.values, 1 / (2 * math.pi), atol=1e-12)

    def test_coherent_peak_at_amplitude_phase(self):
        sp = TruncatedSpace(d_c=3, d_r=25)
        beta = 1.0 * np.exp(0.9j)
        state = SystemState.superposition(0j, beta)
        rho0 = initial_density(SMALL, state, sp, block="full")
        dist = phase_from_density(rho0, sp, block="full")
        peaks = find_peaks(dist)
        assert len(peaks) == 1
        assert abs(peaks.peaks[0].position - 0.9) < 0.05


class TestGaussianEquivalence:
    def test_small_instance_theta_and_phase(self):
        # beta=1, alpha=i, N=1, chi=0.5, gamma=0.1, kappa/gamma=0.1
        sp = TruncatedSpace(d_c=30, d_r=8)
        report = compare_with_gaussian(SMALL, SMALL_STATE, sp,
                                       taus=[0.5, 1.0], grid_size=256,
                                       compute_spectrum=False)
        assert report.max_theta_diff < 1e-3
        assert max(report.linf_phase) < 1e-3
        assert report.worst_trace_error < 1e-9
        assert report.worst_herm_error < 1e-12


class TestValidateAdiabatic:
    def test_eta_zero_generators_coincide(self):
        p = params(chi=0.0, kog=0.1, epsilon=3.0, eta=0.0)
        sp = TruncatedSpace(d_c=8, d_r=3)
        rep = validate_adiabatic(p, SMALL_STATE, sp, t_final=2.0, n_out=4,
                                 engine="expm", grid_size=128,
                                 check_leakage=False)
        assert rep.max_linf_phase < 1e-12
        assert rep.max_delta_s_z < 1e-12

    def test_regime_flag(self):
        p = params(chi=0.2, epsilon=1.05, eta=0.4)
        sp = TruncatedSpace(d_c=6, d_r=2)
        rep = validate_adiabatic(p, SMALL_STATE, sp, t_final=0.5, n_out=2,
                                 engine="expm", grid_size=128,
                                 check_leakage=False)
        assert rep.regime_ok is False

    def test_matched_sequence(self):
        triples = matched_eta_sequence(0.2, 2.0, [2.0, 4.0, 8.0])
        eps0, eta0, chi0 = triples[0]
        assert chi0 == pytest.approx(0.2)
        products = [eps * eta**2 for eps, eta, _ in triples]
        assert all(pr == pytest.approx(products[0]) for pr in products)


class TestInitialState:
    def test_displaced_thermal_moments(self):
        d = 60
        alpha, nbar = 0.8 - 0.4j, 1.5
        rho = displaced_thermal_density(d, alpha, nbar)
        a = np.diag(np.sqrt(np.arange(1, d)), 1)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.trace(a @ rho) == pytest.approx(alpha, abs=1e-10)
        n_mean = np.trace(a.conj().T @ a @ rho).real
        assert n_mean == pytest.approx(nbar + abs(alpha) ** 2, abs=1e-8)

    def test_initial_density_trace_normalized(self):
        sp = TruncatedSpace(d_c=40, d_r=10)
        rho = initial_density(SMALL, SMALL_STATE, sp, block="full")
        assert abs(np.trace(rho).real - 1.0) < 1e-12
