import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import jv

from ratchetsim.model import RatchetParams, initial_density
from ratchetsim.quantum import (BasisOverflowError, QuantumState, evolve,
                                free_evolution, kick, make_initial_state,
                                mean_current)


def random_state(rng, N=64, support=10, beta=0.5):
    amps = np.zeros(2 * N + 1, dtype=complex)
    lo, hi = N - support, N + support + 1
    amps[lo:hi] = rng.normal(size=hi - lo) + 1j * rng.normal(size=hi - lo)
    amps /= np.linalg.norm(amps)
    return QuantumState(amps, beta)


class TestInitialState:
    def test_mean_momentum(self):
        for gamma in (0.0, 1.3, -math.pi / 2):
            for beta in (0.0, 0.5, 0.25):
                st = make_initial_state(gamma, beta)
                assert st.distribution().mean_p == pytest.approx(beta + 0.5,
                                                                 rel=1e-14)

    def test_gamma0_beta_half(self):
        st = make_initial_state(0.0, 0.5)
        assert st.distribution().mean_p == pytest.approx(1.0, rel=1e-14)

    def test_small_basis_rejected(self):
        with pytest.raises(ValueError):
            make_initial_state(0.0, 0.5, N=7)

    def test_position_density_matches_closed_form(self):
        gamma = -math.pi / 3
        st = make_initial_state(gamma, 0.5)
        theta = np.linspace(-math.pi, math.pi, 257, endpoint=False)
        np.testing.assert_allclose(st.position_density(theta),
                                   initial_density(theta, gamma),
                                   rtol=0, atol=1e-10)


class TestFreeEvolution:
    def test_tau_zero_identity(self):
        st = make_initial_state(0.7, 0.3)
        out = free_evolution(st, 0.0)
        np.testing.assert_array_equal(out.amplitudes, st.amplitudes)

    def test_resonance_beta_zero_signs(self):
        rng = np.random.default_rng(0)
        st = random_state(rng, beta=0.0)
        out = free_evolution(st, 2 * math.pi)
        n = st.n_values
        np.testing.assert_allclose(out.amplitudes,
                                   st.amplitudes * (-1.0) ** n,
                                   rtol=0, atol=1e-12)

    def test_resonance_beta_half_global_phase(self):
        rng = np.random.default_rng(1)
        st = random_state(rng, beta=0.5)
        out = free_evolution(st, 2 * math.pi)
        overlap = np.vdot(st.amplitudes, out.amplitudes)
        assert abs(overlap) == pytest.approx(1.0, abs=1e-12)

    def test_norm_preserved(self):
        rng = np.random.default_rng(2)
        st = random_state(rng)
        assert free_evolution(st, 1.234).norm() == pytest.approx(1.0,
                                                                 abs=1e-13)


class TestKick:
    def test_zero_strength_identity(self):
        rng = np.random.default_rng(3)
        st = random_state(rng)
        out = kick(st, 0.0)
        np.testing.assert_allclose(out.amplitudes, st.amplitudes,
                                   rtol=0, atol=1e-13)

    def test_plane_wave_bessel_weights(self):
        # oracle: direct quadrature of (1/2pi) int e^{-i phi cos} e^{-im th}
        phi_d = 1.5
        N = 32
        amps = np.zeros(2 * N + 1, dtype=complex)
        amps[N] = 1.0
        out = kick(QuantumState(amps, 0.5), phi_d)
        No = out.basis_size
        for m in range(-6, 7):
            re, _ = quad(lambda th: math.cos(phi_d * math.cos(th) + m * th),
                         -math.pi, math.pi)
            im, _ = quad(lambda th: -math.sin(phi_d * math.cos(th) + m * th),
                         -math.pi, math.pi)
            expect = (re * re + im * im) / (2 * math.pi) ** 2
            got = abs(out.amplitudes[No + m]) ** 2
            assert got == pytest.approx(expect, abs=1e-10)
            # same thing in closed form
            assert got == pytest.approx(jv(m, phi_d) ** 2, abs=1e-10)

    def test_unitarity_random_states(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            st = random_state(rng)
            phi_d = rng.uniform(1e-3, 6.0)
            assert kick(st, phi_d).norm() == pytest.approx(1.0, abs=1e-12)

    def test_matches_dense_bessel_matrix(self):
        rng = np.random.default_rng(5)
        for phi_d in (0.8, 2.6, 6.0):
            st = random_state(rng, N=64, support=8)
            out = kick(st, phi_d)
            cutoff = int(3 * phi_d + 40)
            n = st.n_values
            diff = n[:, None] - n[None, :]
            mat = np.where(np.abs(diff) <= cutoff,
                           (-1j) ** (diff % 4) * jv(diff, phi_d), 0.0)
            expect = mat @ st.amplitudes
            No = out.basis_size
            got = out.amplitudes[No - 64:No + 65]
            assert np.linalg.norm(got - expect) < 1e-9

    def test_negative_strength_rejected(self):
        st = make_initial_state(0.0, 0.5)
        with pytest.raises(ValueError):
            kick(st, -1.0)

    def test_auto_grow(self):
        st = make_initial_state(0.0, 0.5, N=8)
        out = kick(st, 5.0)
        assert out.basis_size > 8
        assert out.norm() == pytest.approx(1.0, abs=1e-12)

    def test_overflow_reported(self):
        p = RatchetParams(phi_d=6.0, eps=0.0, gamma=-math.pi / 2, kicks=500)
        with pytest.raises(BasisOverflowError):
            evolve(p, N=1024)


class TestEvolve:
    def test_resonant_ramp_example(self):
        # closed form: resonant evolution is e^{-i t phi cos} on psi0
        p = RatchetParams(phi_d=1.3, eps=0.0, gamma=-math.pi / 2, kicks=10)
        cur = mean_current(evolve(p))
        assert cur[-1] == pytest.approx(6.5, abs=1e-6)

    def test_resonant_distribution_matches_bessel_oracle(self):
        # after t resonant kicks the amplitudes are the two-wave initial
        # state convolved with the Bessel weights of strength t*phi_d
        phi_d, t, gamma = 1.3, 5, -math.pi / 3
        p = RatchetParams(phi_d=phi_d, eps=0.0, gamma=gamma, kicks=t)
        dist = evolve(p)[-1]
        N = (len(dist.probabilities) - 1) // 2
        m = np.arange(-N, N + 1)
        z = t * phi_d
        c = ((-1j) ** m * jv(m, z) / math.sqrt(2)
             + (-1j) ** (m - 1) * jv(m - 1, z) * np.exp(1j * gamma)
             / math.sqrt(2))
        np.testing.assert_allclose(dist.probabilities, np.abs(c) ** 2,
                                   rtol=0, atol=1e-10)

    def test_no_kick_constant_mean(self):
        p = RatchetParams(phi_d=0.0, eps=0.13, gamma=0.4, kicks=8)
        cur = mean_current(evolve(p))
        np.testing.assert_allclose(cur, 0.0, atol=1e-12)

    @pytest.mark.parametrize("gamma", [0.0, math.pi])
    def test_symmetric_phase_no_resonant_current(self, gamma):
        p = RatchetParams(phi_d=1.7, eps=0.0, gamma=gamma, kicks=12)
        cur = mean_current(evolve(p))
        np.testing.assert_allclose(cur, 0.0, atol=1e-10)

    def test_norm_drift_50_kicks(self):
        from ratchetsim.quantum import make_initial_state as mis
        p = RatchetParams(phi_d=6.0, eps=0.1, gamma=-math.pi / 2, kicks=50)
        st = mis(p.gamma, p.beta, 128)
        for _ in range(p.kicks):
            st = kick(free_evolution(st, p.tau), p.phi_d)
        assert abs(st.norm() - 1.0) < 1e-10

    def test_basis_independence(self):
        p = RatchetParams(phi_d=2.6, eps=0.12, gamma=-math.pi / 2, kicks=10)
        c1 = mean_current(evolve(p, N=128))
        c2 = mean_current(evolve(p, N=256))
        assert np.max(np.abs(c1 - c2)) < 1e-9

    def test_gamma_antisymmetry_at_resonance(self):
        pa = RatchetParams(phi_d=2.0, eps=0.0, gamma=0.7, kicks=10)
        pb = RatchetParams(phi_d=2.0, eps=0.0, gamma=-0.7, kicks=10)
        total = mean_current(evolve(pa)) + mean_current(evolve(pb))
        assert np.max(np.abs(total)) < 1e-9

    @pytest.mark.xfail(strict=True, reason=(
        "off resonance the exact quantum current has a gamma-even component "
        "of order eps (the scaled momentum offset between the two initial "
        "plane waves), so strict sin(gamma) antisymmetry holds only at "
        "eps = 0; the classical map, which sets that offset to zero, is "
        "exactly antisymmetric (see test_epsmap)"))
    def test_gamma_antisymmetry_off_resonance(self):
        pa = RatchetParams(phi_d=2.0, eps=0.15, gamma=0.7, kicks=10)
        pb = RatchetParams(phi_d=2.0, eps=0.15, gamma=-0.7, kicks=10)
        total = mean_current(evolve(pa)) + mean_current(evolve(pb))
        assert np.max(np.abs(total)) < 1e-9

    def test_eps_sign_symmetry(self):
        for eps in (0.05, 0.18):
            pa = RatchetParams(phi_d=2.6, eps=eps, gamma=-math.pi / 2, kicks=10)
            pb = replace(pa, eps=-eps)
            diff = mean_current(evolve(pa)) - mean_current(evolve(pb))
            assert np.max(np.abs(diff)) < 1e-10


class TestMeanCurrent:
    def test_single_snapshot(self):
        p = RatchetParams(phi_d=1.0, kicks=0)
        cur = mean_current(evolve(p))
        assert list(cur) == [0.0]

    def test_first_element_zero(self):
        p = RatchetParams(phi_d=2.2, eps=0.08, gamma=1.0, kicks=5)
        assert mean_current(evolve(p))[0] == 0.0

    def test_resonant_slope(self):
        phi_d, gamma = 2.6, -math.pi / 3
        p = RatchetParams(phi_d=phi_d, eps=0.0, gamma=gamma, kicks=15)
        cur = mean_current(evolve(p))
        slope = -(phi_d / 2) * math.sin(gamma)
        np.testing.assert_allclose(cur, slope * np.arange(16), atol=1e-9)

    def test_empty_history_rejected(self):
        with pytest.raises(ValueError):
            mean_current([])
