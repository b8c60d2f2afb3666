import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from bkraus import analytics, channels, encodings, fock, oracle
from bkraus.channels import ChannelParams
from bkraus.errors import ConvergenceError, DimensionError, UndefinedConditionalStateError


def _brute_amp(k, eta, n_max):
    """Entry-by-entry evaluation of the binomial loss amplitudes."""
    m = np.zeros((n_max + 1, n_max + 1))
    for n in range(k, n_max + 1):
        m[n - k, n] = math.sqrt(math.comb(n, k) * eta ** (n - k) * (1 - eta) ** k)
    return m


class TestAmplitudeKraus:
    def test_no_damping_is_identity(self):
        np.testing.assert_array_equal(channels.amp_kraus(0, 1.0, 6).mat, np.eye(7))

    def test_qubit_loss_operator(self):
        eta = 0.37
        np.testing.assert_allclose(channels.amp_kraus(1, eta, 1).mat, [[0, math.sqrt(1 - eta)], [0, 0]])

    def test_two_level_entries(self):
        m = channels.amp_kraus(1, 0.5, 2).mat
        assert m[0, 1] == pytest.approx(math.sqrt(0.5), abs=1e-15)
        assert m[1, 2] == pytest.approx(math.sqrt(2) * 0.5, abs=1e-15)

    def test_qubit_family(self):
        eta = math.exp(-1)
        a0, a1 = channels.amp_family(eta, 1).ops
        np.testing.assert_allclose(a0.mat, np.diag([1, math.sqrt(eta)]))
        np.testing.assert_allclose(a1.mat, [[0, math.sqrt(1 - eta)], [0, 0]])

    def test_undamped_family(self):
        fam = channels.amp_family(1.0, 3)
        np.testing.assert_array_equal(fam.ops[0].mat, np.eye(4))
        assert all(not op.mat.any() for op in fam.ops[1:])

    def test_k_beyond_truncation_warns(self):
        with pytest.warns(UserWarning):
            op = channels.amp_kraus(4, 0.5, 2)
        assert not op.mat.any()

    @pytest.mark.parametrize("eta", [0.0, -0.1, 1.5])
    def test_invalid_eta(self, eta):
        with pytest.raises(ValueError):
            channels.amp_kraus(0, eta, 2)

    @settings(max_examples=40)
    @given(st.integers(0, 15), st.floats(1e-3, 1.0), st.integers(0, 15))
    def test_matches_brute_force(self, k, eta, n_max):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            np.testing.assert_allclose(channels.amp_kraus(k, eta, n_max).mat, _brute_amp(k, eta, n_max), atol=1e-14)

    @settings(max_examples=40)
    @given(st.floats(1e-3, 1.0), st.integers(0, 40))
    def test_completeness(self, eta, n_max):
        assert channels.amp_family(eta, n_max).completeness_deficit <= 1e-12

    def test_completeness_eta_03(self):
        assert channels.amp_family(0.3, 20).completeness_deficit <= 1e-12


class TestPhaseKraus:
    def test_no_interaction(self):
        np.testing.assert_array_equal(channels.phase_kraus(0, 0.0, 4).mat, np.eye(5))

    @pytest.mark.parametrize("k", [0, 1, 2, 5])
    def test_qubit_form(self, k):
        tau = 0.8
        expected = np.diag([1.0 if k == 0 else 0.0, math.exp(-(tau**2) / 2) * tau**k / math.sqrt(math.factorial(k))])
        np.testing.assert_allclose(channels.phase_kraus(k, tau, 1).mat, expected, rtol=1e-13)

    def test_two_photon_entry(self):
        assert channels.phase_kraus(2, 1.0, 2).mat[2, 2] == pytest.approx(math.exp(-2) * 2 * math.sqrt(2), rel=1e-13)

    def test_zero_tau_family(self):
        fam = channels.phase_family(0.0, 5)
        assert len(fam) == 1
        np.testing.assert_array_equal(fam.ops[0].mat, np.eye(6))

    def test_deficit_for_mean_nine(self):
        fam = channels.phase_family(1.0, 3, 1e-12)
        assert fam.completeness_deficit <= 1e-12
        # smallest cutoff: dropping the last operator breaks the bound
        assert stats.poisson.sf(fam.params.k_max - 1, 9.0) > 1e-12

    def test_hard_cap(self):
        with pytest.raises(ConvergenceError):
            channels.phase_family(2.0, 10, hard_cap=50)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.0, 2.5), st.integers(1, 15))
    def test_completeness(self, tau, n_max):
        assert channels.phase_family(tau, n_max, 1e-12).completeness_deficit <= 1e-12

    def test_regrouped_qubit(self):
        e0, e1 = channels.regroup_phase_qubit(1.0).ops
        np.testing.assert_allclose(e0.mat, np.diag([1, math.exp(-0.5)]))
        np.testing.assert_allclose(e1.mat, np.diag([0, math.sqrt(1 - math.exp(-1))]))
        assert e1.mat[1, 1] == pytest.approx(0.7950600976, abs=1e-10)

    def test_regrouped_limits(self):
        e0, e1 = channels.regroup_phase_qubit(0.0).ops
        np.testing.assert_array_equal(e0.mat, np.eye(2))
        assert not e1.mat.any()
        e0, e1 = channels.regroup_phase_qubit(8.0).ops
        np.testing.assert_allclose(e0.mat, np.diag([1, 0]), atol=1e-12)
        np.testing.assert_allclose(e1.mat, np.diag([0, 1]), atol=1e-12)

    @given(st.floats(0, 10))
    def test_regrouped_complete(self, tau):
        assert channels.regroup_phase_qubit(tau).completeness_deficit <= 1e-15

    def test_regrouped_equals_full_family_on_qubit(self):
        rho = oracle.random_density(1, 3)
        tau = 0.9
        full = channels.apply(channels.phase_family(tau, 1), rho).mat
        np.testing.assert_allclose(channels.apply(channels.regroup_phase_qubit(tau), rho).mat, full, atol=1e-12)


class TestApply:
    def test_identity_channel(self):
        rho = oracle.random_density(6, 0)
        np.testing.assert_allclose(channels.apply(channels.amp_family(1.0, 6), rho).mat, rho.mat)

    def test_single_photon_decay(self):
        out = channels.apply(channels.amp_family(0.36, 1), fock.outer(fock.number_state(1, 1)))
        np.testing.assert_allclose(out.mat, np.diag([0.64, 0.36]), atol=1e-15)

    @pytest.mark.parametrize("x,eta", [(0.25, 0.3), (1.0, 0.7), (4.0, 0.1)])
    def test_coherent_covariance(self, x, eta):
        alpha = math.sqrt(x)
        n_max = fock.default_n_max(x)
        out = channels.apply(channels.amp_family(eta, n_max), fock.outer(fock.coherent_state(alpha, n_max)))
        target = fock.coherent_state(math.sqrt(eta) * alpha, n_max)
        assert fock.fidelity_pure(target, out) >= 1 - 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            channels.apply(channels.amp_family(0.5, 3), oracle.random_density(4, 0))

    @settings(max_examples=20, deadline=None)
    @given(st.floats(1e-3, 1.0), st.integers(0, 1000))
    def test_outputs_are_states(self, eta, seed):
        rho = oracle.random_density(8, seed)
        out = channels.apply(channels.amp_family(eta, 8), rho)
        fock.check_density(out)


class TestTwoMode:
    def test_identity_channels(self):
        rho = fock.outer(encodings.cat_bell_state(0.3, 9))
        fam = channels.amp_family(1.0, 9)
        np.testing.assert_allclose(channels.apply_two_mode(fam, fam, rho).mat, rho.mat, atol=1e-15)

    @pytest.mark.parametrize("eta", [0.1, 0.5, 0.9])
    def test_fock_bell_fidelity_is_eta(self, eta):
        psi = encodings.fock_bell_state()
        fam = channels.amp_family(eta, 1)
        assert fock.fidelity_pure(psi, channels.apply_two_mode(fam, fam, fock.outer(psi))) == pytest.approx(eta, abs=1e-14)

    def test_bell_cat_full_damping(self):
        psi = encodings.cat_bell_state(1.0)
        fam = channels.amp_family(0.5, psi.n_max)
        out = channels.apply_two_mode(fam, fam, fock.outer(psi))
        assert abs(fock.fidelity_pure(psi, out) - analytics.F2_amp(1.0, 0.5)) <= 1e-8

    def test_matches_kronecker_sum(self):
        """Superoperator contraction versus the literal double sum over Kronecker products."""
        rho = oracle.random_density(15, 7)  # reuse as a 4x4 two-mode density
        rho2 = fock.DensityOperator(rho.mat, 3, 2)
        fa, fb = channels.amp_family(0.6, 3), channels.phase_family(0.7, 3)
        brute = sum(
            np.kron(a.mat, b.mat) @ rho2.mat @ np.kron(a.mat, b.mat).conj().T for a in fa.ops for b in fb.ops
        )
        np.testing.assert_allclose(channels.apply_two_mode(fa, fb, rho2).mat, brute, atol=1e-14)

    def test_requires_two_modes(self):
        fam = channels.amp_family(0.5, 2)
        with pytest.raises(DimensionError):
            channels.apply_two_mode(fam, fam, oracle.random_density(2, 0))


class TestConditional:
    def test_no_damping(self):
        rho = fock.outer(encodings.cat_bell_state(0.3, 8))
        np.testing.assert_allclose(channels.conditional_one_photon(1.0, rho).mat, rho.mat, atol=1e-15)

    def test_vacuum_is_fixed(self):
        vac = fock.outer(fock.tensor(fock.number_state(0, 3), fock.number_state(0, 3)))
        np.testing.assert_allclose(channels.conditional_one_photon(0.3, vac).mat, vac.mat)

    @pytest.mark.parametrize("x,eta", [(1.0, 0.5), (0.25, 0.9), (2.0, 0.1)])
    def test_matches_closed_form(self, x, eta):
        psi = encodings.cat_bell_state(math.sqrt(x))
        cond = channels.conditional_one_photon(eta, fock.outer(psi))
        assert abs(fock.fidelity_pure(psi, cond) - analytics.F1_amp(x, eta)) <= 1e-8

    def test_zero_trace_rejected(self):
        # only |2,2> populated: at eta -> 0 the at-most-one-loss branch carries ~no weight
        two = fock.outer(fock.tensor(fock.number_state(2, 2), fock.number_state(2, 2)))
        with pytest.raises(UndefinedConditionalStateError):
            channels.conditional_one_photon(1e-12, two)


class TestDephase:
    def test_zero_time(self):
        rho = oracle.random_density(5, 1)
        np.testing.assert_array_equal(channels.dephase(0.0, rho).mat, rho.mat)

    def test_factor(self):
        rho = fock.outer(fock.coherent_state(0.5, 10))
        out = channels.dephase(1.0, rho)
        assert out.mat[2, 0] / rho.mat[2, 0] == pytest.approx(math.exp(-2), rel=1e-14)

    def test_cat_density_entrywise(self):
        x, tau = 1.3, 2.0
        alpha = math.sqrt(x)
        cat = encodings.cat_state(alpha, "even")
        out = channels.dephase(tau, fock.outer(cat)).mat
        n = cat.n_max
        norm_sq = 1 / (2 + 2 * math.exp(-2 * x))
        expected = np.zeros((n + 1, n + 1))
        for i in range(n + 1):
            for j in range(n + 1):
                c = (1 + (-1) ** i) * (1 + (-1) ** j) * alpha ** (i + j) / math.sqrt(math.factorial(i) * math.factorial(j))
                expected[i, j] = norm_sq * math.exp(-x) * c * math.exp(-(tau**2) * (i - j) ** 2 / 2)
        np.testing.assert_allclose(out, expected, atol=1e-10)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0, 4), st.integers(0, 500))
    def test_trace_and_diagonal_preserved(self, tau, seed):
        rho = oracle.random_density(7, seed)
        out = channels.dephase(tau, rho)
        np.testing.assert_array_equal(np.diag(out.mat), np.diag(rho.mat))
        fock.check_density(out)

    @pytest.mark.parametrize("tau", [0.3, 1.0, 2.0])
    def test_equals_kraus_sum(self, tau):
        rho = oracle.random_density(10, 4)
        fam = channels.phase_family(tau, 10)
        np.testing.assert_allclose(channels.apply(fam, rho).mat, channels.dephase(tau, rho).mat, atol=1e-11)

    def test_two_mode_matches_product_channel(self):
        rho = fock.outer(encodings.cat_bell_state(0.3, 8))
        fam = channels.phase_family(0.6, 8)
        np.testing.assert_allclose(
            channels.dephase(0.6, rho).mat, channels.apply_two_mode(fam, fam, rho).mat, atol=1e-11
        )


def test_channel_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(eta=0.0)
    with pytest.raises(ValueError):
        ChannelParams(tau=-1.0)
