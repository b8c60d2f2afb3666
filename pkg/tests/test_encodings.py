import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bkraus import channels, encodings, fock
from bkraus.encodings import Encoding
from bkraus.errors import DegenerateEncodingError


def test_cat_norm_limits_and_value():
    assert encodings.cat_norm(20.0, "even") == pytest.approx(2**-0.5, abs=1e-12)
    assert encodings.cat_norm(20.0, "odd") == pytest.approx(2**-0.5, abs=1e-12)
    # (2 + 2 e^-2)^(-1/2), evaluated by hand: 0.66362530...
    assert encodings.cat_norm(1.0, "even") == pytest.approx(0.6636253001, abs=1e-10)


def test_odd_norm_degenerate():
    with pytest.raises(DegenerateEncodingError):
        encodings.cat_norm(0.0, "odd")
    with pytest.raises(DegenerateEncodingError):
        Encoding("cat", alpha=0.0)


def test_odd_norm_small_alpha_is_accurate():
    x = 1e-9
    # N_- ~ (4x)^(-1/2) for small x, with relative correction O(x)
    assert encodings.cat_norm(x, "odd") == pytest.approx((4 * x) ** -0.5, rel=1e-8)


@pytest.mark.parametrize("parity,n", [("even", 0), ("odd", 1)])
def test_weak_cat_reduces_to_fock(parity, n):
    cat = encodings.cat_state(1e-2, parity)
    assert abs(fock.inner(fock.number_state(n, cat.n_max), cat)) ** 2 >= 1 - 1e-6


def test_parity_by_construction():
    even = encodings.cat_state(1.0, "even")
    odd = encodings.cat_state(1.0, "odd")
    assert np.all(np.abs(even.amps[1::2]) <= 1e-15)
    assert np.all(np.abs(odd.amps[0::2]) <= 1e-15)


def test_cat_matches_superposition_of_coherent_states():
    alpha, n_max = 1.2, 40
    plus = fock.coherent_state(alpha, n_max).amps
    minus = fock.coherent_state(-alpha, n_max).amps
    x = alpha**2
    for parity, sign in (("even", 1), ("odd", -1)):
        ref = encodings.cat_norm(x, parity) * (plus + sign * minus)
        np.testing.assert_allclose(encodings.cat_state(alpha, parity, n_max).amps, ref, atol=1e-14)


def test_fock_bell_amplitudes():
    amps = encodings.fock_bell_state().amps
    np.testing.assert_allclose(amps, [0, 2**-0.5, 2**-0.5, 0], atol=1e-16)


def test_cat_bell_weak_limit():
    cat = encodings.cat_bell_state(1e-2)
    target = encodings.fock_bell_state(cat.n_max)
    assert abs(fock.inner(target, cat)) ** 2 >= 1 - 1e-3


def test_cat_bell_normalized():
    assert encodings.cat_bell_state(1.0).norm() == pytest.approx(1.0, abs=1e-10)


def test_decayed_cat_without_damping():
    np.testing.assert_array_equal(encodings.decayed_cat(1.0, "odd", 1.0).amps, encodings.cat_state(1.0, "odd").amps)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 2.0), st.floats(0.05, 1.0), st.sampled_from(["even", "odd"]))
def test_no_loss_branch_shrinks_amplitude(alpha, eta, parity):
    cat = encodings.cat_state(alpha, parity)
    kept = fock.apply_op(channels.amp_kraus(0, eta, cat.n_max), cat)
    ref = encodings.decayed_cat(alpha, parity, eta, cat.n_max)
    np.testing.assert_allclose(fock.normalize(kept).amps, ref.amps, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 2.0), st.floats(0.05, 0.999), st.sampled_from([("even", "odd"), ("odd", "even")]))
def test_single_loss_flips_parity(alpha, eta, parities):
    start, end = parities
    cat = encodings.cat_state(alpha, start)
    lost = fock.normalize(fock.apply_op(channels.amp_kraus(1, eta, cat.n_max), cat))
    ref = encodings.decayed_cat(alpha, end, eta, cat.n_max)
    assert abs(fock.inner(ref, lost)) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=30)
@given(st.floats(0.05, 3.0))
def test_logical_states_orthonormal(alpha):
    enc = Encoding("cat", alpha=alpha)
    zero, one = enc.logical(0), enc.logical(1)
    assert abs(fock.inner(zero, one)) <= 1e-15
    assert zero.norm() == pytest.approx(1.0, abs=1e-12)
    assert one.norm() == pytest.approx(1.0, abs=1e-12)


def test_cat_norms_bundle():
    norms = encodings.cat_norms(2.0, 0.5)
    assert norms.n_plus_decayed == encodings.cat_norm(1.0, "even")
    assert norms.n_minus == encodings.cat_norm(2.0, "odd")


@pytest.mark.parametrize("bit", [2, "up"])
def test_parity_of_rejects(bit):
    with pytest.raises(ValueError):
        encodings.parity_of(bit)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.05, 0.95), st.integers(0, 4), st.sampled_from(["even", "odd"]))
def test_loss_parity_rule(alpha, eta, k, parity):
    """Even numbers of lost quanta keep the logical parity, odd numbers flip it."""
    cat = encodings.cat_state(alpha, parity)
    out = fock.apply_op(channels.amp_kraus(k, eta, cat.n_max), cat)
    if out.norm() < 1e-150:
        return
    flipped = {"even": "odd", "odd": "even"}[parity] if k % 2 else parity
    ref = encodings.decayed_cat(alpha, flipped, eta, cat.n_max)
    assert abs(fock.inner(ref, fock.normalize(out))) == pytest.approx(1.0, abs=1e-9)
