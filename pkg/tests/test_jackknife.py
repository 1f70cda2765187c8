import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import reference as R
from catgini.errors import ClassSizeError, InvalidInputError
from catgini.gmd import LabeledSample, gini_correlation_point_u, summarize, w_n
from catgini.jackknife import jackknife_variance, loo_estimates, pseudo_values

TOY_X = [0.0, 1.0, 3.0, 4.0, 6.0, 10.0]
TOY_Y = ["a", "a", "a", "b", "b", "b"]

# frozen output of reference.pseudo_values on the toy sample at rho = 0.3
TOY_PV_RESAMPLE = [1.78, 2.38, -3.02, -3.02, 2.38, -0.02]
TOY_PV_FIXED = [0.78, 1.88, -4.52, -2.02, 4.38, -0.02]
# frozen output of reference.jackknife_variance_u on the toy sample
TOY_JACK_VAR = 0.04712747993547351


def make(seed, n=24, d=2, K=3):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % K
    rng.shuffle(y)
    return LabeledSample(rng.exponential(size=(n, d)) * (1 + y[:, None]), y)


@pytest.mark.parametrize("proportions, frozen", [("resample", TOY_PV_RESAMPLE), ("fixed", TOY_PV_FIXED)])
def test_toy_pseudo_values_frozen(proportions, frozen):
    pv = pseudo_values(LabeledSample(TOY_X, TOY_Y), proportions=proportions)
    np.testing.assert_allclose(pv.values(0.3), frozen, atol=1e-12)


def test_toy_jackknife_variance_frozen():
    jv = jackknife_variance(LabeledSample(TOY_X, TOY_Y))
    assert jv.sigma2_hat == pytest.approx(TOY_JACK_VAR, rel=1e-12)
    assert jv.se == pytest.approx(TOY_JACK_VAR**0.5, rel=1e-12)


@pytest.mark.parametrize("proportions", ["resample", "fixed"])
@pytest.mark.parametrize("seed", range(4))
def test_shortcut_equals_literal_deletion(seed, proportions):
    s = make(seed, n=15)
    pv = pseudo_values(s, proportions=proportions)
    for rho in (0.0, 0.37, 0.9):
        naive = R.pseudo_values(s.x.tolist(), s.codes.tolist(), rho, proportions)
        np.testing.assert_allclose(pv.values(rho), naive, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("proportions", ["resample", "fixed"])
def test_mean_identities(proportions):
    s = make(7, n=40)
    summ = summarize(s)
    pv = pseudo_values(s, summ, proportions)
    assert pv.a.mean() == pytest.approx(summ.u_pooled, rel=1e-12)
    assert pv.c.mean() == pytest.approx(float(summ.p_hat @ summ.u_class), rel=1e-12)
    for rho in np.linspace(-0.5, 1.5, 7):
        assert pv.mean(rho) == pytest.approx(w_n(s, rho, summ), rel=1e-10, abs=1e-12)
    assert pv.anchor() == pytest.approx(gini_correlation_point_u(s), rel=1e-12)


def test_weighted_anchor_zeroes_weighted_mean():
    s = make(8)
    pv = pseudo_values(s)
    w = np.random.default_rng(0).random(s.n)
    rho = pv.anchor(w)
    assert float(w @ pv.values(rho)) == pytest.approx(0.0, abs=1e-12)


def test_loo_u_against_reference():
    s = make(2, n=14)
    np.testing.assert_allclose(loo_estimates(s), R.loo_rho_u(s.x.tolist(), s.codes.tolist()), rtol=1e-10)


def test_loo_v_against_reference():
    s = make(3, n=14)
    xs, ys = s.x.tolist(), s.codes.tolist()
    naive = [R.rho_v(xs[:i] + xs[i + 1:], ys[:i] + ys[i + 1:]) for i in range(s.n)]
    np.testing.assert_allclose(loo_estimates(s, estimator="v"), naive, rtol=1e-10)


def test_requires_three_per_class():
    s = LabeledSample([0.0, 1.0, 2.0, 3.0, 4.0], [0, 0, 1, 1, 1])
    with pytest.raises(ClassSizeError):
        pseudo_values(s)
    with pytest.raises(ClassSizeError):
        jackknife_variance(s)


def test_bad_options():
    s = make(1)
    with pytest.raises(InvalidInputError):
        pseudo_values(s, proportions="bogus")
    with pytest.raises(InvalidInputError):
        loo_estimates(s, estimator="w")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 10), st.floats(-10, 10))
def test_pseudo_values_scale_equivariant(seed, c, shift):
    s = make(seed, n=12, K=2)
    base = pseudo_values(s)
    moved = pseudo_values(LabeledSample(c * s.x + shift, s.codes))
    np.testing.assert_allclose(moved.a, c * base.a, rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(moved.c, c * base.c, rtol=1e-9, atol=1e-9)
