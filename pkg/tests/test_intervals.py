import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from catgini import intervals as iv
from catgini.el import ajel_stat, jel_stat, spatial_depth_weights, wjel_stat
from catgini.errors import InvalidInputError
from catgini.gmd import LabeledSample, gini_correlation_point_u
from catgini.jackknife import pseudo_values


def make(seed, n=60, shift=2.0, d=1):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, size=n)
    y[:3], y[3:6] = 0, 1
    return LabeledSample(rng.normal(size=(n, d)) + shift * y[:, None], y)


@pytest.mark.parametrize("q", [1e-12, 1e-5, 0.01, 0.02425, 0.3, 0.5, 0.8, 0.975, 0.995, 1 - 1e-9])
def test_normal_quantile_matches_scipy(q):
    assert iv.normal_quantile(q) == pytest.approx(stats.norm.ppf(q), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("q", [0.5, 0.9, 0.95, 0.99])
def test_chi2_quantile_matches_scipy(q):
    assert iv.chi2_quantile_1df(q) == pytest.approx(stats.chi2.ppf(q, 1), rel=1e-12)


def test_chi2_95_value():
    assert iv.chi2_quantile_1df(0.95) == pytest.approx(3.841458820694124, rel=1e-13)


@pytest.mark.parametrize("q", [0.0, 1.0, -0.1, 2.0])
def test_quantile_domain(q):
    with pytest.raises(InvalidInputError):
        iv.normal_quantile(q)


def test_invert_quadratic():
    lo, hi, status, mm = iv.invert_statistic(lambda r: 100 * (r - 0.4) ** 2, 0.4, 1.0)
    assert (lo, hi) == pytest.approx((0.3, 0.5), abs=1e-8)
    assert status == iv.OK and not mm


def test_invert_clipped_and_failed():
    lo, hi, status, _ = iv.invert_statistic(lambda r: (r - 0.95) ** 2, 0.95, 1.0)
    assert hi == 1.0 and lo == 0.0 and status == iv.CLIPPED_BOTH
    lo, hi, status, _ = iv.invert_statistic(lambda r: 1000 * (r - 0.01) ** 2, 0.01, 1.0)
    assert lo == 0.0 and status == iv.CLIPPED_LOW
    assert hi == pytest.approx(0.01 + math.sqrt(1e-3), abs=1e-8)
    lo, hi, status, _ = iv.invert_statistic(lambda r: 5.0, 0.5, 1.0)
    assert status == iv.FAILED and math.isnan(lo) and math.isnan(hi)


def test_invert_multimodal_reports_hull():
    f = lambda r: 0.0 if abs(r - 0.3) < 0.05 or abs(r - 0.6) < 0.05 else 10.0  # noqa: E731
    lo, hi, status, mm = iv.invert_statistic(f, 0.3, 1.0)
    assert mm and status == iv.OK
    assert lo == pytest.approx(0.25, abs=1e-7) and hi == pytest.approx(0.65, abs=1e-7)


@pytest.mark.parametrize("method", iv.EL_METHODS)
def test_endpoints_sit_on_threshold(method):
    s = make(0)
    pv = pseudo_values(s)
    w = spatial_depth_weights(s)
    stat = {"jel": lambda r: jel_stat(pv, r).stat,
            "ajel": lambda r: ajel_stat(pv, r).stat,
            "wjel": lambda r: wjel_stat(pv, r, w).stat}[method]
    ci = iv.el_interval(s, 0.95, method)
    thr = iv.chi2_quantile_1df(0.95)
    assert ci.status in (iv.OK, iv.CLIPPED_LOW)
    assert stat(ci.anchor) == pytest.approx(0.0, abs=1e-12)
    for end, out in ((ci.lower, ci.lower - 1e-6), (ci.upper, ci.upper + 1e-6)):
        assert stat(end) <= thr
        if 0.0 < end < 1.0:
            assert stat(out) > thr
    assert ci.lower <= ci.anchor < ci.upper


def test_jel_anchor_is_point():
    s = make(1)
    ci = iv.el_interval(s, method="jel")
    assert ci.anchor == pytest.approx(ci.point, abs=1e-12)
    assert ci.point == pytest.approx(gini_correlation_point_u(s))


def test_jv_interval_formula():
    s = make(2)
    ci = iv.jv_interval(s, 0.9)
    from catgini.jackknife import jackknife_variance

    half = stats.norm.ppf(0.95) * jackknife_variance(s).se
    assert (ci.lower, ci.upper) == pytest.approx((ci.point - half, ci.point + half), rel=1e-12)


def test_jv_clipping():
    s = LabeledSample(np.r_[np.arange(4.0), 1e6 + np.arange(4.0)], np.repeat([0, 1], 4))
    ci = iv.jv_interval(s)
    assert ci.upper <= 1.0


def test_confidence_intervals_keys_and_unknown():
    cis = iv.confidence_intervals(make(3), ["jv", "JEL"])
    assert list(cis) == ["jv", "jel"]
    with pytest.raises(InvalidInputError):
        iv.confidence_intervals(make(3), ["bogus"])
    with pytest.raises(InvalidInputError):
        iv.el_interval(make(3), method="jv")
    with pytest.raises(InvalidInputError):
        iv.el_interval(make(3), level=1.5)


def test_weak_dependence_warning():
    with pytest.warns(iv.WeakDependenceWarning):
        iv.el_interval(make(4, shift=0.0), method="jel")


def test_to_dict_roundtrip():
    ci = iv.el_interval(make(5), method="ajel")
    d = ci.to_dict()
    assert iv.ConfidenceInterval(**d) == ci
    assert ci.length == pytest.approx(ci.upper - ci.lower)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(iv.METHODS))
def test_nested_across_levels(seed, method):
    s = make(seed, n=40)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", iv.WeakDependenceWarning)
        cis = [iv.confidence_intervals(s, [method], lvl)[method] for lvl in (0.8, 0.9, 0.95, 0.99)]
    for inner, outer in zip(cis, cis[1:]):
        if iv.FAILED in (inner.status, outer.status):
            continue
        assert outer.lower <= inner.lower + 1e-8
        assert inner.upper <= outer.upper + 1e-8


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 10), st.floats(-5, 5))
def test_intervals_affine_invariant(seed, c, shift):
    s = make(seed, n=30, d=2)
    moved = LabeledSample(c * s.x + shift, s.codes)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", iv.WeakDependenceWarning)
        a = iv.confidence_intervals(s)
        b = iv.confidence_intervals(moved)
    for m in iv.METHODS:
        assert b[m].status == a[m].status
        if a[m].status != iv.FAILED:
            assert b[m].lower == pytest.approx(a[m].lower, abs=1e-6)
            assert b[m].upper == pytest.approx(a[m].upper, abs=1e-6)
