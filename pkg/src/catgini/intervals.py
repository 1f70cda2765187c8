"""
Confidence intervals for the categorical Gini correlation.

EL-type intervals (JEL, AJEL, WJEL) are the sets
``{rho in [0, 1]: stat(rho) <= chi2_{1, level}}``, found by scanning
outwards from the anchor on a coarse grid and bisecting each crossing.
JV is the normal interval ``estimate +/- z * sigma_jack``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .el import WeightVector, ajel_stat, default_a_n, jel_stat, spatial_depth_weights, wjel_stat
from .errors import InvalidInputError
from .gmd import GmdSummary, LabeledSample, gini_correlation_point, gini_correlation_point_u, summarize
from .jackknife import PseudoValueSet, jackknife_variance, pseudo_values

METHODS = ("jel", "ajel", "wjel", "jv")
EL_METHODS = ("jel", "ajel", "wjel")

OK = "ok"
CLIPPED_LOW = "clipped-at-0"
CLIPPED_HIGH = "clipped-at-1"
CLIPPED_BOTH = "clipped-at-both"
FAILED = "failed"


class WeakDependenceWarning(RuntimeWarning):
    """The estimate is close to zero, where chi-square calibration breaks down."""


# Acklam's rational approximation to the inverse normal CDF
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _poly(coefs, x):
    acc = 0.0
    for c in coefs:
        acc = acc * x + c
    return acc


def normal_quantile(q: float) -> float:
    """Standard normal quantile.

    Rational approximation (relative error about 1e-9) followed by one
    Halley correction against ``erfc``, which brings it to near machine
    precision.
    """
    if not 0.0 < q < 1.0:
        raise InvalidInputError(f"quantile level must lie in (0, 1), got {q}")
    if q < _P_LOW:
        t = math.sqrt(-2.0 * math.log(q))
        x = _poly(_C, t) / (_poly(_D, t) * t + 1.0)
    elif q <= 1.0 - _P_LOW:
        u = q - 0.5
        r = u * u
        x = _poly(_A, r) * u / (_poly(_B, r) * r + 1.0)
    else:
        t = math.sqrt(-2.0 * math.log1p(-q))
        x = -_poly(_C, t) / (_poly(_D, t) * t + 1.0)
    if q > 0.5:
        # refine on the upper tail via the complement to avoid cancellation
        e = 0.5 * math.erfc(x / math.sqrt(2.0)) - (1.0 - q)
        u = -e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    else:
        e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - q
        u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def chi2_quantile_1df(q: float) -> float:
    """Quantile of the chi-square distribution with one degree of freedom."""
    if not 0.0 < q < 1.0:
        raise InvalidInputError(f"quantile level must lie in (0, 1), got {q}")
    z = normal_quantile(0.5 * (1.0 + q))
    return z * z


@dataclass(frozen=True)
class ConfidenceInterval:
    """One interval estimate.

    ``point`` is the U-statistic estimate of the Gini correlation;
    ``anchor`` is where the EL statistic vanishes (equal to ``point`` for
    JEL and AJEL, the weighted root for WJEL, ``point`` for JV).
    """

    method: str
    level: float
    lower: float
    upper: float
    point: float
    anchor: float
    status: str = OK
    multimodal: bool = False

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, rho: float) -> bool:
        return self.lower <= rho <= self.upper

    def to_dict(self) -> dict:
        return asdict(self)


def _validate_level(level):
    if not 0.0 < level < 1.0:
        raise InvalidInputError(f"level must lie in (0, 1), got {level}")


def _bisect(f, inside, outside, xtol):
    while abs(outside - inside) > xtol:
        mid = 0.5 * (inside + outside)
        if f(mid) <= 0.0:
            inside = mid
        else:
            outside = mid
    return inside


def invert_statistic(stat, anchor: float, threshold: float, *, step: float = 0.01,
                     xtol: float = 1e-8, domain=(0.0, 1.0)):
    """Endpoints of ``{rho in domain: stat(rho) <= threshold}``.

    The domain is scanned on a grid of spacing ``step`` centred on
    ``anchor``; the outermost grid points inside the set bound the
    interval and each is refined by bisection to ``xtol``. Inner excursions
    above the threshold set the multimodal flag.

    Returns
    -------
    lower, upper : float
        NaN when no grid point is inside.
    status : str
    multimodal : bool
    """
    lo_edge, hi_edge = domain
    start = min(max(anchor, lo_edge), hi_edge)
    k_lo = int(math.floor((start - lo_edge) / step + 1e-9))
    k_hi = int(math.floor((hi_edge - start) / step + 1e-9))
    grid = [start - k * step for k in range(k_lo, 0, -1)]
    grid += [start] + [start + k * step for k in range(1, k_hi + 1)]
    if grid[0] > lo_edge:
        grid.insert(0, lo_edge)
    if grid[-1] < hi_edge:
        grid.append(hi_edge)
    grid = np.clip(np.array(grid), lo_edge, hi_edge)

    f = lambda r: stat(r) - threshold  # noqa: E731
    inside = np.array([f(r) <= 0.0 for r in grid])
    if not inside.any():
        return math.nan, math.nan, FAILED, False
    idx = np.flatnonzero(inside)
    first, last = idx[0], idx[-1]
    multimodal = bool(last - first + 1 != idx.size)

    clipped_low = first == 0 and grid[0] == lo_edge
    clipped_high = last == grid.size - 1 and grid[-1] == hi_edge
    lower = lo_edge if clipped_low else _bisect(f, grid[first], grid[first - 1], xtol)
    upper = hi_edge if clipped_high else _bisect(f, grid[last], grid[last + 1], xtol)
    if clipped_low and clipped_high:
        status = CLIPPED_BOTH
    elif clipped_low:
        status = CLIPPED_LOW
    elif clipped_high:
        status = CLIPPED_HIGH
    else:
        status = OK
    return float(lower), float(upper), status, multimodal


def _warn_if_weak(point, n):
    if point < 2.0 / math.sqrt(n):
        warnings.warn(
            f"estimate {point:.4g} is below 2/sqrt(n) = {2.0 / math.sqrt(n):.4g}; "
            "chi-square calibration is unreliable near zero correlation",
            WeakDependenceWarning,
            stacklevel=3,
        )


def el_interval(
    sample: LabeledSample,
    level: float = 0.95,
    method: str = "jel",
    *,
    summary: GmdSummary | None = None,
    pseudo: PseudoValueSet | None = None,
    weights: WeightVector | None = None,
    a_n: float | None = None,
    proportions: str = "resample",
    step: float = 0.01,
    xtol: float = 1e-8,
) -> ConfidenceInterval:
    """JEL, AJEL or WJEL confidence interval for the Gini correlation.

    Parameters
    ----------
    sample : LabeledSample
        Every class needs at least 3 observations.
    level : float
        Confidence level.
    method : {"jel", "ajel", "wjel"}
    summary, pseudo, weights :
        Optional precomputed pieces, reused across methods and levels.
    a_n : float, optional
        AJEL adjustment; default ``max(1, log(n) / 2)``.
    proportions : {"resample", "fixed"}
        Pseudo-value convention, see `pseudo_values`.
    step, xtol : float
        Scan spacing and endpoint tolerance in ``rho``.
    """
    method = method.lower()
    if method not in EL_METHODS:
        raise InvalidInputError(f"method must be one of {EL_METHODS}, got {method!r}")
    _validate_level(level)
    s = summarize(sample) if summary is None else summary
    pv = pseudo_values(sample, s, proportions) if pseudo is None else pseudo
    point = gini_correlation_point_u(sample, s)
    threshold = chi2_quantile_1df(level)

    if method == "jel":
        anchor = pv.anchor()
        stat = lambda r: jel_stat(pv, r).stat  # noqa: E731
    elif method == "ajel":
        a = default_a_n(pv.n) if a_n is None else a_n
        anchor = pv.anchor()
        stat = lambda r: ajel_stat(pv, r, a).stat  # noqa: E731
    else:
        w = spatial_depth_weights(sample) if weights is None else weights
        anchor = pv.anchor(w.w)
        stat = lambda r: wjel_stat(pv, r, w).stat  # noqa: E731

    _warn_if_weak(point, sample.n)
    lower, upper, status, multimodal = invert_statistic(stat, anchor, threshold, step=step, xtol=xtol)
    return ConfidenceInterval(method.upper(), level, lower, upper, point, anchor, status, multimodal)


def jv_interval(
    sample: LabeledSample,
    level: float = 0.95,
    *,
    summary: GmdSummary | None = None,
    estimator: str = "u",
) -> ConfidenceInterval:
    """Normal-approximation interval with jackknife variance.

    ``estimator="u"`` centres on the U-statistic estimate and uses its
    leave-one-out replicates; ``"v"`` does the same with the V-statistic.
    """
    _validate_level(level)
    s = summarize(sample) if summary is None else summary
    jv = jackknife_variance(sample, s, estimator)
    point = gini_correlation_point_u(sample, s) if estimator == "u" else gini_correlation_point(sample, s)
    half = normal_quantile(0.5 * (1.0 + level)) * jv.se
    lower, upper = point - half, point + half
    status = OK
    if lower < 0.0 and upper > 1.0:
        status = CLIPPED_BOTH
    elif lower < 0.0:
        status = CLIPPED_LOW
    elif upper > 1.0:
        status = CLIPPED_HIGH
    return ConfidenceInterval("JV", level, max(lower, 0.0), min(upper, 1.0), point, point, status)


def confidence_intervals(
    sample: LabeledSample,
    methods=METHODS,
    level: float = 0.95,
    *,
    proportions: str = "resample",
    a_n: float | None = None,
) -> dict[str, ConfidenceInterval]:
    """Compute several intervals sharing one summary and pseudo-value set.

    Returns a dict keyed by lower-case method name, in the order given.
    """
    methods = [m.lower() for m in methods]
    unknown = sorted(set(methods) - set(METHODS))
    if unknown:
        raise InvalidInputError(f"unknown method(s) {unknown}; choose from {METHODS}")
    s = summarize(sample)
    pv = pseudo_values(sample, s, proportions) if any(m in EL_METHODS for m in methods) else None
    weights = spatial_depth_weights(sample) if "wjel" in methods else None
    out = {}
    for m in methods:
        if m == "jv":
            out[m] = jv_interval(sample, level, summary=s)
        else:
            out[m] = el_interval(sample, level, m, summary=s, pseudo=pv, weights=weights, a_n=a_n)
    return out
