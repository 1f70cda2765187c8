"""
Leave-one-out machinery: pseudo-values of the estimating function and the
jackknife variance of the Gini correlation estimator.

Deleting observation ``i`` only changes two distance sums, the pooled one
and the one of its own class, by ``2 r_i`` and ``2 r_i^(k)``. All ``n``
deletions therefore cost O(n) once the row sums are known.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSampleError, InvalidInputError
from .gmd import GmdSummary, LabeledSample, summarize

PROPORTIONS = ("resample", "fixed")


@dataclass(frozen=True)
class PseudoValueSet:
    """Jackknife pseudo-values ``V_i(rho) = (1 - rho) a_i - c_i``.

    ``a`` holds the pseudo-values of the pooled U-statistic and ``c`` the
    class-dependent part, so any candidate ``rho`` is evaluated in O(n)
    without touching distances again.
    """

    a: np.ndarray
    c: np.ndarray
    proportions: str = "resample"

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def values(self, rho: float) -> np.ndarray:
        return (1.0 - rho) * self.a - self.c

    def mean(self, rho: float) -> float:
        return float(np.mean(self.values(rho)))

    def anchor(self, weights=None) -> float:
        """The ``rho`` at which the (weighted) mean pseudo-value vanishes."""
        if weights is None:
            return 1.0 - float(np.mean(self.c)) / float(np.mean(self.a))
        w = np.asarray(weights, dtype=float)
        return 1.0 - float(w @ self.c) / float(w @ self.a)


def _deleted_u(summary: GmdSummary, codes: np.ndarray):
    """Pooled and own-class U-statistics after deleting each observation."""
    n = summary.n
    u_pooled = (summary.pair_total - 2.0 * summary.row_sums) / ((n - 1) * (n - 2))
    m = summary.class_counts[codes]
    u_own = (summary.class_pair_totals[codes] - 2.0 * summary.class_row_sums) / (
        (m - 1) * (m - 2)
    )
    return u_pooled, u_own


def pseudo_values(
    sample: LabeledSample,
    summary: GmdSummary | None = None,
    proportions: str = "resample",
) -> PseudoValueSet:
    """Pseudo-values ``n W_n(rho) - (n - 1) W_{n-1}^(-i)(rho)`` in affine form.

    Parameters
    ----------
    sample : LabeledSample
        Every class needs at least 3 observations.
    summary : GmdSummary, optional
        Precomputed aggregates of ``sample``.
    proportions : {"resample", "fixed"}
        How the class proportions enter the deleted-sample estimating
        function. ``"resample"`` recomputes them on the deleted sample
        (``W^(-i)`` is literally ``W`` evaluated without observation
        ``i``); ``c_i`` then reduces to the within-class pseudo-value of
        ``U_k``. ``"fixed"`` keeps the full-sample proportions.

    Returns
    -------
    PseudoValueSet
        With ``mean(a) == U_n`` and ``mean(c) == sum_k p_k U_k`` under
        both conventions.
    """
    if proportions not in PROPORTIONS:
        raise InvalidInputError(f"proportions must be one of {PROPORTIONS}, got {proportions!r}")
    sample.require_class_size(3)
    s = summarize(sample) if summary is None else summary
    n = s.n
    codes = sample.codes
    u_del, u_own_del = _deleted_u(s, codes)
    a = n * s.u_pooled - (n - 1) * u_del
    u_own = s.u_class[codes]
    if proportions == "resample":
        m = s.class_counts[codes]
        c = m * u_own - (m - 1) * u_own_del
    else:
        p_own = s.p_hat[codes]
        rest = float(np.dot(s.p_hat, s.u_class)) - p_own * u_own
        c = p_own * (n * u_own - (n - 1) * u_own_del) + rest
    return PseudoValueSet(a=a, c=c, proportions=proportions)


@dataclass(frozen=True)
class JackknifeVariance:
    """Jackknife variance ``(n - 1)/n * sum (rho_(-i) - mean)^2`` and its replicates."""

    sigma2_hat: float
    replicates: np.ndarray

    @property
    def se(self) -> float:
        return float(np.sqrt(self.sigma2_hat))


def loo_estimates(
    sample: LabeledSample,
    summary: GmdSummary | None = None,
    estimator: str = "u",
) -> np.ndarray:
    """Gini correlation re-estimated on each deletion sample.

    Class proportions are re-estimated too. ``estimator`` selects the
    U-statistic (``"u"``) or V-statistic (``"v"``) plug-in.
    """
    sample.require_class_size(3)
    s = summarize(sample) if summary is None else summary
    n = s.n
    codes = sample.codes
    m = s.class_counts[codes]
    if estimator == "u":
        pooled_del, own_del = _deleted_u(s, codes)
        own_full = s.u_class[codes]
        weighted_full = float(np.dot(s.class_counts, s.u_class))
    elif estimator == "v":
        pooled_del = (s.pair_total - 2.0 * s.row_sums) / (n - 1) ** 2
        own_del = (s.class_pair_totals[codes] - 2.0 * s.class_row_sums) / (m - 1) ** 2
        own_full = s.v_class[codes]
        weighted_full = float(np.dot(s.class_counts, s.v_class))
    else:
        raise InvalidInputError(f"estimator must be 'u' or 'v', got {estimator!r}")
    if np.any(pooled_del <= 0.0):
        raise DegenerateSampleError("a deletion sample has all observations identical")
    within = (weighted_full - m * own_full + (m - 1) * own_del) / (n - 1)
    return 1.0 - within / pooled_del


def jackknife_variance(
    sample: LabeledSample,
    summary: GmdSummary | None = None,
    estimator: str = "u",
) -> JackknifeVariance:
    """Jackknife estimate of the variance of the Gini correlation estimator."""
    reps = loo_estimates(sample, summary, estimator)
    n = reps.shape[0]
    dev = reps - reps.mean()
    return JackknifeVariance(sigma2_hat=float((n - 1) / n * np.dot(dev, dev)), replicates=reps)
