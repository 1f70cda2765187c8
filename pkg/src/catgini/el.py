"""
Empirical likelihood for the mean of jackknife pseudo-values.

For pseudo-values ``V_1..V_n`` and weights ``w_i`` (uniform ``1/n`` for
plain JEL), the Lagrange multiplier ``lambda`` solves

    sum_i w_i V_i / (1 + lambda V_i) = 0

on the interval where every ``1 + lambda V_i`` is positive. The score is
strictly decreasing there, so a safeguarded Newton iteration finds the
unique root. The calibrated statistic is

    2 sum_i n w_i log(1 + lambda V_i) / sum_i n w_i^2,

which reduces to ``-2 log R`` for uniform weights.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InvalidInputError
from .gmd import LabeledSample
from .jackknife import PseudoValueSet

CONVERGED = "converged"
AT_BOUNDARY = "at-boundary"
NO_SOLUTION = "no-solution"

# relative margin keeping 1 + lambda * V_i away from zero
_MARGIN = 1e-10


class LambdaSolution(NamedTuple):
    lam: float
    status: str
    iterations: int


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative weights summing to one, with Wilks scaling ``n * sum w_i^2``."""

    w: np.ndarray
    c_factor: float
    status: str = "ok"

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(np.full(n, 1.0 / n), 1.0)

    @classmethod
    def from_scores(cls, scores, status: str = "ok") -> "WeightVector":
        s = np.asarray(scores, dtype=float)
        if s.ndim != 1 or s.size == 0 or np.any(s < 0) or not np.all(np.isfinite(s)):
            raise InvalidInputError("weight scores must be a nonempty vector of finite nonnegative values")
        total = math.fsum(s)
        if total <= 0:
            raise InvalidInputError("weight scores sum to zero")
        w = s / total
        return cls(w, float(s.size * np.dot(w, w)), status)


@dataclass(frozen=True)
class ElEvaluation:
    """Result of one empirical-likelihood evaluation at a candidate ``rho``."""

    rho: float
    lam: float
    stat: float
    iterations: int
    status: str


def _score(lam, v, w):
    return float(np.dot(w, v / (1.0 + lam * v)))


def solve_lambda(values, weights=None, *, tol: float = 1e-12, max_iter: int = 100) -> LambdaSolution:
    """Find the Lagrange multiplier of the (weighted) mean-zero EL problem.

    Parameters
    ----------
    values : array_like
        Pseudo-values.
    weights : array_like or WeightVector, optional
        Defaults to uniform.
    tol : float
        Convergence when ``|score| <= tol * sum_i w_i |V_i|``.
    max_iter : int
        Iteration cap for the Newton/bisection loop.

    Returns
    -------
    LambdaSolution
        ``status`` is ``"no-solution"`` (and ``lam`` NaN) when zero is not
        inside the convex hull of the values, ``"at-boundary"`` when the
        root lies within the safety margin of the feasibility interval.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InvalidInputError("values must be a nonempty 1-D array")
    if weights is None:
        w = np.full(v.size, 1.0 / v.size)
    else:
        w = np.asarray(getattr(weights, "w", weights), dtype=float)
        if w.shape != v.shape:
            raise InvalidInputError("weights and values differ in length")
    scale = float(np.dot(w, np.abs(v)))
    if scale == 0.0:
        return LambdaSolution(0.0, CONVERGED, 0)
    g0 = float(np.dot(w, v))
    if abs(g0) <= tol * scale:
        return LambdaSolution(0.0, CONVERGED, 0)
    # only points with positive weight constrain the problem
    active = v[w > 0]
    vmax, vmin = float(active.max()), float(active.min())
    if vmin >= 0.0 or vmax <= 0.0:
        return LambdaSolution(math.nan, NO_SOLUTION, 0)

    lo = -(1.0 - _MARGIN) / vmax
    hi = -(1.0 - _MARGIN) / vmin
    if g0 > 0:
        if _score(hi, v, w) > 0:
            return LambdaSolution(hi, AT_BOUNDARY, 0)
        lo = 0.0
    else:
        if _score(lo, v, w) < 0:
            return LambdaSolution(lo, AT_BOUNDARY, 0)
        hi = 0.0

    lam, g = 0.0, g0
    for it in range(1, max_iter + 1):
        denom = 1.0 + lam * v
        dg = -float(np.dot(w, (v / denom) ** 2))
        step = lam - g / dg
        lam = step if lo < step < hi else 0.5 * (lo + hi)
        g = _score(lam, v, w)
        if abs(g) <= tol * scale:
            return LambdaSolution(lam, CONVERGED, it)
        if g > 0:
            lo = lam
        else:
            hi = lam
        if hi - lo <= 1e-14 * max(1.0, abs(lam)):
            return LambdaSolution(lam, CONVERGED, it)
    return LambdaSolution(lam, CONVERGED if abs(g) <= 1e-10 else AT_BOUNDARY, max_iter)


def el_statistic(values, weights: WeightVector | None = None) -> tuple[float, LambdaSolution]:
    """Calibrated EL statistic for "mean of ``values`` is zero".

    Returns ``inf`` when the constraint is infeasible.
    """
    v = np.asarray(values, dtype=float)
    sol = solve_lambda(v, weights)
    if sol.status == NO_SOLUTION:
        return math.inf, sol
    if sol.lam == 0.0:
        return 0.0, sol
    logs = np.log1p(sol.lam * v)
    if weights is None:
        stat = 2.0 * math.fsum(logs)
    else:
        nw = v.size * weights.w
        stat = 2.0 * math.fsum(nw * logs) / weights.c_factor
    return max(stat, 0.0), sol


def jel_stat(pv: PseudoValueSet, rho: float) -> ElEvaluation:
    """Standard jackknife EL statistic ``-2 log R(rho)``."""
    stat, sol = el_statistic(pv.values(rho))
    return ElEvaluation(rho, sol.lam, stat, sol.iterations, sol.status)


def default_a_n(n: int) -> float:
    return max(1.0, math.log(n) / 2.0)


def ajel_stat(pv: PseudoValueSet, rho: float, a_n: float | None = None) -> ElEvaluation:
    """Adjusted JEL: one extra pseudo-value ``-(a_n / n) sum_i V_i`` is appended.

    ``a_n`` defaults to ``max(1, log(n) / 2)``.
    """
    a_n = default_a_n(pv.n) if a_n is None else a_n
    if a_n <= 0:
        raise InvalidInputError("a_n must be positive")
    v = pv.values(rho)
    aug = np.append(v, -a_n * float(np.mean(v)))
    stat, sol = el_statistic(aug)
    return ElEvaluation(rho, sol.lam, stat, sol.iterations, sol.status)


def wjel_stat(pv: PseudoValueSet, rho: float, weights: WeightVector) -> ElEvaluation:
    """Weighted JEL statistic ``l(rho) / sum_i n w_i^2``, calibrated against chi2(1)."""
    if weights.w.shape[0] != pv.n:
        raise InvalidInputError("weight vector length does not match the pseudo-values")
    stat, sol = el_statistic(pv.values(rho), weights)
    return ElEvaluation(rho, sol.lam, stat, sol.iterations, sol.status)


def spatial_depth(points) -> np.ndarray:
    """Sample spatial depth ``1 - || mean_j S(x_i - x_j) ||`` of every point.

    ``S`` is the unit-vector map, with ``S(0) = 0`` for coincident points.
    """
    x = np.asarray(getattr(points, "x", points), dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    depth = np.empty(n)
    block = max(1, 2_000_000 // (n * x.shape[1]))
    for start in range(0, n, block):
        stop = min(start + block, n)
        diff = x[start:stop, None, :] - x[None, :, :]
        r = cdist(x[start:stop], x)
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(r > 0, 1.0 / r, 0.0)
        s = np.einsum("ij,ijk->ik", inv, diff)
        depth[start:stop] = 1.0 - np.linalg.norm(s, axis=1) / n
    return depth


def spatial_depth_weights(sample: LabeledSample | np.ndarray) -> WeightVector:
    """Weights proportional to the spatial depth of each pooled observation.

    Labels are ignored. If every point coincides all depths are 1 and the
    weights are uniform; the status is then ``"degenerate"``.
    """
    x = np.asarray(getattr(sample, "x", sample), dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] < 2:
        raise InvalidInputError("need at least 2 points for depth weights")
    depth = np.clip(spatial_depth(x), 0.0, None)
    if np.all(x == x[0]):
        warnings.warn("all points identical; using uniform weights", RuntimeWarning, stacklevel=2)
        return WeightVector(np.full(x.shape[0], 1.0 / x.shape[0]), 1.0, "degenerate")
    return WeightVector.from_scores(depth)
