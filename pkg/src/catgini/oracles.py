"""
Population values of the categorical Gini correlation.

Closed forms exist for three two-class univariate families; everything
else is approximated by a single very large Monte Carlo sample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import InvalidInputError
from .gmd import pair_sum_sorted_1d

if TYPE_CHECKING:
    from .simulation import Scenario

_SQRT2 = math.sqrt(2.0)
_SQRTPI = math.sqrt(math.pi)


def _check_p(p):
    if not 0.0 < p < 1.0:
        raise InvalidInputError(f"p must lie in (0, 1), got {p}")


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def rho_exponential(p: float, theta: float, beta: float) -> float:
    """Two exponential classes with means ``theta`` (weight ``p``) and ``beta``."""
    _check_p(p)
    if theta <= 0 or beta <= 0:
        raise InvalidInputError("exponential means must be positive")
    num = p * (1 - p) * (theta - beta) ** 2
    den = (2 * p - p * p) * theta**2 + (1 - p * p) * beta**2 + (1 - 2 * p + 2 * p * p) * theta * beta
    return num / den


def rho_normal_location(p: float, a: float) -> float:
    """Two normal classes with common variance, standardized mean gap ``a``."""
    _check_p(p)
    if a < 0:
        raise InvalidInputError("a = |mu1 - mu2| / sigma must be nonnegative")
    h = a / _SQRT2
    core = 2 * a * normal_cdf(h) + 2 * _SQRT2 * normal_pdf(h) - a
    num = p * (1 - p) * (core - 2 / _SQRTPI)
    den = (p * p + (1 - p) ** 2) / _SQRTPI + p * (1 - p) * core
    return num / den


def rho_normal_scale(p: float, r: float) -> float:
    """Two centred normal classes with standard-deviation ratio ``r = s2 / s1``."""
    _check_p(p)
    if r <= 0:
        raise InvalidInputError("r = sigma2 / sigma1 must be positive")
    root = math.sqrt(2 * (1 + r * r))
    num = p * (1 - p) * (root - 1 - r)
    den = p * p + (1 - p) ** 2 * r + p * (1 - p) * root
    return num / den


FAMILIES = {
    "exponential-pair": (rho_exponential, ("p", "theta", "beta")),
    "normal-location-pair": (rho_normal_location, ("p", "a")),
    "normal-scale-pair": (rho_normal_scale, ("p", "r")),
}
FAMILY_ALIASES = {
    "exp": "exponential-pair",
    "exponential": "exponential-pair",
    "normal-location": "normal-location-pair",
    "normal-scale": "normal-scale-pair",
}


@dataclass(frozen=True)
class PopulationSpec:
    """A population whose Gini correlation is wanted.

    ``family`` is one of the closed-form families (``params`` then holds
    their arguments) or ``"generic-mixture"`` with a `Scenario`.
    """

    family: str
    params: dict = field(default_factory=dict)
    scenario: "Scenario | None" = None


def closed_form(family: str, **params) -> float:
    """Evaluate a closed-form family by name (aliases such as ``"exp"`` accepted)."""
    name = FAMILY_ALIASES.get(family, family)
    if name not in FAMILIES:
        raise InvalidInputError(f"no closed form for family {family!r}; known: {sorted(FAMILIES)}")
    fn, names = FAMILIES[name]
    missing = [k for k in names if k not in params]
    extra = sorted(set(params) - set(names))
    if missing or extra:
        raise InvalidInputError(f"{name} takes parameters {names}; missing {missing}, unexpected {extra}")
    return fn(**{k: float(params[k]) for k in names})


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    se: float
    n_total: int
    blocks: np.ndarray
    method: str


def _gmd_large(z: np.ndarray, shifts: int) -> float:
    """Gini mean difference of a large i.i.d. sample without an n^2 pass.

    Univariate data use the exact sorted V-statistic. Otherwise an
    incomplete U-statistic averages ``||z_i - z_{i+s}||`` over cyclic
    shifts ``s = 1..shifts``; it is unbiased because the rows are i.i.d.
    in random order.
    """
    m = z.shape[0]
    if z.shape[1] == 1:
        return pair_sum_sorted_1d(z[:, 0]) / (m * m)
    total = 0.0
    for s in range(1, min(shifts, m - 1) + 1):
        total += float(np.linalg.norm(z - np.roll(z, s, axis=0), axis=1).mean())
    return total / min(shifts, m - 1)


def _rho_large(x: np.ndarray, codes: np.ndarray, K: int, shifts: int) -> float:
    n = x.shape[0]
    within = 0.0
    for k in range(K):
        xk = x[codes == k]
        if xk.shape[0] < 2:
            raise InvalidInputError("Monte Carlo block too small: a class has fewer than 2 draws")
        within += xk.shape[0] / n * _gmd_large(xk, shifts)
    return 1.0 - within / _gmd_large(x, shifts)


def rho_monte_carlo(scenario: "Scenario", n_total: int = 1_000_000, seed=0, *,
                    blocks: int = 10, shifts: int = 32) -> MonteCarloEstimate:
    """Approximate the population Gini correlation of a mixture scenario.

    One sample of ``n_total`` draws is generated. The estimate uses all of
    it; the standard error is the spread of the estimates on ``blocks``
    disjoint sub-samples divided by ``sqrt(blocks)``.

    Parameters
    ----------
    scenario : Scenario
    n_total : int
        At least 10 000.
    seed : int or numpy SeedSequence
    blocks : int
    shifts : int
        Number of cyclic shifts for the multivariate estimator.
    """
    from .simulation import draw_mixture

    if n_total < 10_000:
        raise InvalidInputError("n_total must be at least 10000")
    if blocks < 2:
        raise InvalidInputError("need at least 2 blocks for a standard error")
    rng = np.random.default_rng(seed)
    codes, x = draw_mixture(scenario, n_total, rng)
    K = scenario.n_classes
    est = _rho_large(x, codes, K, shifts)
    edges = np.linspace(0, n_total, blocks + 1).astype(int)
    block_est = np.array([
        _rho_large(x[a:b], codes[a:b], K, shifts) for a, b in zip(edges[:-1], edges[1:])
    ])
    se = float(block_est.std(ddof=1) / math.sqrt(blocks))
    method = "exact-v" if scenario.d == 1 else f"incomplete-u-{shifts}"
    return MonteCarloEstimate(float(est), se, n_total, block_est, method)


def population_rho(spec: PopulationSpec, n_total: int = 1_000_000, seed=0):
    """Closed form when available, otherwise a `MonteCarloEstimate`."""
    name = FAMILY_ALIASES.get(spec.family, spec.family)
    if name in FAMILIES:
        return closed_form(name, **spec.params)
    if spec.scenario is None:
        raise InvalidInputError("generic-mixture population needs a scenario")
    return rho_monte_carlo(spec.scenario, n_total, seed)
