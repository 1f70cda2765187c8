"""
Mixture scenarios, seeded sampling and the coverage-study runner.

Every replication draws from its own child of a ``numpy.random.SeedSequence``
spawned from the study seed, so results do not depend on execution order
or on the number of worker processes.
"""
from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import CatGiniError, InvalidInputError
from .gmd import LabeledSample
from .intervals import METHODS, confidence_intervals

RNG_ALGORITHM = "numpy PCG64, per-replication SeedSequence.spawn"
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Component:
    """One mixture component.

    ``kind`` is ``"normal"`` (covariance ``sd**2 * I``) or ``"exponential"``
    (independent coordinates with the given means). ``mean`` has one entry
    per dimension.
    """

    weight: float
    kind: str
    mean: tuple
    sd: float = 1.0

    def __post_init__(self):
        if self.kind not in ("normal", "exponential"):
            raise InvalidInputError(f"unknown component kind {self.kind!r}")
        if not self.weight > 0:
            raise InvalidInputError("component weight must be positive")
        if self.kind == "normal" and not self.sd > 0:
            raise InvalidInputError("normal sd must be positive")
        if self.kind == "exponential" and any(m <= 0 for m in self.mean):
            raise InvalidInputError("exponential means must be positive")

    @property
    def d(self) -> int:
        return len(self.mean)

    def draw(self, size: int, rng: np.random.Generator) -> np.ndarray:
        mean = np.asarray(self.mean, dtype=float)
        if self.kind == "normal":
            return mean + self.sd * rng.standard_normal((size, mean.size))
        return rng.standard_exponential((size, mean.size)) * mean


@dataclass(frozen=True)
class Scenario:
    """A finite mixture; component ``k`` is the conditional law of class ``k``."""

    components: tuple
    name: str = ""
    family: str | None = None

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) < 2:
            raise InvalidInputError("a scenario needs at least two components")
        if len({c.d for c in comps}) != 1:
            raise InvalidInputError("all components must have the same dimension")
        if not math.isclose(sum(c.weight for c in comps), 1.0, rel_tol=0, abs_tol=1e-9):
            raise InvalidInputError("component weights must sum to 1")

    @property
    def d(self) -> int:
        return self.components[0].d

    @property
    def n_classes(self) -> int:
        return len(self.components)

    @property
    def weights(self) -> np.ndarray:
        w = np.array([c.weight for c in self.components])
        return w / w.sum()


def fixed_counts(weights, n: int) -> np.ndarray:
    """Class sizes ``n * p_k`` rounded by largest remainder."""
    raw = np.asarray(weights) * n
    counts = np.floor(raw).astype(int)
    order = np.argsort(-(raw - counts), kind="stable")
    counts[order[: n - counts.sum()]] += 1
    return counts


def _draw_given_codes(scenario: Scenario, codes: np.ndarray, rng) -> np.ndarray:
    x = np.empty((codes.size, scenario.d))
    for k, comp in enumerate(scenario.components):
        idx = np.flatnonzero(codes == k)
        x[idx] = comp.draw(idx.size, rng)
    return x


def draw_mixture(scenario: Scenario, n: int, rng: np.random.Generator):
    """``n`` i.i.d. draws of (class code, X) in random order."""
    codes = rng.choice(scenario.n_classes, size=n, p=scenario.weights)
    return codes, _draw_given_codes(scenario, codes, rng)


def sample_scenario(scenario: Scenario, n: int, rng: np.random.Generator, *,
                    allocation: str = "multinomial", min_class: int = 3,
                    max_attempts: int = 100) -> LabeledSample:
    """Draw a labelled sample of size ``n`` from ``scenario``.

    With ``allocation="multinomial"`` labels are i.i.d. draws from the
    mixture weights; label vectors with a class below ``min_class`` are
    redrawn (at most ``max_attempts`` times). ``"fixed"`` uses
    `fixed_counts` and a random order. Labels are ``1..K``.
    """
    K = scenario.n_classes
    if n < K * min_class:
        raise InvalidInputError(f"n = {n} too small for {K} classes of at least {min_class}")
    if allocation == "fixed":
        codes = rng.permutation(np.repeat(np.arange(K), fixed_counts(scenario.weights, n)))
        if np.bincount(codes, minlength=K).min() < min_class:
            raise InvalidInputError("fixed allocation gives a class below the minimum size")
    elif allocation == "multinomial":
        for _ in range(max_attempts):
            codes = rng.choice(K, size=n, p=scenario.weights)
            if np.bincount(codes, minlength=K).min() >= min_class:
                break
        else:
            raise InvalidInputError(
                f"could not draw {min_class}+ points per class in {max_attempts} attempts"
            )
    else:
        raise InvalidInputError(f"allocation must be 'multinomial' or 'fixed', got {allocation!r}")
    x = _draw_given_codes(scenario, codes, rng)
    return LabeledSample(x, codes + 1)


class StudyAbortedError(CatGiniError, RuntimeError):
    """A batch had too many failed replications."""


@dataclass(frozen=True)
class CoverageReport:
    scenario: str
    n: int
    method: str
    level: float
    replications: int
    batches: int
    coverage: float
    mean_length: float
    sd_coverage: float
    sd_length: float
    rho_true: float
    seed: int
    failures: int = 0
    allocation: str = "multinomial"
    rng: str = RNG_ALGORITHM

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class _Job:
    scenario: Scenario
    n: int
    methods: tuple
    level: float
    rho_true: float
    allocation: str
    proportions: str
    seeds: list = field(default_factory=list)


def _run_replications(job: _Job):
    """Covered flags and lengths for each seed; NaN rows mark failures."""
    covered = np.full((len(job.seeds), len(job.methods)), np.nan)
    length = np.full_like(covered, np.nan)
    errors = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for i, ss in enumerate(job.seeds):
            rng = np.random.Generator(np.random.PCG64(ss))
            try:
                sample = sample_scenario(job.scenario, job.n, rng, allocation=job.allocation)
                cis = confidence_intervals(sample, job.methods, job.level, proportions=job.proportions)
            except CatGiniError as exc:
                errors.append(f"{type(exc).__name__}: {exc}")
                continue
            for j, m in enumerate(job.methods):
                ci = cis[m]
                if ci.status == "failed":
                    continue
                covered[i, j] = float(ci.contains(job.rho_true))
                length[i, j] = ci.length
    return covered, length, errors


def coverage_study(scenario: Scenario, n: int, methods=METHODS, level: float = 0.95,
                   replications: int = 500, batches: int = 5, rho_true: float | None = None,
                   seed: int | None = None, *, allocation: str = "multinomial",
                   proportions: str = "resample", workers: int = 1,
                   max_failure_rate: float = 0.01) -> list[CoverageReport]:
    """Estimate coverage probability and mean length of each interval method.

    ``batches`` independent batches of ``replications`` samples are run;
    reported coverage and length are means over batches and the ``sd_*``
    fields are standard deviations across batches.

    Raises
    ------
    StudyAbortedError
        If more than ``max_failure_rate`` of a batch's replications fail
        for any method.
    """
    if rho_true is None:
        raise InvalidInputError("rho_true is required")
    if seed is None:
        raise InvalidInputError("an explicit seed is required for reproducibility")
    if replications < 1 or batches < 1:
        raise InvalidInputError("replications and batches must be positive")
    methods = tuple(m.lower() for m in methods)
    children = np.random.SeedSequence(seed).spawn(replications * batches)
    jobs = [
        _Job(scenario, n, methods, level, rho_true, allocation, proportions,
             children[b * replications:(b + 1) * replications])
        for b in range(batches)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_replications, jobs))
    else:
        results = [_run_replications(job) for job in jobs]

    cov_b = np.empty((batches, len(methods)))
    len_b = np.empty_like(cov_b)
    failures = np.zeros(len(methods), dtype=int)
    for b, (covered, length, errors) in enumerate(results):
        failed = np.isnan(covered).sum(axis=0)
        if np.any(failed > max_failure_rate * replications):
            worst = methods[int(np.argmax(failed))]
            detail = "; ".join(errors[:3]) or "interval status 'failed'"
            raise StudyAbortedError(
                f"batch {b}: {int(failed.max())}/{replications} replications failed "
                f"for {worst} ({detail})"
            )
        failures += failed
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            cov_b[b] = np.nanmean(covered, axis=0)
            len_b[b] = np.nanmean(length, axis=0)

    ddof = 1 if batches > 1 else 0
    reports = []
    for j, m in enumerate(methods):
        reports.append(CoverageReport(
            scenario=scenario.name, n=n, method=m.upper(), level=level,
            replications=replications, batches=batches,
            coverage=float(cov_b[:, j].mean()), mean_length=float(len_b[:, j].mean()),
            sd_coverage=float(cov_b[:, j].std(ddof=ddof)), sd_length=float(len_b[:, j].std(ddof=ddof)),
            rho_true=float(rho_true), seed=int(seed), failures=int(failures[j]),
            allocation=allocation,
        ))
    return reports


TSV_COLUMNS = ("scenario", "n", "method", "level", "replications", "batches", "coverage",
               "sd_coverage", "mean_length", "sd_length", "rho_true", "seed", "failures")


def reports_to_tsv(reports) -> str:
    lines = ["\t".join(TSV_COLUMNS)]
    for r in reports:
        d = r.to_dict()
        lines.append("\t".join(repr(d[c]) if isinstance(d[c], float) else str(d[c]) for c in TSV_COLUMNS))
    return "\n".join(lines) + "\n"


def reports_to_json(reports, **meta) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "kind": "coverage-study",
           "rng": RNG_ALGORITHM, "reports": [r.to_dict() for r in reports]}
    doc.update(meta)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def format_summary(reports) -> str:
    """Aligned table in the style of the published coverage tables."""
    head = f"{'method':<6} {'n':>5} {'CovProb':>16} {'Length':>16}"
    rows = [head]
    for r in reports:
        rows.append(
            f"{r.method:<6} {r.n:>5} {r.coverage:>8.4f}({r.sd_coverage:.4f}) "
            f"{r.mean_length:>8.4f}({r.sd_length:.4f})"
        )
    return "\n".join(rows)
