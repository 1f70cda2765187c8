"""Acceptance criteria, one test per criterion.

Each test appends a ``criterion N: PASS|FAIL ...`` line that is echoed in the
pytest terminal summary, then asserts. Run ``pytest tests/test_acceptance.py``.
"""
import math
import time

import numpy as np
import pytest

import reference as ref
from conftest import ACCEPTANCE_LINES, run_bundled_study
from catgini import oracles as O
from catgini.config import load_config
from catgini.datasets import load_iris
from catgini.el import WeightVector, el_statistic, jel_stat, solve_lambda, wjel_stat
from catgini.gmd import (LabeledSample, class_distance_matrix, gini_correlation_point_u, gmd_v,
                         summarize, w_n)
from catgini.intervals import confidence_intervals
from catgini.jackknife import pseudo_values

# near-zero random samples trip the advisory warning by design
pytestmark = pytest.mark.filterwarnings("ignore::catgini.intervals.WeakDependenceWarning")


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# ---------------------------------------------------------------- criterion 1

CLOSED_FORMS = [
    ("rho_exponential(1/2,1,4)", lambda: O.rho_exponential(0.5, 1, 4), 0.1525),
    ("rho_exponential(1/3,1,4)", lambda: O.rho_exponential(1 / 3, 1, 4), 0.1176),
    ("rho_normal_location(1/2,3)", lambda: O.rho_normal_location(0.5, 3), 0.4556),
    ("rho_normal_location(1/3,3)", lambda: O.rho_normal_location(1 / 3, 3), 0.4267),
    ("rho_normal_scale(1/2,3)", lambda: O.rho_normal_scale(0.5, 3), 0.0557),
    ("rho_normal_scale(1/3,3)", lambda: O.rho_normal_scale(1 / 3, 3), 0.0430),
]


def test_criterion_1_closed_forms():
    misses = []
    for name, fn, target in CLOSED_FORMS:
        value = fn()
        if abs(value - target) >= 5e-5:
            misses.append(f"{name}={value:.6f} vs {target}")
    record(1, not misses, "; ".join(misses) or "6/6 within 5e-5")


# ---------------------------------------------------------------- criterion 2

IRIS = [
    (("Sepal.Length", "Sepal.Width"), 0.3570,
     {"jel": (0.3245, 0.4043), "ajel": (0.3245, 0.4051), "wjel": (0.2595, 0.3933), "jv": (0.3064, 0.4076)}),
    (("Petal.Length", "Petal.Width"), 0.7561,
     {"jel": (0.7344, 0.7878), "ajel": (0.7344, 0.7883), "wjel": (0.6911, 0.7720), "jv": (0.7223, 0.7899)}),
    (("Sepal.Length", "Petal.Length"), 0.6596,
     {"jel": (0.6337, 0.6972), "ajel": (0.6337, 0.6979), "wjel": (0.6337, 0.7068), "jv": (0.6193, 0.6999)}),
    (("Sepal.Width", "Petal.Width"), 0.5572,
     {"jel": (0.5311, 0.5954), "ajel": (0.5311, 0.5960), "wjel": (0.5311, 0.6040), "jv": (0.5165, 0.5980)}),
    (None, 0.6239,
     {"jel": (0.6003, 0.6587), "ajel": (0.6003, 0.6593), "wjel": (0.6003, 0.6803), "jv": (0.5871, 0.6607)}),
]


def test_criterion_2_iris():
    start = time.perf_counter()
    point_misses, endpoint_misses, checked = [], [], 0
    for features, point, published in IRIS:
        sample = load_iris(features) if features else load_iris()
        label = "+".join(f[0] + f.split(".")[1][0] for f in features) if features else "all"
        rho = gini_correlation_point_u(sample)
        if abs(rho - point) >= 1e-3:
            point_misses.append(f"{label} {rho:.4f}")
        cis = confidence_intervals(sample)
        for method, (lo, hi) in published.items():
            for side, got, want in (("lo", cis[method].lower, lo), ("hi", cis[method].upper, hi)):
                checked += 1
                if abs(got - want) >= 2e-3:
                    endpoint_misses.append(f"{label}/{method}.{side} {got:.4f}~{want}")
    elapsed = time.perf_counter() - start
    ok = not point_misses and not endpoint_misses and elapsed < 5
    detail = (f"points {5 - len(point_misses)}/5, endpoints {checked - len(endpoint_misses)}/{checked} "
              f"within 2e-3, {elapsed:.2f}s")
    if point_misses or endpoint_misses:
        detail += "; misses: " + ", ".join(point_misses + endpoint_misses)
    record(2, ok, detail)


# ---------------------------------------------------------------- criterion 3

def random_sample(rng):
    k = int(rng.choice([2, 3]))
    d = int(rng.choice([1, 5]))
    n = int(rng.integers(max(9, 3 * k), 61))
    # every class needs 3 points for the pseudo-values
    y = np.concatenate([np.repeat(np.arange(k), 3), rng.integers(0, k, n - 3 * k)])
    x = rng.normal(size=(n, d)) + y[:, None] * rng.uniform(0, 2)
    return LabeledSample(x, rng.permutation(y))


def naive_pseudo_values(sample, rho):
    n = sample.n
    full = n * w_n(sample, rho)
    out = np.empty(n)
    for i in range(n):
        keep = np.arange(n) != i
        out[i] = full - (n - 1) * w_n(sample.subset(keep), rho)
    return out


def test_criterion_3_identities():
    rng = np.random.default_rng(20240610)
    start = time.perf_counter()
    worst = {"a": 0.0, "b": 0.0, "c": 0.0}
    for _ in range(200):
        sample = random_sample(rng)
        s = summarize(sample)
        pv = pseudo_values(sample, s)
        for rho in rng.uniform(-0.5, 1.0, 5):
            worst["a"] = max(worst["a"], rel_err(pv.mean(rho), w_n(sample, rho, s)))
        p = sample.p_hat
        worst["b"] = max(worst["b"], rel_err(float(p @ class_distance_matrix(sample) @ p), gmd_v(sample.x)))
        rho = float(rng.uniform(0, 1))
        naive = naive_pseudo_values(sample, rho)
        scale = np.max(np.abs(naive))
        worst["c"] = max(worst["c"], float(np.max(np.abs(pv.values(rho) - naive)) / scale))
    elapsed = time.perf_counter() - start
    ok = all(v < 1e-10 for v in worst.values()) and elapsed < 10
    record(3, ok, f"max rel err (a) {worst['a']:.1e} (b) {worst['b']:.1e} (c) {worst['c']:.1e}, {elapsed:.2f}s")


# ---------------------------------------------------------------- criterion 4

def test_criterion_4_el_solver():
    rng = np.random.default_rng(20240611)
    worst_score = worst_dlam = worst_wjel = 0.0
    for _ in range(500):
        n = int(rng.integers(5, 40))
        v = rng.normal(loc=rng.uniform(-1, 1), scale=rng.uniform(0.1, 3), size=n)
        v[0], v[1] = abs(v[0]) + 1e-3, -abs(v[1]) - 1e-3  # mixed signs
        sol = solve_lambda(v)
        worst_score = max(worst_score, abs(ref.el_score(sol.lam, list(v))))
        worst_dlam = max(worst_dlam, abs(sol.lam - ref.lambda_by_grid_bisection(list(v), grid=200)))
        plain, _ = el_statistic(v)
        weighted, _ = el_statistic(v, WeightVector.uniform(n))
        worst_wjel = max(worst_wjel, abs(plain - weighted))
    sample = load_iris()
    pv = pseudo_values(sample)
    for rho in (0.55, 0.6, 0.65, 0.7):
        worst_wjel = max(worst_wjel, abs(jel_stat(pv, rho).stat - wjel_stat(pv, rho, WeightVector.uniform(150)).stat))
    ok = worst_score < 1e-10 and worst_dlam < 1e-8 and worst_wjel < 1e-12
    record(4, ok, f"max |score| {worst_score:.1e}, max |dlambda| {worst_dlam:.1e}, "
                  f"max |WJEL_uniform - JEL| {worst_wjel:.1e}")


# ---------------------------------------------------------------- criterion 5

@pytest.mark.slow
def test_criterion_5_desk_coverage(location_study):
    t1, t1_time = location_study
    t2, t2_time = run_bundled_study("table2_row1", ("jel",))
    t3, t3_time = run_bundled_study("table3_row1", ("jel",))
    checks = [
        ("T1 JEL cov", t1["JEL"].coverage, 0.9418, 0.032),
        ("T1 JV len", t1["JV"].mean_length, 0.1926, 0.01),
        ("T2 JEL cov", t2["JEL"].coverage, 0.9507, 0.032),
        ("T3 JEL cov", t3["JEL"].coverage, 0.9463, 0.032),
    ]
    total = t1_time + t2_time + t3_time
    ok = all(abs(got - want) <= tol for _, got, want, tol in checks) and total < 600
    parts = [f"{name} {got:.4f} ({want}+-{tol})" for name, got, want, tol in checks]
    record(5, ok, ", ".join(parts) + f", {total:.0f}s on one core")


# ---------------------------------------------------------------- criterion 6

MC_CASES = [
    ("table1_row1", lambda: O.rho_normal_location(0.5, 3), None),
    ("table1_exp", lambda: O.rho_exponential(0.5, 1, 4), None),
    ("table1_scale", lambda: O.rho_normal_scale(0.5, 3), None),
    ("table2_row1", lambda: 0.2295, 0.005),
    ("table3_row1", lambda: 0.0803, 0.005),
]


@pytest.mark.slow
def test_criterion_6_monte_carlo():
    parts, ok = [], True
    for name, target, abs_tol in MC_CASES:
        start = time.perf_counter()
        mc = O.rho_monte_carlo(load_config(name).scenario, 1_000_000, seed=1)
        elapsed = time.perf_counter() - start
        tol = 3 * mc.se if abs_tol is None else abs_tol
        good = abs(mc.estimate - target()) <= tol and elapsed < 120
        ok &= good
        parts.append(f"{name} {mc.estimate:.4f} vs {target():.4f} (tol {tol:.4f}, {elapsed:.1f}s)")
    record(6, ok, ", ".join(parts))


# ---------------------------------------------------------------- criterion 7

def test_criterion_7_properties():
    rng = np.random.default_rng(20240612)
    failures = []
    for trial in range(10):
        sample = random_sample(rng)
        rho = gini_correlation_point_u(sample)
        pv = pseudo_values(sample)
        perm = rng.permutation(sample.n)
        moved = LabeledSample(3.7 * sample.x[perm] + rng.normal(size=sample.d), sample.codes[perm])
        if not math.isclose(gini_correlation_point_u(moved), rho, rel_tol=1e-9, abs_tol=1e-12):
            failures.append(f"invariance rho #{trial}")
        probe = rho + 0.05
        a, b = jel_stat(pv, probe).stat, jel_stat(pseudo_values(moved), probe).stat
        if not math.isclose(a, b, rel_tol=1e-7, abs_tol=1e-9):
            failures.append(f"invariance JEL #{trial}")
        if abs(jel_stat(pv, rho).stat) > 1e-12:
            failures.append(f"stat(rho_U) #{trial}")
        if sample.n >= 20:
            narrow = confidence_intervals(sample, ("jel", "jv"), 0.90)
            wide = confidence_intervals(sample, ("jel", "jv"), 0.99)
            for m in narrow:
                if not (wide[m].lower <= narrow[m].lower + 1e-9 and narrow[m].upper <= wide[m].upper + 1e-9):
                    failures.append(f"nesting {m} #{trial}")
    scenario = load_config("table1_row1").scenario
    from catgini.simulation import coverage_study, sample_scenario
    if sample_scenario(scenario, 40, np.random.default_rng(5)).x.tobytes() != \
            sample_scenario(scenario, 40, np.random.default_rng(5)).x.tobytes():
        failures.append("sampling determinism")
    kw = dict(methods=("jel", "jv"), replications=10, batches=2, rho_true=0.4556, seed=9)
    if coverage_study(scenario, 40, **kw) != coverage_study(scenario, 40, **kw):
        failures.append("study determinism")
    record(7, not failures, "; ".join(failures) or
           "invariance, stat(rho_U)=0, nestedness and determinism hold (hypothesis versions in the module tests)")
