"""Point estimates of the categorical Gini correlation on the iris data.

Run with ``python demos/01_point_estimates.py``. Prints the U and V
estimates for each pair of features and for all four together, and shows
the Gini covariance and mean differences behind them.
"""
from itertools import combinations

from catgini import gini_correlation_point, gini_correlation_point_u, gini_covariance, load_iris, summarize
from catgini.datasets import IRIS_FEATURES

print(f"{'features':<28}{'rho_U':>9}{'rho_V':>9}{'gCov':>9}")
for pair in list(combinations(IRIS_FEATURES, 2)) + [IRIS_FEATURES]:
    sample = load_iris(pair)
    name = "all four" if len(pair) == 4 else " + ".join(pair)
    print(f"{name:<28}{gini_correlation_point_u(sample):9.4f}"
          f"{gini_correlation_point(sample):9.4f}{gini_covariance(sample):9.4f}")

s = summarize(load_iris())
print("\npooled GMD (U):", round(s.u_pooled, 4))
for label, u in zip(load_iris().labels, s.u_class):
    print(f"  within {label:<11} {u:.4f}")
