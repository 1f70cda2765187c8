"""Four 95% confidence intervals for the iris correlation.

JEL, AJEL and WJEL invert an empirical likelihood statistic over the
jackknife pseudo-values; JV is the normal interval with a jackknife
standard error. The script also prints a text profile of the JEL statistic.
"""
import numpy as np

from catgini import confidence_intervals, jel_stat, load_iris, pseudo_values
from catgini.intervals import chi2_quantile_1df

sample = load_iris(("Petal.Length", "Petal.Width"))
for method, ci in confidence_intervals(sample).items():
    print(f"{method.upper():<5} ({ci.lower:.4f}, {ci.upper:.4f})  length {ci.length:.4f}  {ci.status}")

pv = pseudo_values(sample)
cut = chi2_quantile_1df(0.95)
print(f"\nJEL profile, threshold {cut:.3f}:")
for rho in np.linspace(0.70, 0.80, 11):
    stat = jel_stat(pv, rho).stat
    print(f"  rho {rho:.2f}  {stat:8.3f}  {'#' * min(int(stat * 4), 40)}")

for level in (0.80, 0.90, 0.95, 0.99):
    ci = confidence_intervals(sample, ("jel",), level)["jel"]
    print(f"JEL at {level:.0%}: ({ci.lower:.4f}, {ci.upper:.4f})")
