"""Population values: closed forms against a Monte Carlo estimate.

The Monte Carlo oracle draws one large sample and reports a block standard
error. ``n_total`` is kept small here so the script runs in seconds; the
acceptance suite uses a million draws.
"""
from catgini import rho_exponential, rho_monte_carlo, rho_normal_location, rho_normal_scale
from catgini.config import load_config

closed = {
    "table1_row1": rho_normal_location(0.5, 3.0),
    "table1_exp": rho_exponential(0.5, 1.0, 4.0),
    "table1_scale": rho_normal_scale(0.5, 3.0),
}
for name, value in closed.items():
    mc = rho_monte_carlo(load_config(name).scenario, 100_000, seed=1)
    print(f"{name:<14} closed {value:.5f}   MC {mc.estimate:.5f} +- {mc.se:.5f} ({mc.method})")

for name in ("table2_row1", "table3_row1"):
    cfg = load_config(name)
    mc = rho_monte_carlo(cfg.scenario, 100_000, seed=1)
    print(f"{name:<14} MC {mc.estimate:.5f} +- {mc.se:.5f}, configured {cfg.rho_true}")
