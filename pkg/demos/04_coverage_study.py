"""A small coverage study of the two-normal location scenario.

Uses 100 replications in 2 batches, which takes well under a minute; the
bundled configs default to 500 x 5. The same run is available as
``catgini simulate --config table1_row1 --replications 100 --batches 2``.
"""
from catgini.config import load_config
from catgini.simulation import coverage_study, format_summary, reports_to_tsv

cfg = load_config("table1_row1")
reports = coverage_study(cfg.scenario, cfg.n, ("jel", "ajel", "jv"), replications=100, batches=2,
                         rho_true=cfg.rho_true, seed=cfg.seed)
print(format_summary(reports))
print()
print(reports_to_tsv(reports))
