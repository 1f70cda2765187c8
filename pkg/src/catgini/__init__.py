"""
Categorical Gini correlation between a numerical vector and a class label,
with jackknife empirical likelihood confidence intervals.
"""
from .errors import (CatGiniError, ClassSizeError, ConfigError, DegenerateSampleError,
                     InvalidInputError)
from .gmd import (LabeledSample, gini_correlation_point, gini_correlation_point_u,
                  gini_covariance, gmd_u, gmd_v, summarize, w_n)
from .jackknife import PseudoValueSet, jackknife_variance, pseudo_values
from .el import (WeightVector, ajel_stat, el_statistic, jel_stat, solve_lambda,
                 spatial_depth_weights, wjel_stat)
from .intervals import (ConfidenceInterval, WeakDependenceWarning, confidence_intervals,
                        el_interval, jv_interval)
from .oracles import (closed_form, rho_exponential, rho_monte_carlo, rho_normal_location,
                      rho_normal_scale)
from .simulation import Component, CoverageReport, Scenario, coverage_study, sample_scenario
from .datasets import load_iris, read_csv, write_csv

__version__ = "0.1.0"

__all__ = [
    "CatGiniError", "ClassSizeError", "ConfigError", "DegenerateSampleError", "InvalidInputError",
    "LabeledSample", "gini_correlation_point", "gini_correlation_point_u", "gini_covariance",
    "gmd_u", "gmd_v", "summarize", "w_n",
    "PseudoValueSet", "jackknife_variance", "pseudo_values",
    "WeightVector", "ajel_stat", "el_statistic", "jel_stat", "solve_lambda",
    "spatial_depth_weights", "wjel_stat",
    "ConfidenceInterval", "WeakDependenceWarning", "confidence_intervals", "el_interval",
    "jv_interval",
    "closed_form", "rho_exponential", "rho_monte_carlo", "rho_normal_location", "rho_normal_scale",
    "Component", "CoverageReport", "Scenario", "coverage_study", "sample_scenario",
    "load_iris", "read_csv", "write_csv",
]
