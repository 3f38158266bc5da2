"""Prevalence-adjusted validation of high-risk/low-risk prognostic subgroups."""

from .cohort import (
    Cohort,
    CohortError,
    Group,
    HorizonSpec,
    Schema,
    SubjectRecord,
    dichotomize,
    format_cohort,
    parse_cohort,
    read_cohort,
)
from .diagnostics import (
    ContingencyTable,
    DiagnosticSummary,
    UndefinedValueError,
    adjusted_subgroup_survival,
    contingency_at,
    difference_curve,
    naive_subgroup_survival,
    predictive_values,
    prevalence_from_survival,
    sens_spec,
    survival_difference,
)
from .simulation import SimulationConfig, SplitMix64, apply_censoring, simulate_cohort
from .survival import (
    HazardRatioResult,
    LogRankResult,
    SurvivalCurve,
    SurvivalError,
    hazard_ratio,
    km_estimate,
    log_rank,
    survival_at,
)
from .tdroc import td_diagnostic_summary, td_sens_spec

__version__ = "0.1.0"
