"""Experiment suites over the shipped scenarios."""
from .suites import (
    SUITES,
    ExperimentSuite,
    SuitePlan,
    SuiteResult,
    SweepPoint,
    run_suite,
    stoprule_sliding_excluded,
)

__all__ = [
    "SUITES",
    "ExperimentSuite",
    "SuitePlan",
    "SuiteResult",
    "SweepPoint",
    "run_suite",
    "stoprule_sliding_excluded",
]
