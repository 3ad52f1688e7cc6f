"""ir2emo: learning-assisted innovized repair (IR2) for evolutionary
multi- and many-objective optimization.

Provides the IR2 repair operator integrated with NSGA-II, NSGA-III, and
MOEA/D, the ZDT/DTLZ/WFG benchmark problems it is evaluated on,
reference-point and performance-indicator machinery, and an experiment
harness with a CLI (`ir2emo`).
"""

from ir2emo.core import (
    ConfigurationError,
    ContractViolation,
    EvalCounter,
    EvaluationError,
    Individual,
    Population,
    ProblemDefinition,
    RandomSource,
    UnsupportedError,
    dominates,
    evaluate_all,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ContractViolation",
    "EvalCounter",
    "EvaluationError",
    "Individual",
    "Population",
    "ProblemDefinition",
    "RandomSource",
    "UnsupportedError",
    "dominates",
    "evaluate_all",
    "__version__",
]
