"""Host EMO/EMaO algorithms (NSGA-II, NSGA-III, MOEA/D), their IR2-augmented
generation loops, and the run driver."""

from ir2emo.algorithms.moead import Moead, MoeadParams
from ir2emo.algorithms.nsga2 import Nsga2
from ir2emo.algorithms.nsga3 import Nsga3
from ir2emo.algorithms.operators import GeneticParams
from ir2emo.algorithms.runner import (
    TABLE_N_P,
    Ir2Params,
    RunConfig,
    RunTrace,
    gaps_for,
    parse_algorithm_id,
    run,
)

__all__ = [
    "GeneticParams", "Ir2Params", "Moead", "MoeadParams", "Nsga2", "Nsga3",
    "RunConfig", "RunTrace", "TABLE_N_P", "gaps_for", "parse_algorithm_id",
    "run",
]
