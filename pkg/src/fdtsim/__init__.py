"""Decision-theory simulator: one-shot causal scenarios and evolutionary games."""

__version__ = "0.1.0"

from .graphs import (
    CausalModel,
    Cpt,
    DecisionProblem,
    EvaluationReport,
    Variable,
    decide,
    evaluate_cdt,
    evaluate_edt,
    evaluate_fdt,
    infer,
    validate_model,
)
from .scenarios import SCENARIO_IDS, ScenarioParams, build, build_scenario

__all__ = [
    "CausalModel",
    "Cpt",
    "DecisionProblem",
    "EvaluationReport",
    "SCENARIO_IDS",
    "ScenarioParams",
    "Variable",
    "build",
    "build_scenario",
    "decide",
    "evaluate_cdt",
    "evaluate_edt",
    "evaluate_fdt",
    "infer",
    "validate_model",
]
