"""Decision structures and causal explanations from a declarative knowledge base."""

from .decide import DecisionProblem, Plan, expected_utility, simulate, solve_plan
from .errors import CausatumError
from .explain import abduce, explain_failure, goal_regress
from .inus import (
    Context,
    Scenario,
    attribute_cause,
    classify_factor,
    minimally_sufficient_scenarios,
)
from .kb import KnowledgeBase, default_priors, load_kb, parse_kb, serialize_kb, validate_kb
from .stat import (
    JointDistribution,
    ProcessGraph,
    cond_prob,
    conjunctive_fork_check,
    screens_off,
    statistical_relevance,
)
from .worlds import combinatorics, enumerate_worlds, nearest_world

__all__ = [
    "DecisionProblem",
    "Plan",
    "expected_utility",
    "simulate",
    "solve_plan",
    "CausatumError",
    "abduce",
    "explain_failure",
    "goal_regress",
    "Context",
    "Scenario",
    "attribute_cause",
    "classify_factor",
    "minimally_sufficient_scenarios",
    "KnowledgeBase",
    "default_priors",
    "load_kb",
    "parse_kb",
    "serialize_kb",
    "validate_kb",
    "JointDistribution",
    "ProcessGraph",
    "cond_prob",
    "conjunctive_fork_check",
    "screens_off",
    "statistical_relevance",
    "combinatorics",
    "enumerate_worlds",
    "nearest_world",
]

__version__ = "0.1.0"
