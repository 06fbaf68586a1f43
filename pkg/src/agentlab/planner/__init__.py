"""Plans, subtask dependency graphs and plan-tip heuristics."""

from agentlab.planner.graph import DependencyGraph, Subtask, decompose, executable_set, parse_subtasks, run_graph
from agentlab.planner.plan import Plan, SubtaskOutput, generate_plan, revise_plan, should_revise, validate_output
from agentlab.planner.tips import ActionScore, HeuristicSet, load_tips, tip_bonus, tip_policy

__all__ = [
    "ActionScore",
    "DependencyGraph",
    "HeuristicSet",
    "Plan",
    "Subtask",
    "SubtaskOutput",
    "decompose",
    "executable_set",
    "generate_plan",
    "load_tips",
    "parse_subtasks",
    "revise_plan",
    "run_graph",
    "should_revise",
    "tip_bonus",
    "tip_policy",
    "validate_output",
]
