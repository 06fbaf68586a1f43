"""Mixture sampling, Best-of-N, judge scoring, reflection and reward aggregation."""

from agentlab.tts.bon import best_of_n, best_of_n_full
from agentlab.tts.mixture import MixtureWeights, sample_mixture
from agentlab.tts.prm import CandidateNode, TrajectoryCandidate, reflect_node, score_node, select_trajectory
from agentlab.tts.reward import RewardTrace, aggregate_reward
from agentlab.tts.verdicts import PRMVerdict, ReflectionNote

__all__ = [
    "CandidateNode",
    "MixtureWeights",
    "PRMVerdict",
    "ReflectionNote",
    "RewardTrace",
    "TrajectoryCandidate",
    "aggregate_reward",
    "best_of_n",
    "best_of_n_full",
    "reflect_node",
    "sample_mixture",
    "score_node",
    "select_trajectory",
]
