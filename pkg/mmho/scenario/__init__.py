# coding: utf-8
# flake8: noqa

"""
Street scenario simulation producing labeled beam sequences.
"""

__all__ = [
    "Box", "Wall", "ScenarioConfig", "ScenarioError", "default_scenario", "load_scenario_config",
    "default_scenario_file", "los_blocked", "path_params", "Trajectory", "LabeledEpisode",
    "EmptyEpisodeError", "beam_coherence_time", "sample_trajectory", "generate_episode",
    "generate_dataset", "handoff_events",
]


# provisioning imports
from mmho.scenario.config import (
    Box, Wall, ScenarioConfig, ScenarioError, default_scenario, load_scenario_config,
    default_scenario_file,
)
from mmho.scenario.geometry import los_blocked, path_params
from mmho.scenario.generator import (
    Trajectory, LabeledEpisode, EmptyEpisodeError, beam_coherence_time, sample_trajectory,
    generate_episode, generate_dataset, handoff_events,
)
