"""Exponential random graph models: statistics, MPLE fitting and simulation."""
from .io import read_fit_json, read_terms_json, write_fit_json
from .mple import ErgmFit, fit_mple, mple_design
from .simulate import SimulationResult, run_chains, simulate_ensemble
from .statistics import ToggleState, change_statistics, global_statistics, statistics_from_adjacency
from .terms import KINDS, ModelSpec, TermSpec, default_terms

__all__ = [
    "KINDS", "ErgmFit", "ModelSpec", "SimulationResult", "TermSpec", "ToggleState", "change_statistics",
    "default_terms", "fit_mple", "global_statistics", "mple_design", "read_fit_json", "read_terms_json",
    "run_chains", "simulate_ensemble", "statistics_from_adjacency", "write_fit_json",
]
