"""Stable stubborn-set reduction for reachability games on Petri nets."""
__version__ = "0.1.0"

from .formats import ModelFile, parse_model, parse_query
from .glts import ExplicitGLTS, check_stable, solve_glts
from .kernel import BACKEND
from .net import BoundednessError, FiringError, NetError, PetriNetGame
from .reduction import stubborn_set
from .solver import SolveConfig, SolveReport, compare_runs, solve, verify_strategy

__all__ = [
    "BACKEND", "ModelFile", "parse_model", "parse_query", "BoundednessError", "ExplicitGLTS", "FiringError", "NetError",
    "PetriNetGame", "SolveConfig", "SolveReport", "check_stable", "compare_runs",
    "solve", "solve_glts", "stubborn_set", "verify_strategy",
]
