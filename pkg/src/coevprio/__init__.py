"""Search-based priority assignment for real-time task sets under uncertain aperiodic arrivals."""

from .model import (
    ArrivalSequence,
    Execution,
    ModelError,
    PriorityAssignment,
    ScheduleScenario,
    Task,
    TaskSet,
    validate_arrivals,
    validate_taskset,
)
from .scheduler import BACKEND, brute_force_simulate, simulate
from .fitness import Evaluator, fc, fd, fs
from .coevolution import BestFront, CoevolutionConfig, FrontMember, run
from .baselines import Budget, rs_run, seq_run
from .synth import SynthConfig, synthesize

__all__ = [
    "ArrivalSequence", "Execution", "ModelError", "PriorityAssignment", "ScheduleScenario",
    "Task", "TaskSet", "validate_arrivals", "validate_taskset",
    "BACKEND", "brute_force_simulate", "simulate",
    "Evaluator", "fc", "fd", "fs",
    "BestFront", "CoevolutionConfig", "FrontMember", "run",
    "Budget", "rs_run", "seq_run",
    "SynthConfig", "synthesize",
]
