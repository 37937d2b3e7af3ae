from .negotiation import MoveIntent, negotiate_conflicts
from .poisson import sample_encounters, sample_encounters_batch
from .state import Phase, RobotState
from .world import (RobotMetrics, TrialMetrics, WorldState, build_world, metrics,
                    run_trial, step)

__all__ = [
    "MoveIntent", "negotiate_conflicts", "sample_encounters", "sample_encounters_batch",
    "Phase", "RobotState", "RobotMetrics", "TrialMetrics", "WorldState", "build_world",
    "metrics", "run_trial", "step",
]
