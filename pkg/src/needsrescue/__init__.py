"""Needs-driven multi-robot rescue: closed-form team analytics, a team
optimizer, a behaviour-tree controller and a discrete-time simulator."""

from .core import (CapabilityProfile, MissionSpec, ProfileSet, RobotClass,
                   TeamComposition, check_dominance, default_profile,
                   default_profiles)

__version__ = "0.1.0"

__all__ = [
    "CapabilityProfile", "MissionSpec", "ProfileSet", "RobotClass",
    "TeamComposition", "check_dominance", "default_profile", "default_profiles",
]
