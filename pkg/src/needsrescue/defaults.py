"""Built-in numeric defaults.

Everything the rest of the package treats as a "default" value lives here so
that reproduction runs have a single place to audit.  Values that the
reference experiments pin down (capacities 8 and 1, per-step energy 0.045 and
0.015, 30 % charge threshold, 10 s charge, 300 s missions, the 1/10 speed
ratio and the x2 / x0.5 cooperative speed changes) are marked ``# fixed``.
Everything else is a modelling choice.
"""

import math

# Dominance-check tolerances.  "much greater" is a ratio of at least
# DOMINANCE_FACTOR; "approximately equal" is a ratio inside APPROX_RATIO.
DOMINANCE_FACTOR = 4.0
APPROX_RATIO = (0.5, 2.0)

# Capability profiles: v, com, sen, eng, res, cap.
PROFILES = {
    "carrier": dict(v=1.0, com=10.0, sen=10.0, eng=100.0, res=2.0, cap=8.0),  # cap fixed
    "supplier": dict(v=1.0, com=10.0, sen=10.0, eng=80.0, res=100.0, cap=2.0),
    "observer": dict(v=10.0, com=100.0, sen=math.inf, eng=10.0, res=1.0, cap=1.0),  # cap, sen fixed
}

# Simulator per-class defaults.
ROBOT_CLASSES = {
    "carrier": dict(
        velocity=1.0,             # fixed: a tenth of the observer speed
        sense_range=10.0,
        per_step_energy=0.045,    # fixed
        capacity=8,               # fixed
        charge_threshold=30.0,    # fixed
        charge_duration=10.0,     # fixed
        coop_velocity_factor=2.0, # fixed
        layer="ground",
    ),
    "supplier": dict(
        velocity=1.0,
        sense_range=10.0,
        per_step_energy=0.045,
        capacity=2,
        charge_threshold=30.0,
        charge_duration=10.0,
        coop_velocity_factor=1.0,
        layer="ground",
    ),
    "observer": dict(
        velocity=10.0,            # fixed (ratio)
        sense_range=math.inf,     # fixed: whole-map perception
        per_step_energy=0.015,    # fixed
        capacity=1,               # fixed
        charge_threshold=30.0,    # fixed
        charge_duration=10.0,     # fixed
        coop_velocity_factor=0.5, # fixed
        layer="air",
    ),
}

# World geometry and timing.
DURATION_S = 300.0  # fixed: five minutes
DT_S = 0.1
ENERGY_STEP = 0.1  # distance of one "moving step"; equals carrier speed * dt
RESCUE_TIME_S = 1.0  # one unit of rescue handling time per round
SHELTER = (0.0, 0.0)
RESCUE_SITE = (20.0, 0.0)
CHARGER = (-5.0, 0.0)
LANE_OFFSET = 1.0
SAFETY_RADIUS = 0.5
ARRIVAL_RADIUS = 1.5
SPAWN_JITTER = 0.0
STALL_TICKS = 10

OBSTACLES = dict(n=12, radius=1.0, t_c=4.0, e_c=4.0, half_width=10.0, margin=2.0)
