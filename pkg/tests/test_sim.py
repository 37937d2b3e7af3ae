import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from needsrescue.core import RobotClass
from needsrescue.harness.scenario import make_scenario, shipped_scenarios
from needsrescue.needs_bt import tick_tree
from needsrescue.sim import (MoveIntent, Phase, build_world, negotiate_conflicts, run_trial,
                             sample_encounters, sample_encounters_batch, step)
from needsrescue.sim.behaviors import INTENT_ACTIONS
from needsrescue.sim.state import Geometry, step_toward


def small(counts, **kw):
    kw.setdefault("duration_s", 30.0)
    return make_scenario("t", counts, **kw)


# -- kinematics and energy ----------------------------------------------------

def test_step_toward():
    assert step_toward((0.0, 0.0), (10.0, 0.0), 1.0) == (1.0, 0.0)
    assert step_toward((0.0, 0.0), (0.5, 0.0), 1.0) == (0.5, 0.0)


def test_unit_step_in_world():
    sc = small({"carrier": 1}, dt_s=1.0, energy_step=1.0)
    w = build_world(sc, 0)
    r = w.robots[0]
    r.position = (0.0, 0.0)
    r.set_task(Phase.TO_SITE, [(10.0, 0.0)], None)
    step(w)
    assert r.position == (1.0, 0.0)


@pytest.mark.parametrize("cls,cost", [("carrier", 0.045), ("observer", 0.015 * 10)])
def test_energy_per_tick(cls, cost):
    # the carrier covers one energy step per tick; the observer ten
    w = build_world(small({cls: 1}), 0)
    step(w)
    assert 100.0 - w.robots[0].energy == pytest.approx(cost)


def test_cooperation_changes_speed():
    noncoop = build_world(small({"carrier": 3, "observer": 3}), 0)
    coop = build_world(small({"carrier": 3, "observer": 3}, cooperation=True), 0)
    for a, b in zip(noncoop.robots, coop.robots):
        factor = 2.0 if a.cls is RobotClass.CARRIER else 0.5
        assert b.velocity == a.velocity * factor
    assert all(r.knows_obstacles for r in coop.robots)
    assert [r.knows_obstacles for r in noncoop.robots] == [False] * 3 + [True] * 3


def test_build_world_counts_and_determinism():
    sc1 = shipped_scenarios()[0]
    w = build_world(sc1, 3)
    assert len(w.robots) == 6 and {r.cls for r in w.robots} == {RobotClass.CARRIER}
    assert all(r.energy == 100.0 for r in w.robots)
    w2 = build_world(sc1, 3)
    assert w.obstacles == w2.obstacles
    assert [r.position for r in w.robots] == [r.position for r in w2.robots]
    assert w.obstacles != build_world(sc1, 4).obstacles


def test_obstacles_clear_of_sites():
    w = build_world(shipped_scenarios()[0], 11)
    for (p, rad) in w.obstacles:
        for s in (w.geometry.shelter, w.geometry.site, w.geometry.charger):
            assert math.dist(p, s) >= rad + w.scenario.arrival_radius


# -- charging ---------------------------------------------------------------

def test_low_energy_diverts_and_charges_before_rescuing():
    sc = small({"carrier": 1}, duration_s=200.0)
    w = build_world(sc, 0)
    r = w.robots[0]
    r.position = (15.0, 1.0)
    r.energy = 29.9
    board = w.boards[0]
    step(w)
    assert r.phase is Phase.TO_CHARGE
    assert board.executed[-1] == "go_charge"
    charged_at = None
    for _ in range(2000):
        before = r.phase
        step(w)
        if before is Phase.CHARGING and r.phase is not Phase.CHARGING:
            charged_at = w.tick
            break
        assert "execute" not in board.executed or r.phase not in (Phase.RESCUING,)
        assert not (r.phase is Phase.RESCUING)
    assert charged_at is not None
    assert r.energy == 100.0 and r.charges == 1


def test_charging_robot_never_moves():
    sc = small({"carrier": 1})
    w = build_world(sc, 0)
    r = w.robots[0]
    r.position = w.geometry.charger
    r.energy = 10.0
    r.set_task(Phase.CHARGING)
    r.timer = r.charge_ticks
    positions = set()
    for _ in range(r.charge_ticks - 1):
        step(w)
        positions.add(r.position)
        assert w.boards[0].intent.kind == "charge"
    assert positions == {w.geometry.charger}


def test_zero_energy_robot_never_moves():
    w = build_world(small({"carrier": 1}), 0)
    r = w.robots[0]
    r.energy = 0.0
    start = r.position
    for _ in range(20):
        step(w)
    assert r.position == start


# -- negotiation ------------------------------------------------------------

def test_higher_energy_wins():
    a = MoveIntent(0, 60.0, (0.0, 0.0), (1.0, 0.0))
    b = MoveIntent(1, 80.0, (2.0, 0.0), (1.0, 0.0))
    out = negotiate_conflicts([a, b], 0.5)
    assert out[1].moving and not out[0].moving


def test_no_conflict_unchanged():
    a = MoveIntent(0, 60.0, (0.0, 0.0), (1.0, 0.0))
    b = MoveIntent(1, 80.0, (5.0, 0.0), (4.0, 0.0))
    assert negotiate_conflicts([a, b], 0.5) == [a, b]


def test_lower_id_breaks_energy_ties():
    a = MoveIntent(0, 50.0, (0.0, 0.0), (1.0, 0.0))
    b = MoveIntent(1, 50.0, (2.0, 0.0), (1.0, 0.0))
    out = negotiate_conflicts([a, b], 0.5)
    assert out[0].moving and not out[1].moving


def test_layers_do_not_conflict():
    a = MoveIntent(0, 50.0, (0.0, 0.0), (1.0, 0.0), "ground")
    b = MoveIntent(1, 50.0, (2.0, 0.0), (1.0, 0.0), "air")
    assert negotiate_conflicts([a, b], 0.5) == [a, b]


def test_three_way_exhaustive():
    """Every energy ordering of three robots converging on one point."""
    starts = [(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)]
    for energies in itertools.permutations([10.0, 20.0, 30.0]):
        intents = [MoveIntent(i, e, s, (1.0, 0.0)) for i, (e, s) in enumerate(zip(energies, starts))]
        out = negotiate_conflicts(intents, 0.5)
        movers = [o.robot_id for o in out if o.moving]
        assert movers == [int(np.argmax(energies))]


def _conflict_free(out, r):
    for a, b in itertools.combinations(out, 2):
        if a.layer == b.layer and math.dist(a.end, b.end) < r:
            if a.moving or b.moving:
                return False
    return True


coord = st.floats(-3, 3, allow_nan=False)
point = st.tuples(coord, coord)


@settings(max_examples=200)
@given(st.lists(st.tuples(point, point, st.floats(0, 100)), min_size=1, max_size=6))
def test_negotiation_is_conflict_free(raw):
    intents = [MoveIntent(i, e, s, t) for i, (s, t, e) in enumerate(raw)]
    out = negotiate_conflicts(intents, 0.5)
    assert _conflict_free(out, 0.5)
    for i, o in zip(intents, out):
        assert o.end in (i.end, i.start)


# -- trials -----------------------------------------------------------------

def test_trial_is_deterministic():
    sc = shipped_scenarios()[2].with_changes(duration_s=60.0)
    assert run_trial(sc, 5) == run_trial(sc, 5)


def test_zero_victims():
    m = run_trial(small({"carrier": 2}, victims=0), 0)
    assert m.rescued_units == 0 and m.energy_per_unit is None


def test_bounded_victims_conserved():
    sc = small({"carrier": 2, "observer": 2}, victims=30, duration_s=120.0)
    w = build_world(sc, 1)
    last = 0
    for _ in range(1200):
        step(w)
        assert w.victims_remaining + w.rescued_total + w.in_transit() == 30
        assert w.rescued_total >= last
        last = w.rescued_total
        for r in w.robots:
            r.check()
    assert w.rescued_total == 30


def test_spacing_invariant_outside_station_zones():
    sc = shipped_scenarios()[0].with_changes(duration_s=60.0)
    w = build_world(sc, 2)
    for _ in range(600):
        step(w)
        free = [r for r in w.robots if not w.geometry.in_zone(r.position)]
        for a, b in itertools.combinations(free, 2):
            if a.layer == b.layer:
                assert math.dist(a.position, b.position) >= w.safety_radius - 1e-9


def test_one_intent_action_per_tick():
    w = build_world(shipped_scenarios()[3].with_changes(duration_s=40.0), 0)
    for _ in range(400):
        step(w)
        for b in w.boards:
            assert sum(k in INTENT_ACTIONS for k in b.executed) <= 1


def test_unknown_obstacles_cost_energy_and_time():
    sc = small({"carrier": 1}, duration_s=60.0)
    w = build_world(sc, 0)
    w.obstacles = [((5.0, 1.0), 1.0)]
    tr = []
    w.trace = tr
    for _ in range(200):
        step(w)
    r = w.robots[0]
    assert r.tackles == 1
    assert any(" tackle robot=0 " in line for line in tr)
    free = build_world(sc, 0)
    free.obstacles = []
    for _ in range(200):
        step(free)
    def travel(rob):
        return rob.per_step_energy * rob.distance / sc.energy_step
    assert r.energy_spent - travel(r) == pytest.approx(4.0)
    assert free.robots[0].energy_spent == pytest.approx(travel(free.robots[0]))
    assert r.position[0] < free.robots[0].position[0]


def test_trace_format():
    tr = []
    run_trial(shipped_scenarios()[1].with_changes(duration_s=20.0), 0, trace=tr)
    kinds = {line.split()[2] for line in tr}
    assert {"move", "unload", "rescue"} <= kinds
    first = tr[0].split()
    assert first[0].isdigit() and first[1].startswith("t=") and first[3].startswith("robot=")


def test_geometry_routes():
    g = Geometry((0.0, 0.0), (20.0, 0.0), (-5.0, 0.0), 1.0, 1.5)
    assert g.outbound() == ([(0.0, 1.0), (20.0, 1.0)], (20.0, 0.0))
    assert g.inbound() == ([(20.0, -1.0), (0.0, -1.0)], (0.0, 0.0))
    assert g.to_charger((10.0, 1.0))[0] == [(10.0, -1.0), (0.0, -1.0), (-5.0, 0.0)]
    assert g.to_charger((-1.0, 1.0))[0] == [(-5.0, 0.0)]
    assert g.sidestep((0.0, 0.0), (1.0, 0.0), 0.5) == (0.0, -0.5)


def test_step_rejects_other_dt():
    w = build_world(small({"carrier": 1}), 0)
    with pytest.raises(ValueError):
        step(w, 0.5)
    with pytest.raises(ValueError):
        step(w, 0.0)


# -- poisson ----------------------------------------------------------------

def test_sampler():
    rng = np.random.default_rng(0)
    assert sample_encounters(0.0, rng) == 0
    assert isinstance(sample_encounters(3.0, rng), int)
    assert (sample_encounters_batch(0.0, 10, rng) == 0).all()
    with pytest.raises(ValueError):
        sample_encounters(-1.0, rng)
    with pytest.raises(ValueError):
        sample_encounters(math.inf, rng)
    x = sample_encounters_batch(2.0, 1_000_000, np.random.default_rng(1))
    assert abs(x.mean() - 2.0) / 2.0 < 0.01
    assert abs(x.var(ddof=1) - 2.0) / 2.0 < 0.02
    a = sample_encounters_batch(2.0, 100, np.random.default_rng(5))
    b = sample_encounters_batch(2.0, 100, np.random.default_rng(5))
    assert (a == b).all()
