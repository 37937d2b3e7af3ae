import math

import pytest
from hypothesis import given, strategies as st

from needsrescue import defaults
from needsrescue.core import (CapabilityProfile, MissionSpec, RobotClass, TeamComposition,
                              aggregate_capability, check_dominance, default_profile,
                              default_profiles)


def test_default_profiles_match_reference_values():
    assert default_profile(RobotClass.CARRIER).cap == 8
    assert default_profile(RobotClass.OBSERVER).cap == 1
    assert math.isinf(default_profile(RobotClass.OBSERVER).sen)
    assert default_profile("carrier").v * 10 == default_profile("observer").v


def test_default_profiles_are_consistent():
    assert check_dominance(default_profiles()) == []


@pytest.mark.parametrize("cls,field,value,relation", [
    ("carrier", "cap", 2.0, "capacity"),
    ("supplier", "res", 3.0, "resources"),
    ("observer", "v", 0.5, "velocity"),
    ("observer", "com", 20.0, "communication"),
    ("supplier", "sen", 100.0, "sensing"),
    ("supplier", "eng", 100.0, "energy"),
])
def test_single_violation_reported_per_relation(cls, field, value, relation):
    profiles = default_profiles().replace(cls, **{field: value})
    got = check_dominance(profiles)
    assert [v.relation for v in got] == [relation]


def test_two_violations_in_one_relation_give_one_entry():
    # cap_c < 4 cap_s and cap_s == cap_o: both capacity clauses fail
    profiles = default_profiles().replace("carrier", cap=1.0).replace("supplier", cap=1.0)
    got = check_dominance(profiles)
    assert [v.relation for v in got] == ["capacity"]
    assert ";" in got[0].detail


def test_default_factor_ten_is_unsatisfiable_for_capacity():
    # cap_c = 8 >= 10 cap_s and cap_s > cap_o = 1 cannot both hold
    got = check_dominance(default_profiles(), factor=10.0)
    assert "capacity" in [v.relation for v in got]


@pytest.mark.parametrize("kwargs", [
    dict(v=0, com=1, sen=1, eng=1, res=1, cap=1),
    dict(v=1, com=-1, sen=1, eng=1, res=1, cap=1),
    dict(v=1, com=1, sen=0, eng=1, res=1, cap=1),
    dict(v=1, com=1, sen=1, eng=101, res=1, cap=1),
    dict(v=math.inf, com=1, sen=1, eng=1, res=1, cap=1),
])
def test_profile_validation(kwargs):
    with pytest.raises(ValueError):
        CapabilityProfile(**kwargs)


def test_composition_basics():
    c = TeamComposition(3, 0, 3)
    assert c.size == 6 and not c.is_homogeneous and str(c) == "(3,0,3)"
    assert TeamComposition(6, 0, 0).is_homogeneous
    assert list(c.members()) == [(RobotClass.CARRIER, 3), (RobotClass.OBSERVER, 3)]
    with pytest.raises(ValueError):
        TeamComposition(-1, 0, 0)
    with pytest.raises(ValueError):
        TeamComposition(True, 0, 0)
    with pytest.raises(ValueError):
        aggregate_capability(TeamComposition(), default_profiles())


def test_mission_validation():
    MissionSpec(t_n=1, l=1)
    for bad in (dict(t_n=0, l=1), dict(t_n=1, l=0), dict(t_n=1, l=1, n=-1),
                dict(t_n=1, l=1, c=0), dict(t_n=1, l=1, e_c=-1),
                dict(t_n=1, l=1, requirement=(-1,))):
        with pytest.raises(ValueError):
            MissionSpec(**bad)


def test_aggregate_takes_slowest_member():
    agg = aggregate_capability(TeamComposition(1, 0, 2), default_profiles())
    assert agg.min_v == 1.0
    assert agg.total_cap == 8 + 2 * 1
    assert math.isinf(agg.total_sen)


counts = st.integers(min_value=0, max_value=20)
comps = st.builds(TeamComposition, counts, counts, counts).filter(lambda c: c.size > 0)


@given(comps, comps)
def test_aggregate_is_linear(a, b):
    p = default_profiles()
    ga, gb, gab = (aggregate_capability(c, p) for c in (a, b, a + b))
    assert gab.total_cap == pytest.approx(ga.total_cap + gb.total_cap)
    assert gab.total_res == pytest.approx(ga.total_res + gb.total_res)
    if math.isfinite(gab.total_sen):
        assert gab.total_sen == pytest.approx(ga.total_sen + gb.total_sen)
    assert gab.min_v == min(ga.min_v, gb.min_v)


def test_defaults_module_constants():
    assert defaults.DURATION_S == 300
    assert defaults.ROBOT_CLASSES["carrier"]["per_step_energy"] == 0.045
    assert defaults.ROBOT_CLASSES["observer"]["per_step_energy"] == 0.015
