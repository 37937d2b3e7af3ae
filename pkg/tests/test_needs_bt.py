import pytest
from hypothesis import given, strategies as st

from needsrescue.needs_bt import (Action, Blackboard, Condition, NeedsTreeConfig, NodeStatus,
                                  Placeholder, Registry, Selector, Sequence, build_needs_tree,
                                  count_nodes, render_tree, tick, tick_tree)

S, F, R = NodeStatus.SUCCESS, NodeStatus.FAILURE, NodeStatus.RUNNING


def leaf_registry():
    return Registry(
        conditions={"yes": lambda b: True, "no": lambda b: False},
        actions={"ok": lambda b: S, "fail": lambda b: F, "run": lambda b: R},
    )


def test_node_status_has_three_variants():
    assert len(NodeStatus) == 3


def test_selector_semantics():
    b = Blackboard()
    assert tick(Selector("s", [Condition("no"), Condition("yes")]), b, leaf_registry()) is S
    assert tick(Selector("s", [Condition("no"), Action("fail")]), b, leaf_registry()) is F


def test_sequence_short_circuits_on_running():
    b = Blackboard()
    tree = Sequence("q", [Action("ok", "a"), Action("run", "b"), Action("ok", "c")])
    assert tick_tree(tree, b, leaf_registry()) is R
    assert b.ticked == ["ok", "run"]


def test_selector_short_circuit_skips_action():
    b = Blackboard()
    assert tick_tree(Selector("s", [Condition("yes"), Action("ok")]), b, leaf_registry()) is S
    assert b.executed == []


def test_unknown_leaf_fails_with_diagnostic():
    b = Blackboard()
    assert tick(Action("nope"), b, leaf_registry()) is F
    assert tick(Condition("nada"), b, leaf_registry()) is F
    assert b.diagnostics == ["unknown action 'nope'", "unknown condition 'nada'"]


def test_composites_need_children():
    with pytest.raises(ValueError):
        Selector("s", [])
    with pytest.raises(ValueError):
        Sequence("q", [])


def test_blackboard_check():
    Blackboard(energy=50, load=1, capacity=2).check()
    with pytest.raises(ValueError):
        Blackboard(energy=101).check()
    with pytest.raises(ValueError):
        Blackboard(load=3, capacity=2).check()


FULL = NeedsTreeConfig(perception="pe", safety=("c_sa", "a_sa"), basic=("c_bn", "a_bn"),
                       capability=("c_ca", "a_ca"), utility="u", plan="pl",
                       negotiation="ne", execution="ae")


def test_builder_rejects_missing_stage():
    with pytest.raises(ValueError, match="negotiation"):
        build_needs_tree(NeedsTreeConfig(perception="pe", safety=("a", "b"), basic=("a", "b"),
                                         capability=("a", "b"), utility="u", plan="p",
                                         execution="e"))
    with pytest.raises(ValueError):
        build_needs_tree(NeedsTreeConfig(perception="pe", safety=("a",), basic=("a", "b"),
                                         capability=("a", "b"), utility="u", plan="p",
                                         negotiation="n", execution="e"))


def test_tree_shape():
    tree = build_needs_tree(FULL)
    assert isinstance(tree, Sequence)
    kinds = [type(c).__name__ for c in tree.children]
    assert kinds == ["Action", "Selector", "Selector", "Selector", "Sequence", "Placeholder"]
    assert [c.name for c in tree.children[4].children] == ["U", "Pl", "Ne", "A&E"]
    assert count_nodes(tree) == 17
    text = render_tree(tree)
    assert text.splitlines()[0] == "[->] Needs"
    assert "[?] Sa" in text and "<placeholder> Learning" in text


def flag_registry():
    """Conditions read boolean flags; every action succeeds except the need actions (running)."""
    conds = {k: (lambda key: lambda b: b.memory[key])(k) for k in ("c_sa", "c_bn", "c_ca")}
    acts = {k: (lambda b: S) for k in ("pe", "u", "pl", "ne", "ae")}
    acts.update({k: (lambda b: R) for k in ("a_sa", "a_bn", "a_ca")})
    return Registry(conds, acts)


STAGE_OF = {"pe": 0, "c_sa": 1, "a_sa": 1, "c_bn": 2, "a_bn": 2, "c_ca": 3, "a_ca": 3,
            "u": 4, "pl": 4, "ne": 4, "ae": 4, "Learning": 5}


@given(st.booleans(), st.booleans(), st.booleans())
def test_preemption_ordering(sa, bn, ca):
    tree = build_needs_tree(FULL)
    b = Blackboard(memory={"c_sa": sa, "c_bn": bn, "c_ca": ca})
    status = tick_tree(tree, b, flag_registry())
    stages = [STAGE_OF[k] for k in b.ticked]
    assert stages == sorted(stages)
    first_unmet = next((i for i, ok in ((1, sa), (2, bn), (3, ca)) if not ok), None)
    if first_unmet is None:
        assert status is S
        assert b.executed == ["pe", "u", "pl", "ne", "ae"]
    else:
        assert status is R
        assert max(stages) == first_unmet
        assert b.executed[-1] == ["a_sa", "a_bn", "a_ca"][first_unmet - 1]
    assert len(b.ticked) <= count_nodes(tree)
    # deterministic
    b2 = Blackboard(memory=dict(b.memory))
    assert tick_tree(tree, b2, flag_registry()) is status and b2.ticked == b.ticked


def test_placeholder_always_succeeds():
    assert tick(Placeholder("x"), Blackboard(), Registry()) is S
