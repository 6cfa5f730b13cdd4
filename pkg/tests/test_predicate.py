"""
谓词求值、一致性与枚举测试
"""
import pytest
from hypothesis import given, settings, strategies as st

from splv.lang.parser import parse_predicate
from splv.lang.predicate import (
    FALSE, TRUE, Implies, conj, disj, eq, eq_var, evaluate, is_consistent, neg, neq, qualify, satisfying_assignments,
    to_text, variables,
)
from splv.lang.variables import Configuration, VarDecl, all_assignments, scope_index
from splv.utils.errors import CapacityError, ScopeError
from tests.model_strategies import predicates, scopes

DOOR_LOCK = [
    VarDecl("Status", ("Enable", "Disable")),
    VarDecl("Transmission", ("Auto", "Manual")),
    VarDecl("UserPref", ("Speed", "Park")),
]
MANUAL_SPEED = Implies(eq("Transmission", "Manual"), eq("UserPref", "Speed"))


def test_implication_with_false_antecedent():
    assert evaluate(MANUAL_SPEED, {"Transmission": "Auto", "UserPref": "Park"})


def test_implication_with_true_antecedent_and_false_consequent():
    assert not evaluate(MANUAL_SPEED, {"Transmission": "Manual", "UserPref": "Park"})


def test_door_lock_rho_under_enable_manual_speed():
    assert evaluate(MANUAL_SPEED, {"Status": "Enable", "Transmission": "Manual", "UserPref": "Speed"})


def test_evaluate_unbound_variable():
    with pytest.raises(ScopeError):
        evaluate(eq("x", "a"), {"y": "a"})


@pytest.mark.parametrize("p", [conj(eq("x", "a"), eq("y", "b")), disj(eq("x", "b"), eq("y", "b"))])
def test_evaluate_unbound_variable_behind_a_decided_operand(p):
    with pytest.raises(ScopeError):
        evaluate(p, {"x": "b"})


def test_contradiction_is_inconsistent():
    scope = [VarDecl("x", ("a", "b"))]
    p = conj(eq("x", "a"), neq("x", "a"))
    assert not is_consistent(p, scope)
    assert not is_consistent(p, scope, method="sat")
    assert is_consistent(TRUE, scope)
    assert not is_consistent(FALSE, [])


def test_door_lock_rho_has_six_of_eight_assignments():
    assert is_consistent(MANUAL_SPEED, DOOR_LOCK)
    assert len(satisfying_assignments(MANUAL_SPEED, DOOR_LOCK)) == 6


def test_satisfying_assignments_examples():
    scope = [VarDecl("x", ("a", "b"))]
    assert satisfying_assignments(eq("x", "a"), scope) == [Configuration([("x", "a")])]
    assert satisfying_assignments(TRUE, []) == [Configuration()]
    design = [VarDecl("Cp1", ("Auto", "Moff")), VarDecl("Cp2", ("Speed", "Poff"))]
    assert len(satisfying_assignments(TRUE, design)) == 4


def test_satisfying_assignments_budget():
    scope = [VarDecl(f"v{i}", ("a", "b", "c")) for i in range(4)]
    with pytest.raises(CapacityError):
        satisfying_assignments(TRUE, scope, budget=80)


def test_variable_comparison_requires_equal_domains():
    scope = [VarDecl("x", ("a", "b")), VarDecl("y", ("a", "c"))]
    with pytest.raises(ScopeError):
        satisfying_assignments(eq_var("x", "y"), scope)


def test_out_of_domain_constant_is_a_scope_error():
    with pytest.raises(ScopeError):
        is_consistent(eq("x", "z"), [VarDecl("x", ("a", "b"))])


def test_sat_path_handles_large_scope():
    scope = [VarDecl(f"v{i}", ("a", "b", "c")) for i in range(14)]
    chain = conj(*(Implies(eq(f"v{i}", "a"), eq(f"v{i + 1}", "a")) for i in range(13)))
    p = conj(chain, eq("v0", "a"), neq("v13", "a"))
    assert not is_consistent(p, scope)
    assert is_consistent(conj(chain, eq("v0", "a")), scope)


def test_qualify_renames_every_variable():
    p = conj(eq("x", "a"), eq_var("x", "y"))
    assert variables(qualify(p, "F")) == {"F.x", "F.y"}


def test_unknown_consistency_method():
    scope = [VarDecl(f"v{i}", ("a", "b")) for i in range(3)]
    with pytest.raises(ValueError):
        is_consistent(eq("v0", "a"), scope, method="guess", enum_limit=1)


@given(st.data())
def test_implies_is_not_or(data):
    scope = data.draw(scopes(min_vars=1))
    a = data.draw(predicates(scope, depth=2))
    b = data.draw(predicates(scope, depth=2))
    for env in all_assignments(scope):
        assert evaluate(Implies(a, b), env) == evaluate(disj(neg(a), b), env)


@given(st.data())
def test_consistency_matches_enumeration(data):
    scope = data.draw(scopes())
    p = data.draw(predicates(scope))
    assert is_consistent(p, scope) == bool(satisfying_assignments(p, scope))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_sat_consistency_agrees_with_enumeration(data):
    scope = data.draw(scopes(max_vars=4, max_values=4))
    p = data.draw(predicates(scope, depth=3))
    assert is_consistent(p, scope, method="sat") == is_consistent(p, scope, method="enumerate")


@given(st.data())
def test_conjunction_intersects_solutions(data):
    scope = data.draw(scopes())
    p = data.draw(predicates(scope))
    q = data.draw(predicates(scope))
    both = set(satisfying_assignments(conj(p, q), scope))
    assert both == set(satisfying_assignments(p, scope)) & set(satisfying_assignments(q, scope))


@given(st.data())
def test_printed_predicate_reparses_to_same_tree(data):
    scope = data.draw(scopes(min_vars=1))
    p = data.draw(predicates(scope))
    assert parse_predicate(to_text(p), scope_index(scope)) == p
