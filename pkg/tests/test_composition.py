"""
并行组合、配置代数、映射加法与交错语义测试
"""
import pytest
from hypothesis import assume, given, settings, strategies as st

from splv.core.composition import (
    add_mappings, compose, compose_all, compose_configs, decompose_config, fold_mappings, handshake_product,
    project_word, schedule_constraints, shuffle_languages, shuffle_words,
)
from splv.core.conformance import compute_conformance, mapping_from_pairs
from splv.core.containment import contains
from splv.core.machine import FsmvMachine, Transition, bounded_language, check_valid, project, valid_configs
from splv.lang.parser import parse_predicate
from splv.lang.predicate import TRUE, eq
from splv.lang.variables import Configuration, VarDecl, scope_index
from splv.utils.errors import CapacityError, CompositionError
from splv.workbench.manifest import instantiate, load_manifest
from splv.workbench.model_format import load_model
from tests.conftest import ecpl
from tests.model_strategies import machines, predicates

ECPL_RHO = "(DU.Status = Enable <=> DL.Status = Enable) && DL.Transmission = DU.Transmission"


def door_requirements():
    dl = load_model(ecpl("dl_req.fsmv")).qualified("DL")
    du = load_model(ecpl("du_req.fsmv")).qualified("DU")
    rho = parse_predicate(ECPL_RHO, scope_index(dl.variables + du.variables))
    return dl, du, rho


def feature_mappings(spl):
    instance = instantiate(load_manifest(ecpl(spl)))
    mappings = [compute_conformance(p.design, p.requirement, feature=p.name).qualified(p.name)
                for p in instance.features]
    return instance, mappings


def test_door_requirements_handshake_on_lock_and_unlock():
    dl, du, rho = door_requirements()
    both = compose(dl, du, rho)
    assert set(both.events) == set(dl.events) | set(du.events)
    assert len(both.events) == len(dl.events) + len(du.events) - 2
    assert len(valid_configs(both)) == 6
    pi = {"DL.Status": "Enable", "DL.Transmission": "Auto", "DL.UserPref": "Park",
          "DU.Status": "Enable", "DU.Transmission": "Auto", "DU.UserPref": "Key"}
    variant = project(both, pi)
    assert variant.accepts(("AllDoorsClosed", "ShiftOutOfPark", "Lock", "IgnitionOff", "Unlock"))
    assert not variant.accepts(("AllDoorsClosed", "ShiftOutOfPark", "Lock", "Unlock"))


def test_compose_configs_examples():
    dl, du, rho = door_requirements()
    enabled = Configuration({"DL.Status": "Enable", "DL.Transmission": "Auto", "DL.UserPref": "Speed"})
    du_enabled = Configuration({"DU.Status": "Enable", "DU.Transmission": "Auto", "DU.UserPref": "Key"})
    du_disabled = Configuration({"DU.Status": "Disable", "DU.Transmission": "Auto", "DU.UserPref": "Park"})
    both = compose_configs(enabled, du_enabled, rho)
    assert both is not None and len(both) == 6
    assert compose_configs(enabled, du_disabled, rho) is None
    assert compose_configs(enabled, du_disabled) == enabled.merge(du_disabled)
    assert decompose_config(both, (dl.variables, du.variables)) == (enabled, du_enabled)


def test_compose_errors(toggle):
    with pytest.raises(CompositionError):
        compose(toggle, toggle)
    other = toggle.qualified("B")
    with pytest.raises(CompositionError):
        compose(toggle, other, eq("missing", "on"))
    with pytest.raises(CompositionError):
        compose(toggle, other, parse_predicate("mode = on && B.mode = on && mode = off"))
    with pytest.raises(CompositionError):
        compose_all([])


def test_contradictory_shared_guards_do_not_synchronize():
    x, y = VarDecl("x", ("a", "b")), VarDecl("y", ("a", "b"))
    m1 = FsmvMachine("M1", ("s", "t"), "s", ("e",), (x,), (Transition("s", "e", "t", eq("x", "a")),))
    m2 = FsmvMachine("M2", ("u", "v"), "u", ("e",), (y,), (Transition("u", "e", "v", eq("y", "a")),))
    assert len(compose(m1, m2).transitions) == 1
    linked = compose(m1, m2, parse_predicate("x = a => y = b"))
    assert linked.transitions == ()
    assert linked.states == ("(s,u)",)


def test_schedule_constraints_places_each_constraint_at_first_cover():
    c1 = parse_predicate("A.x = a")
    c2 = parse_predicate("A.x = a => C.z = b")
    steps = schedule_constraints([["A.x"], ["B.y"], ["C.z"]], [c1, c2])
    assert steps == [[c1], [], [c2]]


def test_compose_all_applies_first_component_constraints(toggle):
    only = compose_all([toggle], [eq("mode", "on")], name="Solo")
    assert only.name == "Solo"
    assert len(valid_configs(only)) == 1


def test_shuffle_word_membership():
    words = ["abcf", "adfe", "dcf"]
    alphabets = [set(w) for w in words]
    shuffled = shuffle_words(words, alphabets)
    assert tuple("abdcfe") in shuffled
    assert tuple("aebcfd") not in shuffled
    assert all(project_word(w, sigma) == tuple(u) for w in shuffled for u, sigma in zip(words, alphabets))


def test_shuffle_of_languages():
    result = shuffle_languages([["abcf", "abbf"], ["adfe"]], [set("abcf"), set("adfe")])
    assert result == {tuple(w) for w in ("abcdfe", "adbcfe", "abdcfe", "abbdfe", "abdbfe", "adbbfe")}


def test_shuffle_rejects_word_outside_alphabet():
    with pytest.raises(ValueError):
        shuffle_words(["ab"], [{"a"}])
    with pytest.raises(ValueError):
        shuffle_words(["ab"], [])


def test_add_mappings_of_singletons():
    x, y = VarDecl("A.x", ("a", "b")), VarDecl("B.y", ("a", "b"))
    cx = [Configuration({"A.x": v}) for v in ("a", "b")]
    cy = [Configuration({"B.y": v}) for v in ("a", "b")]
    phi1 = mapping_from_pairs("A", (x,), (x,), cx, cx, zip(cx, cx))
    phi2 = mapping_from_pairs("B", (y,), (y,), cy, cy, zip(cy, cy))
    total = add_mappings(phi1, phi2)
    assert total.conforms and len(total.entries) == 4
    assert all(len(image) == 1 for _, image in total.entries)
    linked = add_mappings(phi1, phi2, rho_r=parse_predicate("A.x = B.y", scope_index((x, y))))
    assert linked.failing == ({"A.x": "a", "B.y": "b"}, {"A.x": "b", "B.y": "a"})
    with pytest.raises(CapacityError):
        add_mappings(phi1, phi2, budget=3)


def test_unlinked_door_features_fail_at_mixed_disable():
    _, mappings = feature_mappings("dl_du.spl")
    _, _, rho = door_requirements()
    total = fold_mappings(mappings, req_constraints=[rho])
    assert len(total.failing) == 9
    assert total.failing[0] == {"DL.Cp1": "Auto", "DL.Cp2": "Speed",
                                "DU.Cp3": "Moff", "DU.Cp4": "Poff", "DU.Cp5": "All"}


def test_shared_disable_calibration_restores_conformance():
    instance, mappings = feature_mappings("dl_du_fixed.spl")
    total = fold_mappings(mappings, instance.design_constraints, instance.requirement_constraints)
    assert total.conforms
    assert len(total.entries) == 4 * 7 - 9


def test_composed_designs_refine_composed_requirements_under_the_mapping():
    instance, mappings = feature_mappings("dl_du_fixed.spl")
    total = fold_mappings(mappings, instance.design_constraints, instance.requirement_constraints)
    designs = [p.design.qualified(p.name) for p in instance.features]
    requirements = [p.requirement.qualified(p.name) for p in instance.features]
    des = compose_all(designs, instance.design_constraints)
    req = compose_all(requirements, instance.requirement_constraints)
    for pi_d, image in total.entries:
        for pi_r in image:
            assert bounded_language(project(des, pi_d), 6) <= bounded_language(project(req, pi_r), 6)


@settings(max_examples=60, deadline=None)
@given(machines("M1", "p", ("a", "b", "c"), max_vars=3, max_values=2),
       machines("M2", "q", ("b", "c", "d"), max_vars=3, max_values=2))
def test_projection_commutes_with_composition(m1, m2):
    both = compose(m1, m2)
    for pi in valid_configs(both):
        pi1, pi2 = decompose_config(pi, (m1.variables, m2.variables))
        check_valid(m1, pi1)
        check_valid(m2, pi2)
        product = handshake_product(project(m1, pi1), project(m2, pi2))
        assert bounded_language(project(both, pi), 6) == bounded_language(product, 6)


@settings(max_examples=100, deadline=None)
@given(machines("M1", "p", max_vars=3), machines("M2", "q", max_vars=3), st.data())
def test_decomposed_composites_add_back_up(m1, m2, data):
    rho = data.draw(predicates(m1.variables + m2.variables, depth=2))
    try:
        both = compose(m1, m2, rho)
    except CompositionError:
        assume(False)
    for pi in valid_configs(both):
        pi1, pi2 = decompose_config(pi, (m1.variables, m2.variables))
        assert compose_configs(pi1, pi2, both.global_predicate) == pi


@settings(max_examples=60, deadline=None)
@given(machines("M1", "p", ("a", "b")), machines("M2", "q", ("b", "c")))
def test_composition_is_commutative_up_to_language(m1, m2):
    left, right = compose(m1, m2), compose(m2, m1)
    for pi in valid_configs(left):
        assert contains(project(left, pi), project(right, pi)).holds
        assert contains(project(right, pi), project(left, pi)).holds


@settings(max_examples=40, deadline=None)
@given(machines("M1", "p", ("a", "b"), max_states=3, max_vars=1),
       machines("M2", "q", ("c", "d"), max_states=3, max_vars=1))
def test_disjoint_alphabets_interleave(m1, m2):
    both = compose(m1, m2)
    for pi in valid_configs(both):
        pi1, pi2 = decompose_config(pi, (m1.variables, m2.variables))
        k = 3
        expected = {w for w in shuffle_languages([bounded_language(project(m1, pi1), k),
                                                  bounded_language(project(m2, pi2), k)],
                                                 [m1.events, m2.events]) if len(w) <= k}
        assert bounded_language(project(both, pi), k) == expected


def test_unit_rho_keeps_every_composite(toggle):
    other = toggle.qualified("B")
    assert len(valid_configs(compose(toggle, other, TRUE))) == 4
