"""
一致性映射 Φ 测试
"""
from concurrent.futures import ThreadPoolExecutor

from hypothesis import given, settings

from splv.core.conformance import compute_conformance, mapping_from_pairs
from splv.core.containment import contains
from splv.core.machine import project, valid_configs
from splv.lang.variables import Configuration
from splv.workbench.model_format import load_model
from tests.conftest import ecpl
from tests.model_strategies import machines

R_AUTO_SPEED = {"Status": "Enable", "Transmission": "Auto", "UserPref": "Speed"}
R_AUTO_PARK = {"Status": "Enable", "Transmission": "Auto", "UserPref": "Park"}
R_MANUAL_SPEED = {"Status": "Enable", "Transmission": "Manual", "UserPref": "Speed"}
R_DISABLED = {"Status": "Disable", "Transmission": "Auto", "UserPref": "Park"}


def door_lock(design="dl_des.fsmv"):
    return load_model(ecpl(design)), load_model(ecpl("dl_req.fsmv"))


def test_corrected_door_lock_conforms():
    des, req = door_lock()
    phi = compute_conformance(des, req, feature="DL")
    assert phi.conforms
    assert phi.failing == ()
    assert phi.pair_count == 6
    assert phi.image(Configuration({"Cp1": "Auto", "Cp2": "Speed"})) == (R_AUTO_SPEED, R_MANUAL_SPEED)
    assert phi.image(Configuration({"Cp1": "Auto", "Cp2": "Poff"})) == (R_AUTO_PARK,)
    assert phi.image(Configuration({"Cp1": "Moff", "Cp2": "Speed"})) == (R_AUTO_SPEED, R_MANUAL_SPEED)
    assert phi.image(Configuration({"Cp1": "Moff", "Cp2": "Poff"})) == (R_DISABLED,)


def test_seeded_bug_leaves_one_design_configuration_unmatched():
    des, req = door_lock("dl_des_bug.fsmv")
    phi = compute_conformance(des, req, feature="DL")
    assert not phi.conforms
    assert phi.failing == ({"Cp1": "Auto", "Cp2": "Poff"},)
    word = phi.counterexample(phi.failing[0])
    assert word == ("AllDoorsClosed", "ShiftOutOfPark")
    assert phi.counterexample(Configuration({"Cp1": "Auto", "Cp2": "Speed"})) is None


def test_first_match_mode_keeps_one_configuration_per_row():
    des, req = door_lock()
    phi = compute_conformance(des, req, maximal=False)
    assert phi.conforms
    assert all(len(image) == 1 for _, image in phi.entries)
    assert phi.image(Configuration({"Cp1": "Auto", "Cp2": "Speed"})) == (R_AUTO_SPEED,)


def test_table_format():
    des, req = door_lock()
    table = compute_conformance(des, req, feature="DL").to_table().splitlines()
    assert table[0] == "# mapping DL: 4 design configurations, 6 pairs"
    assert table[2] == "Cp1=Auto,Cp2=Poff -> {Status=Enable,Transmission=Auto,UserPref=Park}"
    assert len(table) == 5


def test_qualified_mapping():
    des, req = door_lock()
    phi = compute_conformance(des, req, feature="DL").qualified("DL")
    assert [d.name for d in phi.design_scope] == ["DL.Cp1", "DL.Cp2"]
    assert phi.image(Configuration({"DL.Cp1": "Moff", "DL.Cp2": "Poff"})) == (
        {"DL.Status": "Disable", "DL.Transmission": "Auto", "DL.UserPref": "Park"},
    )


def test_executor_gives_identical_entries():
    des, req = door_lock("dl_des_bug.fsmv")
    with ThreadPoolExecutor(max_workers=3) as pool:
        parallel = compute_conformance(des, req, executor=pool)
    assert parallel == compute_conformance(des, req)


def test_mapping_from_pairs_orders_images_by_enumeration():
    des, req = door_lock()
    dconfigs, rconfigs = valid_configs(des), valid_configs(req)
    phi = mapping_from_pairs("DL", des.variables, req.variables, dconfigs, rconfigs,
                             [(dconfigs[0], rconfigs[2]), (dconfigs[0], rconfigs[0])])
    assert phi.image(dconfigs[0]) == (rconfigs[0], rconfigs[2])
    assert phi.failing == tuple(dconfigs[1:])


@settings(max_examples=60, deadline=None)
@given(machines("D", "d"), machines("R", "r"))
def test_mapping_agrees_with_pairwise_containment(des, req):
    phi = compute_conformance(des, req)
    for pi_d, image in phi.entries:
        expected = tuple(pi_r for pi_r in valid_configs(req)
                         if contains(project(des, pi_d), project(req, pi_r)).holds)
        assert image == expected
        if not image:
            word = phi.counterexample(pi_d)
            assert project(des, pi_d).accepts(word)
            assert any(not project(req, pi_r).accepts(word) for pi_r in valid_configs(req))
