"""
验证引擎测试 - 逐特性检查、判定模式与交叉验证
"""
import asyncio

import pytest

from splv.core.conformance import compute_conformance
from splv.core.engine import (
    FeaturePair, SplInstance, SplOutcome, VerificationEngine, check_agreement, psi_for, shared_events,
)
from splv.lang.predicate import conj, qualify, satisfying_assignments
from splv.qbf.cegar import solve_forall_exists
from splv.utils.config_loader import Settings
from splv.utils.errors import InternalError
from splv.workbench.generator import GeneratorOptions, generate_spl
from splv.workbench.manifest import instantiate, load_manifest
from splv.workbench.model_format import load_model
from tests.conftest import ecpl


def door_lock(design="dl_des_bug.fsmv"):
    pair = FeaturePair("DL", load_model(ecpl("dl_req.fsmv")), load_model(ecpl(design)))
    return SplInstance("DlOnly", (pair,))


def run_spl(settings, instance, **kwargs):
    async def go():
        async with VerificationEngine(settings) as engine:
            return await engine.check_spl(instance, **kwargs)

    return asyncio.run(go())


def test_failing_feature_stops_before_the_spl_decision(settings):
    outcomes, result = run_spl(settings, door_lock())
    assert [o.name for o in outcomes] == ["DL"]
    assert result.mode == "feature"
    assert not result.conforms
    assert dict(result.witness.items()) == {"DL.Cp1": "Auto", "DL.Cp2": "Poff"}


@pytest.mark.parametrize("mode", ["qbf", "enumerate"])
def test_keep_going_runs_the_requested_mode(settings, mode):
    _, result = run_spl(settings, door_lock(), mode=mode, keep_going=True)
    assert result.mode == mode
    assert not result.conforms
    assert dict(result.witness.items()) == {"DL.Cp1": "Auto", "DL.Cp2": "Poff"}


def test_corrected_door_lock_conforms_in_every_mode(settings):
    _, result = run_spl(settings, door_lock("dl_des.fsmv"), cross_check=True)
    assert result.conforms
    assert result.witness is None
    assert result.agreed == {"qbf": True, "enumerate": True, "monolithic": True}


def test_feature_outcomes_keep_input_order(settings):
    instance = generate_spl(GeneratorOptions(features=5, seed=3, max_states=4))

    async def go():
        async with VerificationEngine(settings) as engine:
            return await engine.check_features(instance.features)

    outcomes = asyncio.run(go())
    assert [o.name for o in outcomes] == ["F1", "F2", "F3", "F4", "F5"]
    assert all(o.conforms for o in outcomes)


def test_engine_must_be_initialized(settings):
    engine = VerificationEngine(settings)
    with pytest.raises(RuntimeError):
        asyncio.run(engine.decide(door_lock(), [], "qbf"))


def test_unknown_mode(settings):
    with pytest.raises(ValueError):
        run_spl(settings, door_lock("dl_des.fsmv"), mode="guess")


def test_cross_check_skips_modes_over_capacity(tmp_path):
    settings = Settings(data_dir=str(tmp_path), monolithic_pair_budget=0)
    _, result = run_spl(settings, door_lock("dl_des.fsmv"), cross_check=True)
    assert result.agreed == {"qbf": True, "enumerate": True}


def test_disagreement_is_an_internal_error(settings, monkeypatch):
    monkeypatch.setattr("splv.core.engine.decide_enumerate",
                        lambda instance, mappings, s: SplOutcome("enumerate", False))
    with pytest.raises(InternalError):
        run_spl(settings, door_lock("dl_des.fsmv"), cross_check=True)



def test_shared_events_between_features():
    assert shared_events(door_lock()) == frozenset()
    assert shared_events(instantiate(load_manifest(ecpl("dl_du.spl")))) == {"Lock", "Unlock"}


def test_agreement_tolerates_masking_only_with_shared_events():
    linked = instantiate(load_manifest(ecpl("dl_du.spl")))
    check_agreement(linked, {"qbf": False, "enumerate": False, "monolithic": True})
    with pytest.raises(InternalError):
        check_agreement(door_lock(), {"qbf": False, "enumerate": False, "monolithic": True})
    with pytest.raises(InternalError):
        check_agreement(linked, {"qbf": True, "enumerate": True, "monolithic": False})
    with pytest.raises(InternalError):
        check_agreement(linked, {"qbf": True, "enumerate": False})


def test_handshake_events_do_not_break_cross_check(settings):
    options = GeneratorOptions(features=2, seed=58, max_states=4, variables=1, domain_size=2, shared_events=True,
                               random_constraints=True, link_probability=0.7)
    _, result = run_spl(settings, generate_spl(options), cross_check=True)
    assert result.agreed["qbf"] == result.agreed["enumerate"]
    assert result.agreed.get("monolithic", True) or not result.agreed["qbf"]

@pytest.mark.parametrize("seed", range(8))
def test_modes_agree_on_generated_spls(settings, seed):
    options = GeneratorOptions(features=2, seed=seed, max_states=4, variables=1 + seed % 2,
                               random_constraints=seed % 3 == 0, link_probability=0.7)
    _, result = run_spl(settings, generate_spl(options), cross_check=True)
    assert set(result.agreed) == {"qbf", "enumerate", "monolithic"}
    assert len(set(result.agreed.values())) == 1


@pytest.mark.parametrize("seed", range(4))
def test_qbf_and_enumerate_agree_with_seeded_bugs(settings, seed):
    options = GeneratorOptions(features=3, seed=seed, max_states=5, inject_bugs=0.5)
    outcomes, result = run_spl(settings, generate_spl(options), keep_going=True, cross_check=True)
    assert len(set(result.agreed.values())) == 1
    if any(not o.conforms for o in outcomes):
        assert "monolithic" not in result.agreed


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_modes_agree_on_seeded_spls(settings, seed):
    features = 2 + seed % 3
    options = GeneratorOptions(features=features, seed=seed, max_states=5 if features < 4 else 4,
                               variables=2 if features == 2 else 1, domain_size=3 if features < 4 else 2,
                               random_constraints=seed % 2 == 0, link_probability=0.6)
    _, result = run_spl(settings, generate_spl(options), cross_check=True)
    assert set(result.agreed) == {"qbf", "enumerate", "monolithic"}
    assert len(set(result.agreed.values())) == 1


def requirement_composites(instance):
    scope = [d.qualified(p.name) for p in instance.features for d in p.requirement.variables]
    rho = conj(*(qualify(p.requirement.global_predicate, p.name) for p in instance.features),
               *instance.requirement_constraints)
    return len(satisfying_assignments(rho, scope))


@pytest.mark.parametrize("seed", range(12))
def test_refinements_bounded_by_requirement_composites(seed):
    options = GeneratorOptions(features=3, seed=seed, max_states=4, random_constraints=seed % 2 == 0,
                               inject_bugs=0.3 if seed % 3 == 0 else 0.0, link_probability=0.6)
    instance = generate_spl(options)
    mappings = [compute_conformance(p.design, p.requirement, feature=p.name) for p in instance.features]
    verdict = solve_forall_exists(psi_for(instance, mappings), split=False)
    assert verdict.refinements <= requirement_composites(instance)


@pytest.mark.parametrize("manifest", ["dl_du.spl", "dl_du_fixed.spl"])
def test_corpus_refinements_bounded_by_requirement_composites(manifest):
    instance = instantiate(load_manifest(ecpl(manifest)))
    mappings = [compute_conformance(p.design, p.requirement, feature=p.name) for p in instance.features]
    verdict = solve_forall_exists(psi_for(instance, mappings), split=False)
    assert verdict.refinements <= requirement_composites(instance)
