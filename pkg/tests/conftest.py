"""
测试公共夹具 - 语料路径、设置与小型模型
"""
import os

import pytest

from splv.core.machine import FsmvMachine, Transition
from splv.lang.predicate import eq
from splv.lang.variables import VarDecl
from splv.utils.config_loader import Settings

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ECPL_DIR = os.path.join(ROOT, "corpus", "ecpl")
BSPL_DIR = os.path.join(ROOT, "corpus", "bspl")
GOLDEN_DIR = os.path.join(ROOT, "tests", "golden")


def ecpl(name: str) -> str:
    return os.path.join(ECPL_DIR, name)


def bspl(name: str) -> str:
    return os.path.join(BSPL_DIR, name)


def golden(name: str) -> str:
    with open(os.path.join(GOLDEN_DIR, name), "r", encoding="utf-8") as f:
        return f.read()


@pytest.fixture
def settings(tmp_path) -> Settings:
    return Settings(data_dir=str(tmp_path / "data"), jobs=2)


@pytest.fixture
def toggle() -> FsmvMachine:
    """两状态开关: mode = on 时才能打开"""
    return FsmvMachine(
        name="Toggle",
        states=("Off", "On"),
        initial="Off",
        events=("press", "release"),
        variables=(VarDecl("mode", ("on", "off")),),
        transitions=(
            Transition("Off", "press", "On", eq("mode", "on")),
            Transition("On", "release", "Off"),
        ),
    )
