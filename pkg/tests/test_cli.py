"""
命令行测试 - 子命令、输出与退出码
"""
import os

import pytest

from splv.workbench.cli import run
from tests.conftest import ecpl


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    """每个测试在独立目录中运行，不读取外部配置"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SPLV_CONFIG", raising=False)
    monkeypatch.delenv("SPLV_ENUM_BUDGET", raising=False)
    return tmp_path


def test_check_feature_reports_counterexample(capsys):
    code = run(["check-feature", ecpl("dl_req.fsmv"), ecpl("dl_des_bug.fsmv"), "--name", "DL"])
    out = capsys.readouterr().out
    assert code == 1
    assert out.startswith("Report: DL (feature)")
    assert "counterexample Cp1=Auto,Cp2=Poff: AllDoorsClosed ShiftOutOfPark" in out


def test_check_feature_conforms_and_prints_mapping(capsys):
    code = run(["check-feature", ecpl("dl_req.fsmv"), ecpl("dl_des.fsmv"), "--name", "DL", "--mapping", "-"])
    out = capsys.readouterr().out
    assert code == 0
    assert "# mapping DL: 4 design configurations, 6 pairs" in out
    assert "counterexample" not in out


def test_check_feature_writes_promela_and_report(workdir):
    code = run(["check-feature", ecpl("dl_req.fsmv"), ecpl("dl_des.fsmv"), "--name", "DL",
                "--promela", "dl.pml", "--report", "out/dl.json"])
    assert code == 0
    assert "proctype" in (workdir / "dl.pml").read_text(encoding="utf-8")
    assert (workdir / "out" / "dl.json").exists()


def test_check_spl_witness_and_report_round_trip(capsys, workdir):
    code = run(["check-spl", ecpl("dl_du.spl"), "--report", "dldu.kv"])
    out = capsys.readouterr().out
    assert code == 1
    witness = [line for line in out.splitlines() if line.startswith("witness: ")]
    assert len(witness) == 1 and "DL.Cp1=" in witness[0]
    assert run(["report", "dldu.kv", "--format", "kv"]) == 0
    assert "report.name=DlDu" in capsys.readouterr().out


def test_check_spl_bug_stops_at_the_feature(capsys):
    assert run(["check-spl", ecpl("dl_bug.spl")]) == 1
    out = capsys.readouterr().out
    assert "SPL (feature)" in out
    assert "witness: DL.Cp1=Auto,DL.Cp2=Poff" in out


def test_check_spl_fixed_cross_check(capsys, workdir):
    code = run(["check-spl", ecpl("dl_du_fixed.spl"), "--cross-check", "--export-qbf", "psi.qcir",
                "--jobs", "1"])
    assert code == 0
    assert (workdir / "psi.qcir").read_text(encoding="utf-8").startswith("#QCIR-G14")
    assert "SPL (qbf)" in capsys.readouterr().out


def test_archive_and_list(capsys):
    assert run(["check-spl", ecpl("dl_du_fixed.spl"), "--mode", "enumerate", "--archive"]) == 0
    capsys.readouterr()
    assert run(["report", "--list"]) == 0
    assert capsys.readouterr().out.split() == ["DlDuFixed"]
    assert run(["report", "DlDuFixed", "--format", "json"]) == 0
    assert '"name": "DlDuFixed"' in capsys.readouterr().out


def test_gen_then_check(capsys, workdir):
    assert run(["gen", "3", "--seed", "4", "-o", "spl", "--states", "3:4", "--variables", "1"]) == 0
    path = capsys.readouterr().out.strip()
    assert path == os.path.join("spl", "Gen3s4.spl")
    assert (workdir / "spl" / "F1_req.fsmv").exists()
    assert run(["check-spl", path, "--cross-check"]) == 0


def test_export_single_feature(workdir):
    code = run(["export", ecpl("dl_req.fsmv"), ecpl("dl_des.fsmv"), "--name", "DL", "--promela", "dl.pml",
                "--qbf", "dl.qdimacs", "--mapping", "dl.map", "--normalize", "norm"])
    assert code == 0
    assert (workdir / "dl.qdimacs").read_text(encoding="utf-8").startswith("c splv forall-exists instance")
    assert (workdir / "dl.map").read_text(encoding="utf-8").startswith("# mapping DL:")
    assert sorted(os.listdir(workdir / "norm")) == ["DL_des.fsmv", "DL_req.fsmv"]
    assert (workdir / "dl.pml").exists()


def test_export_manifest_promela_directory(workdir):
    assert run(["export", ecpl("dl_du.spl"), "--promela", "pml"]) == 0
    assert sorted(os.listdir(workdir / "pml")) == ["DL.pml", "DU.pml"]


@pytest.mark.parametrize("argv", [
    ["check-feature", "missing_req.fsmv", "missing_des.fsmv"],
    ["export", "a", "b", "c"],
    ["report"],
    ["report", "no-such-report"],
    ["gen", "2", "--states", "4:3"],
    ["--config", "nowhere.yaml", "report", "--list"],
])
def test_usage_errors_exit_two(argv):
    assert run(argv) == 2


def test_malformed_model_exits_two(workdir):
    (workdir / "bad.fsmv").write_text("fsmv Bad { states {A}; }", encoding="utf-8")
    assert run(["check-feature", "bad.fsmv", "bad.fsmv"]) == 2


def test_capacity_exit_code(monkeypatch):
    monkeypatch.setenv("SPLV_ENUM_BUDGET", "2")
    assert run(["check-spl", ecpl("dl_du.spl"), "--mode", "enumerate"]) == 4


def test_config_file_sets_data_dir(workdir, capsys):
    (workdir / "splv.yaml").write_text("system:\n  data_dir: ./archive\n", encoding="utf-8")
    assert run(["--config", "splv.yaml", "check-spl", ecpl("dl_bug.spl"), "--archive"]) == 1
    assert (workdir / "archive" / "reports" / "DlBug.kv").exists()


def test_argparse_rejects_unknown_mode():
    with pytest.raises(SystemExit) as info:
        run(["check-spl", "x.spl", "--mode", "guess"])
    assert info.value.code == 2
