"""
验证报告渲染与解析测试
"""
import pytest

from splv.core.conformance import compute_conformance
from splv.core.engine import FeatureOutcome, SplOutcome
from splv.lang.variables import Configuration
from splv.utils.errors import ParseError
from splv.workbench.model_format import load_model
from splv.workbench.report import (
    FeatureResult, Report, SplResult, build_report, parse_json, parse_kv, parse_report, render, render_json,
    render_kv, render_text,
)
from tests.conftest import ecpl

HEADER = "Feature | Design variants | Requirement variants | Phi pairs | Conforms | Failing | Time (s)"


def sample_report():
    return Report(
        name="DlDu",
        kind="spl",
        features=[
            FeatureResult("DL", 4, 4, 6, True, (), 0.25),
            FeatureResult("DU", 7, 4, 9, False, ("Cp3=Moff,Cp4=Key,Cp5=All", "Cp3=Auto,Cp4=Key,Cp5=All"), 0.5),
        ],
        spl=SplResult("feature", False, "DU.Cp3=Moff,DU.Cp4=Key,DU.Cp5=All", seconds=0.75),
    )


def test_kv_layout():
    lines = render_kv(sample_report()).splitlines()
    assert lines[:3] == ["report.name=DlDu", "report.kind=spl", "report.features=2"]
    assert "feature.1.failing=Cp3=Moff,Cp4=Key,Cp5=All;Cp3=Auto,Cp4=Key,Cp5=All" in lines
    assert "feature.0.failing=" in lines
    assert "spl.seconds=0.750000" in lines


def test_kv_and_json_round_trip():
    report = sample_report()
    assert parse_kv(render_kv(report)) == report
    assert parse_json(render_json(report)) == report
    assert parse_report(render_json(report)) == report
    assert parse_report(render_kv(report)) == report


def test_feature_report_has_no_spl_section():
    report = Report("DL", features=[FeatureResult("DL", 4, 4, 6, True)])
    text = render_kv(report)
    assert "spl.mode" not in text
    assert parse_kv(text).spl is None
    assert parse_kv(text).conforms


def test_empty_report_renders_only_the_header():
    lines = render_text(Report("Empty")).splitlines()
    assert lines == ["Report: Empty (feature)", HEADER, "-+-".join("-" * len(c) for c in HEADER.split(" | "))]


def test_text_table_rows():
    lines = render_text(sample_report()).splitlines()
    assert [cell.strip() for cell in lines[1].split(" | ")] == HEADER.split(" | ")
    assert lines[3].split(" | ")[0].strip() == "DL"
    assert lines[3].split(" | ")[4].strip() == "yes"
    assert lines[5].startswith("SPL (feature)")
    assert lines[5].split(" | ")[5].strip() == "DU.Cp3=Moff,DU.Cp4=Key,DU.Cp5=All"
    assert lines[6] == "refinements=0 sat_calls=0 clauses=0"


def test_render_dispatch():
    report = sample_report()
    assert render(report, "kv") == render_kv(report)
    assert render(report, "text") == render_text(report)
    with pytest.raises(ValueError):
        render(report, "xml")


@pytest.mark.parametrize("text", [
    "report.name=X\nnot a pair\n",
    "report.name=X\nreport.name=Y\n",
    "report.name=X\nreport.kind=feature\n",
    "report.name=X\nreport.kind=feature\nreport.features=two\n",
    "report.name=X\nreport.kind=batch\nreport.features=0\n",
    "report.name=X\nreport.kind=spl\nreport.features=0\nspl.mode=guess\n",
    ("report.name=X\nreport.kind=feature\nreport.features=1\nfeature.0.name=A\nfeature.0.design_variants=1\n"
     "feature.0.requirement_variants=1\nfeature.0.mapping_pairs=1\nfeature.0.conforms=maybe\n"
     "feature.0.failing=\nfeature.0.seconds=0\n"),
])
def test_malformed_kv(text):
    with pytest.raises(ParseError):
        parse_kv(text)


@pytest.mark.parametrize("text", ["{", '{"kind": "spl"}', '{"name": "X", "features": [{"name": "A"}]}'])
def test_malformed_json(text):
    with pytest.raises(ParseError):
        parse_json(text)


def test_build_report_from_outcomes():
    des, req = load_model(ecpl("dl_des_bug.fsmv")), load_model(ecpl("dl_req.fsmv"))
    outcome = FeatureOutcome("DL", compute_conformance(des, req, feature="DL"), 0.1)
    spl = SplOutcome("feature", False, Configuration({"DL.Cp1": "Auto", "DL.Cp2": "Poff"}))
    report = build_report("DlBug", [outcome], spl)
    assert report.kind == "spl"
    assert report.features[0] == FeatureResult("DL", 4, 4, 5, False, ("Cp1=Auto,Cp2=Poff",), 0.1)
    assert report.spl.witness == "DL.Cp1=Auto,DL.Cp2=Poff"
    assert not report.conforms
    assert build_report("DL", [outcome]).kind == "feature"
