"""
验证报告 - 逐特性结果与产品线结论，支持文本表、kv 与 JSON 三种渲染
"""
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from splv.core.conformance import render_config
from splv.core.engine import FeatureOutcome, SplOutcome
from splv.utils.errors import ParseError
from splv.utils.helpers import format_seconds

REPORT_FORMATS = ("text", "kv", "json")
SPL_MODES = ("qbf", "enumerate", "monolithic", "feature")

TEXT_COLUMNS = ("Feature", "Design variants", "Requirement variants", "Phi pairs", "Conforms", "Failing", "Time (s)")


@dataclass
class FeatureResult:
    """单个特性的检查结果，failing 为已渲染的设计配置"""
    name: str
    design_variants: int
    requirement_variants: int
    mapping_pairs: int
    conforms: bool
    failing: Tuple[str, ...] = ()
    seconds: float = 0.0


@dataclass
class SplResult:
    """产品线级结论与求解统计"""
    mode: str
    conforms: bool
    witness: str = ""
    refinements: int = 0
    sat_calls: int = 0
    clauses: int = 0
    seconds: float = 0.0


@dataclass
class Report:
    name: str
    kind: str = "feature"
    features: List[FeatureResult] = field(default_factory=list)
    spl: Optional[SplResult] = None

    @property
    def conforms(self) -> bool:
        if self.spl is not None:
            return self.spl.conforms
        return all(f.conforms for f in self.features)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for feature in data["features"]:
            feature["failing"] = list(feature["failing"])
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        features = [FeatureResult(**{**f, "failing": tuple(f.get("failing", ()))}) for f in data.get("features", [])]
        spl = SplResult(**data["spl"]) if data.get("spl") else None
        return cls(name=data["name"], kind=data.get("kind", "feature"), features=features, spl=spl)


def _bool(value: bool) -> str:
    return "true" if value else "false"


def render_kv(report: Report) -> str:
    """
    渲染为逐行 key=value 文本

    Args:
        report: 报告

    Returns:
        以换行结尾的文本
    """
    lines = [
        f"report.name={report.name}",
        f"report.kind={report.kind}",
        f"report.features={len(report.features)}",
    ]
    for i, f in enumerate(report.features):
        lines += [
            f"feature.{i}.name={f.name}",
            f"feature.{i}.design_variants={f.design_variants}",
            f"feature.{i}.requirement_variants={f.requirement_variants}",
            f"feature.{i}.mapping_pairs={f.mapping_pairs}",
            f"feature.{i}.conforms={_bool(f.conforms)}",
            f"feature.{i}.failing={';'.join(f.failing)}",
            f"feature.{i}.seconds={format_seconds(f.seconds)}",
        ]
    if report.spl is not None:
        s = report.spl
        lines += [
            f"spl.mode={s.mode}",
            f"spl.conforms={_bool(s.conforms)}",
            f"spl.witness={s.witness}",
            f"spl.refinements={s.refinements}",
            f"spl.sat_calls={s.sat_calls}",
            f"spl.clauses={s.clauses}",
            f"spl.seconds={format_seconds(s.seconds)}",
        ]
    return "\n".join(lines) + "\n"


def parse_kv(text: str, source: Optional[str] = None) -> Report:
    """
    解析 render_kv 的输出

    Args:
        text: kv 文本
        source: 文件名，用于错误信息

    Returns:
        报告
    """
    values: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        key, sep, value = raw.partition("=")
        if not sep:
            raise ParseError(f"缺少 \"=\": {raw!r}", lineno, 1, source)
        if key in values:
            raise ParseError(f"键 {key} 重复", lineno, 1, source)
        values[key], lines[key] = value, lineno

    def get(key: str) -> str:
        if key not in values:
            raise ParseError(f"缺少键 {key}", 1, 1, source)
        return values[key]

    def as_int(key: str) -> int:
        try:
            return int(get(key))
        except ValueError:
            raise ParseError(f"{key} 不是整数: {values[key]!r}", lines[key], 1, source) from None

    def as_float(key: str) -> float:
        try:
            return float(get(key))
        except ValueError:
            raise ParseError(f"{key} 不是数值: {values[key]!r}", lines[key], 1, source) from None

    def as_bool(key: str) -> bool:
        value = get(key)
        if value not in ("true", "false"):
            raise ParseError(f"{key} 不是 true/false: {value!r}", lines[key], 1, source)
        return value == "true"

    kind = get("report.kind")
    if kind not in ("feature", "spl"):
        raise ParseError(f"未知的报告类型 {kind!r}", lines["report.kind"], 1, source)
    report = Report(name=get("report.name"), kind=kind)
    for i in range(as_int("report.features")):
        failing = get(f"feature.{i}.failing")
        report.features.append(FeatureResult(
            name=get(f"feature.{i}.name"),
            design_variants=as_int(f"feature.{i}.design_variants"),
            requirement_variants=as_int(f"feature.{i}.requirement_variants"),
            mapping_pairs=as_int(f"feature.{i}.mapping_pairs"),
            conforms=as_bool(f"feature.{i}.conforms"),
            failing=tuple(failing.split(";")) if failing else (),
            seconds=as_float(f"feature.{i}.seconds"),
        ))
    if "spl.mode" in values:
        mode = get("spl.mode")
        if mode not in SPL_MODES:
            raise ParseError(f"未知的模式 {mode!r}", lines["spl.mode"], 1, source)
        report.spl = SplResult(
            mode=mode,
            conforms=as_bool("spl.conforms"),
            witness=get("spl.witness"),
            refinements=as_int("spl.refinements"),
            sat_calls=as_int("spl.sat_calls"),
            clauses=as_int("spl.clauses"),
            seconds=as_float("spl.seconds"),
        )
    return report


def render_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"


def parse_json(text: str, source: Optional[str] = None) -> Report:
    try:
        return Report.from_dict(json.loads(text))
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON 格式错误: {e.msg}", e.lineno, e.colno, source) from None
    except (KeyError, TypeError) as e:
        raise ParseError(f"报告字段不完整: {e}", 1, 1, source) from None


def render_text(report: Report) -> str:
    """
    渲染为对齐的文本表，产品线报告在末尾追加 SPL 汇总行

    Args:
        report: 报告

    Returns:
        以换行结尾的表格
    """
    rows: List[Tuple[str, ...]] = []
    for f in report.features:
        rows.append((f.name, str(f.design_variants), str(f.requirement_variants), str(f.mapping_pairs),
                     "yes" if f.conforms else "no", "; ".join(f.failing) or "-", format_seconds(f.seconds)))
    if report.spl is not None:
        s = report.spl
        rows.append((f"SPL ({s.mode})", "-", "-", "-", "yes" if s.conforms else "no",
                     s.witness or "-", format_seconds(s.seconds)))

    widths = [max(len(row[i]) for row in rows + [TEXT_COLUMNS]) for i in range(len(TEXT_COLUMNS))]

    def line(cells) -> str:
        return " | ".join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip()

    out = [f"Report: {report.name} ({report.kind})", line(TEXT_COLUMNS), "-+-".join("-" * w for w in widths)]
    out.extend(line(row) for row in rows)
    if report.spl is not None:
        out.append(f"refinements={report.spl.refinements} sat_calls={report.spl.sat_calls} "
                   f"clauses={report.spl.clauses}")
    return "\n".join(out) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "kv":
        return render_kv(report)
    if fmt == "json":
        return render_json(report)
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"未知的报告格式: {fmt}")


def parse_report(text: str, source: Optional[str] = None) -> Report:
    """按内容识别 JSON 或 kv 报告"""
    if text.lstrip().startswith("{"):
        return parse_json(text, source)
    return parse_kv(text, source)


def feature_result(outcome: FeatureOutcome) -> FeatureResult:
    mapping = outcome.mapping
    return FeatureResult(
        name=outcome.name,
        design_variants=len(mapping.entries),
        requirement_variants=len(mapping.requirement_configs),
        mapping_pairs=mapping.pair_count,
        conforms=mapping.conforms,
        failing=tuple(render_config(c) for c in mapping.failing),
        seconds=outcome.seconds,
    )


def build_report(name: str, outcomes: Sequence[FeatureOutcome], spl: Optional[SplOutcome] = None) -> Report:
    """
    由引擎结果组装报告

    Args:
        name: 报告名
        outcomes: 逐特性结果
        spl: 产品线结论，缺省时为特性报告

    Returns:
        报告
    """
    report = Report(name=name, kind="feature" if spl is None else "spl",
                    features=[feature_result(o) for o in outcomes])
    if spl is not None:
        report.spl = SplResult(
            mode=spl.mode,
            conforms=spl.conforms,
            witness=render_config(spl.witness) if spl.witness is not None else "",
            refinements=spl.refinements,
            sat_calls=spl.sat_calls,
            clauses=spl.clauses,
            seconds=spl.seconds,
        )
    return report
