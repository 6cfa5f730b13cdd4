"""
产品线清单 - spl 块的解析、打印与模型加载

    spl Name {
        feature DL req "dl_req.fsmv" des "dl_des.fsmv";
        req_constraint DL.Cp1 = Auto <=> DU.Cp2 = Auto;
        des_constraint DL.mode = Auto => DU.mode = Auto;
    }

模型路径相对于清单文件所在目录。
"""
import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from splv.core.engine import FeaturePair, SplInstance
from splv.lang.lexer import TokenStream
from splv.lang.parser import parse_predicate_tokens
from splv.lang.predicate import Predicate, check_scope, resolve, to_text
from splv.lang.variables import VarDecl
from splv.utils.errors import ParseError, ScopeError
from splv.utils.logger import get_logger
from splv.workbench.model_format import load_model

logger = get_logger("manifest")

_FEATURE_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

Position = Tuple[int, int]


@dataclass(frozen=True)
class FeatureEntry:
    name: str
    requirement_path: str
    design_path: str


@dataclass(frozen=True)
class SplManifest:
    """
    产品线清单；约束保留语法分析的原样形式，加载模型后再按限定作用域解析
    """
    name: str
    features: Tuple[FeatureEntry, ...]
    req_constraints: Tuple[Predicate, ...] = ()
    des_constraints: Tuple[Predicate, ...] = ()
    base_dir: str = field(default="", compare=False)
    source: Optional[str] = field(default=None, compare=False)
    req_positions: Tuple[Position, ...] = field(default=(), compare=False)
    des_positions: Tuple[Position, ...] = field(default=(), compare=False)

    def resolve_path(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)


def parse_manifest(text: str, source: Optional[str] = None, base_dir: str = "") -> SplManifest:
    """
    解析清单文本

    Args:
        text: 清单内容
        source: 文件名，用于错误信息
        base_dir: 解析相对模型路径的目录

    Returns:
        清单
    """
    ts = TokenStream(text, source)
    ts.expect("spl")
    name = ts.expect_kind("ident", "产品线名").text
    ts.expect("{")
    features: List[FeatureEntry] = []
    req: List[Tuple[Predicate, Position]] = []
    des: List[Tuple[Predicate, Position]] = []
    while not ts.accept("}"):
        token = ts.peek()
        if token.kind == "eof":
            ts.fail(f"产品线 {name} 缺少 \"}}\"")
        if ts.accept("feature"):
            feature_tok = ts.expect_kind("ident", "特性名")
            if not _FEATURE_RE.match(feature_tok.text):
                ts.fail(f"特性名 {feature_tok.text!r} 不能含点号", feature_tok)
            if any(f.name == feature_tok.text for f in features):
                ts.fail(f"特性 {feature_tok.text} 重复", feature_tok)
            ts.expect("req")
            req_path = ts.expect_kind("string", "需求模型路径").text
            ts.expect("des")
            des_path = ts.expect_kind("string", "设计模型路径").text
            features.append(FeatureEntry(feature_tok.text, req_path, des_path))
        elif ts.accept("req_constraint"):
            req.append((parse_predicate_tokens(ts), (token.line, token.column)))
        elif ts.accept("des_constraint"):
            des.append((parse_predicate_tokens(ts), (token.line, token.column)))
        else:
            ts.fail("期望 feature、req_constraint 或 des_constraint")
        ts.expect(";")
    if ts.peek().kind != "eof":
        ts.fail("清单结束后有多余内容")
    if not features:
        raise ParseError(f"产品线 {name} 没有特性", 1, 1, source)
    return SplManifest(
        name=name,
        features=tuple(features),
        req_constraints=tuple(p for p, _ in req),
        des_constraints=tuple(p for p, _ in des),
        base_dir=base_dir,
        source=source,
        req_positions=tuple(pos for _, pos in req),
        des_positions=tuple(pos for _, pos in des),
    )


def load_manifest(path: str) -> SplManifest:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return parse_manifest(text, source=path, base_dir=os.path.dirname(path))


def manifest_to_text(manifest: SplManifest) -> str:
    """打印为清单格式，重新解析后与原清单结构相等"""
    lines = [f"spl {manifest.name} {{"]
    for f in manifest.features:
        lines.append(f'    feature {f.name} req "{f.requirement_path}" des "{f.design_path}";')
    for p in manifest.req_constraints:
        lines.append(f"    req_constraint {to_text(p)};")
    for p in manifest.des_constraints:
        lines.append(f"    des_constraint {to_text(p)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _resolve_constraints(manifest: SplManifest, constraints: Tuple[Predicate, ...],
                         positions: Tuple[Position, ...], scope: Dict[str, VarDecl]) -> Tuple[Predicate, ...]:
    resolved = []
    for i, p in enumerate(constraints):
        try:
            p = resolve(p, scope)
            check_scope(p, scope)
        except ScopeError as e:
            line, column = positions[i] if i < len(positions) else (1, 1)
            raise ParseError(str(e), line, column, manifest.source) from e
        resolved.append(p)
    return tuple(resolved)


def instantiate(manifest: SplManifest, check_consistency: bool = True, enum_limit: int = 4096) -> SplInstance:
    """
    加载清单引用的全部模型并解析跨特性约束

    Args:
        manifest: 清单
        check_consistency: 是否检查各模型的 ρ 与守卫一致性
        enum_limit: 一致性检查改用 SAT 的阈值

    Returns:
        可交给引擎的产品线
    """
    pairs = []
    req_scope: Dict[str, VarDecl] = {}
    des_scope: Dict[str, VarDecl] = {}
    for entry in manifest.features:
        requirement = load_model(manifest.resolve_path(entry.requirement_path), check_consistency, enum_limit)
        design = load_model(manifest.resolve_path(entry.design_path), check_consistency, enum_limit)
        pairs.append(FeaturePair(entry.name, requirement, design))
        req_scope.update({d.name: d for d in (v.qualified(entry.name) for v in requirement.variables)})
        des_scope.update({d.name: d for d in (v.qualified(entry.name) for v in design.variables)})
    instance = SplInstance(
        name=manifest.name,
        features=tuple(pairs),
        requirement_constraints=_resolve_constraints(manifest, manifest.req_constraints, manifest.req_positions,
                                                     req_scope),
        design_constraints=_resolve_constraints(manifest, manifest.des_constraints, manifest.des_positions,
                                                des_scope),
    )
    logger.info(f"加载产品线 {manifest.name}: {len(pairs)} 个特性, "
                f"{len(instance.requirement_constraints)} 条需求约束, {len(instance.design_constraints)} 条设计约束")
    return instance
