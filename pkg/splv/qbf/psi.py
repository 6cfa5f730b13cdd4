"""
一致性公式 Ψ - 由各特性的映射、全局谓词与组合谓词构造 ∀x [φ^d ⇒ ∃y (Φ1 ∧ ... ∧ Φn ∧ φ^r)]
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from splv.core.conformance import ConformanceMapping
from splv.lang.predicate import TRUE, And, Predicate, qualify
from splv.qbf.circuit import TRUE as TRUE_REF, Circuit
from splv.qbf.encoding import BoolEncoding, encode_mapping, encode_predicate
from splv.utils.logger import get_logger

logger = get_logger("psi")

DESIGN_PREFIX = "x:"
REQUIREMENT_PREFIX = "y:"


@dataclass(frozen=True)
class PsiFeature:
    """一个特性对 Ψ 的贡献；映射与谓词使用未限定的变量名"""
    name: str
    mapping: ConformanceMapping
    design_global: Predicate = TRUE
    requirement_global: Predicate = TRUE


@dataclass
class QbfFormula:
    """
    前束 ∀∃ 公式

    矩阵为 ⋀antecedent ⇒ ⋀consequent；两侧以合取项列表保存，便于按独立块拆分。
    """
    circuit: Circuit
    universal: Tuple[str, ...]
    existential: Tuple[str, ...]
    antecedent: Tuple[int, ...] = ()
    consequent: Tuple[int, ...] = ()
    design_encoding: Optional[BoolEncoding] = field(default=None, repr=False)
    requirement_encoding: Optional[BoolEncoding] = field(default=None, repr=False)

    @property
    def antecedent_root(self) -> int:
        return self.circuit.conj(*self.antecedent)

    @property
    def consequent_root(self) -> int:
        return self.circuit.conj(*self.consequent)

    @property
    def matrix(self) -> int:
        return self.circuit.implies(self.antecedent_root, self.consequent_root)


def _split(predicates: Union[Predicate, Sequence[Predicate], None]) -> List[Predicate]:
    if predicates is None:
        return []
    if not isinstance(predicates, (list, tuple)):
        predicates = [predicates]
    parts: List[Predicate] = []
    for p in predicates:
        if isinstance(p, And):
            parts.extend(p.args)
        elif p != TRUE:
            parts.append(p)
    return parts


def build_psi(features: Sequence[PsiFeature],
              rho_d_comp: Union[Predicate, Sequence[Predicate], None] = None,
              rho_r_comp: Union[Predicate, Sequence[Predicate], None] = None) -> QbfFormula:
    """
    构造整条产品线的一致性公式

    φ^d 为设计位的合法性、各特性设计全局谓词与设计侧组合谓词的合取；φ^r 同理作用于需求位。

    Args:
        features: 各特性的映射与全局谓词
        rho_d_comp: 设计侧组合谓词(变量已限定为 "特性.变量")
        rho_r_comp: 需求侧组合谓词

    Returns:
        ∀∃ 公式
    """
    circuit = Circuit()
    qualified = [f.mapping.qualified(f.name) for f in features]
    design_scope = [d for m in qualified for d in m.design_scope]
    requirement_scope = [d for m in qualified for d in m.requirement_scope]
    enc_d = BoolEncoding(design_scope, circuit, DESIGN_PREFIX)
    enc_r = BoolEncoding(requirement_scope, circuit, REQUIREMENT_PREFIX)

    # 前件 φ^d 由设计位合法性与设计侧谓词组成
    antecedent = [enc_d.variable_validity(d.name) for d in design_scope]
    for f in features:
        antecedent.append(encode_predicate(qualify(f.design_global, f.name), enc_d))
    for p in _split(rho_d_comp):
        antecedent.append(encode_predicate(p, enc_d))

    # 后件: 各特性映射与 φ^r
    consequent = [encode_mapping(m, enc_d, enc_r) for m in qualified]
    consequent += [enc_r.variable_validity(d.name) for d in requirement_scope]
    for f in features:
        consequent.append(encode_predicate(qualify(f.requirement_global, f.name), enc_r))
    for p in _split(rho_r_comp):
        consequent.append(encode_predicate(p, enc_r))

    formula = QbfFormula(
        circuit=circuit,
        universal=tuple(enc_d.input_names()),
        existential=tuple(enc_r.input_names()),
        antecedent=tuple(r for r in antecedent if r != TRUE_REF),
        consequent=tuple(r for r in consequent if r != TRUE_REF),
        design_encoding=enc_d,
        requirement_encoding=enc_r,
    )
    logger.debug(f"Ψ: {len(features)} 个特性, {len(formula.universal)} 个全称位, "
                 f"{len(formula.existential)} 个存在位, 电路 {len(circuit)} 个节点")
    return formula
