"""
2QBF 求解 - 反例引导的 ∀∃ 判定，按独立变量块拆分
"""
import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from splv.lang.variables import Configuration
from splv.qbf.circuit import FALSE, TRUE, Circuit
from splv.qbf.cnf import to_cnf
from splv.qbf.psi import QbfFormula
from splv.qbf.sat_solver import CdclSolver
from splv.utils.errors import CapacityError
from splv.utils.logger import get_logger

logger = get_logger("cegar")

DEFAULT_MAX_REFINEMENTS = 1000000


@dataclass
class SplVerdict:
    """产品线一致性结论；不一致时附带解码后的设计配置反例"""
    conforms: bool
    witness: Optional[Configuration] = None
    witness_bits: Optional[Dict[str, bool]] = field(default=None, repr=False)
    refinements: int = 0
    sat_calls: int = 0
    clauses: int = 0
    components: int = 0

    def __post_init__(self):
        if self.conforms != (self.witness is None):
            raise ValueError("反例存在当且仅当不一致")


class _SatCounter:
    """统计 SAT 调用次数与子句总数"""

    def __init__(self, circuit: Circuit):
        self.circuit = circuit
        self.calls = 0
        self.clauses = 0

    def __call__(self, root: int) -> Optional[Dict[str, bool]]:
        self.calls += 1
        if root == TRUE:
            return {}
        if root == FALSE:
            return None
        cnf = to_cnf(self.circuit, [root])
        self.clauses += len(cnf.clauses)
        model = CdclSolver().solve(cnf.num_vars, cnf.clauses)
        if model is None:
            return None
        return {name: model[var] for name, var in cnf.input_vars.items()}


@dataclass
class _Block:
    antecedent: List[int] = field(default_factory=list)
    consequent: List[int] = field(default_factory=list)
    universal: List[str] = field(default_factory=list)
    existential: List[str] = field(default_factory=list)


def _components(f: QbfFormula, split: bool) -> List[_Block]:
    """按共享输入把合取项划分为互不相交的块(并查集)"""
    circuit = f.circuit
    conjuncts = [("a", r) for r in f.antecedent] + [("c", r) for r in f.consequent]
    if not split:
        block = _Block([r for side, r in conjuncts if side == "a"], [r for side, r in conjuncts if side == "c"],
                       list(f.universal), list(f.existential))
        return [block]

    parent: Dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    supports = []
    for _, r in conjuncts:
        names = circuit.support(r)
        supports.append(names)
        for n in names:
            parent.setdefault(n, n)
        for n in names[1:]:
            a, b = find(names[0]), find(n)
            if a != b:
                parent[b] = a

    blocks: Dict[str, _Block] = {}
    order: List[str] = []
    for (side, r), names in zip(conjuncts, supports):
        key = find(names[0]) if names else "#const"
        if key not in blocks:
            blocks[key] = _Block()
            order.append(key)
        (blocks[key].antecedent if side == "a" else blocks[key].consequent).append(r)

    universal = set(f.universal)
    for name in parent:
        block = blocks[find(name)]
        (block.universal if name in universal else block.existential).append(name)
    rank = {n: i for i, n in enumerate(f.universal + f.existential)}
    for block in blocks.values():
        block.universal.sort(key=lambda n: rank.get(n, len(rank)))
        block.existential.sort(key=lambda n: rank.get(n, len(rank)))
    return [blocks[k] for k in order]


def _solve_block(circuit: Circuit, block: _Block, sat: _SatCounter, budget: List[int]) -> Optional[Dict[str, bool]]:
    """
    单个块的 CEGAR；返回 None 表示 ∀x (A → ∃y C) 成立，否则返回反例 x*
    """
    a = circuit.conj(*block.antecedent)
    c = circuit.conj(*block.consequent)
    candidates = a
    while True:
        model = sat(candidates)
        if model is None:
            return None
        # 固定候选 x*，找存在见证
        x_star = {n: model.get(n, False) for n in block.universal}
        w = sat(circuit.substitute(c, x_star))
        if w is None:
            return x_star
        # 排除已被该见证覆盖的候选
        witness = {n: w.get(n, False) for n in block.existential}
        candidates = circuit.conj(candidates, -circuit.substitute(c, witness))
        budget[0] -= 1
        if budget[0] < 0:
            raise CapacityError("CEGAR 迭代次数超过上限")
        logger.debug(f"CEGAR 细化: 见证 {sorted(n for n, v in witness.items() if v)}")


def solve_forall_exists(f: QbfFormula, max_refinements: int = DEFAULT_MAX_REFINEMENTS,
                        split: bool = True) -> SplVerdict:
    """
    判定 ∀x [A(x) ⇒ ∃y C(x, y)]

    维护存在见证集 W；候选 x* 取自 A(x) ∧ ⋀_{w∈W} ¬C(x, w)，无候选则成立；
    C(x*, y) 可满足则把解加入 W，否则 x* 即反例。拆分开启时各独立块分别求解，
    任一块的前件不可满足则公式空真。

    Args:
        f: ∀∃ 公式
        max_refinements: 细化次数上限
        split: 是否按独立块拆分

    Returns:
        结论与统计
    """
    circuit = f.circuit
    sat = _SatCounter(circuit)
    blocks = _components(f, split)
    budget = [max_refinements]

    # 每个块的前件先单独求一个模型，用于空真判定与拼接反例
    antecedent_models: List[Dict[str, bool]] = []
    for block in blocks:
        model = sat(circuit.conj(*block.antecedent))
        if model is None:
            logger.debug("前件不可满足，Ψ 空真成立")
            return SplVerdict(True, refinements=0, sat_calls=sat.calls, clauses=sat.clauses, components=len(blocks))
        antecedent_models.append(model)

    # 逐块 CEGAR，任一块失败即拼出整体反例
    for i, block in enumerate(blocks):
        x_star = _solve_block(circuit, block, sat, budget)
        if x_star is None:
            continue
        bits: Dict[str, bool] = {}
        for j, model in enumerate(antecedent_models):
            if j != i:
                bits.update({n: model.get(n, False) for n in blocks[j].universal})
        bits.update(x_star)
        bits = {n: bits.get(n, False) for n in f.universal}
        verdict = SplVerdict(False, _decode(f, bits), bits, max_refinements - budget[0], sat.calls, sat.clauses,
                             len(blocks))
        logger.debug(f"Ψ 不成立，反例 {verdict.witness!r}")
        return verdict
    return SplVerdict(True, refinements=max_refinements - budget[0], sat_calls=sat.calls, clauses=sat.clauses,
                      components=len(blocks))


def _decode(f: QbfFormula, bits: Dict[str, bool]) -> Configuration:
    if f.design_encoding is not None:
        return f.design_encoding.decode(bits)
    return Configuration((n, "1" if bits[n] else "0") for n in f.universal)


def brute_force(f: QbfFormula) -> bool:
    """双重枚举求值，仅适用于很小的公式"""
    circuit = f.circuit
    a, c = f.antecedent_root, f.consequent_root
    for xs in itertools.product((False, True), repeat=len(f.universal)):
        env = dict(zip(f.universal, xs))
        if not circuit.evaluate(a, env):
            continue
        if not any(circuit.evaluate(c, {**env, **dict(zip(f.existential, ys))})
                   for ys in itertools.product((False, True), repeat=len(f.existential))):
            return False
    return True
