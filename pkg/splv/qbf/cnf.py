"""
Tseitin 转换 - 把电路转为等可满足的合取范式
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from splv.qbf.circuit import FALSE, TRUE, Circuit

Clause = List[int]


@dataclass
class Cnf:
    """子句集及输入名到 DIMACS 变量号的映射"""
    num_vars: int
    clauses: List[Clause]
    input_vars: Dict[str, int] = field(default_factory=dict)
    aux_vars: List[int] = field(default_factory=list)


def to_cnf(circuit: Circuit, roots: Sequence[int], input_order: Optional[Sequence[str]] = None) -> Cnf:
    """
    Tseitin 转换并断言所有根

    每个与门 g = a1 ∧ ... ∧ an 产生子句 (¬g ∨ ai) 与 (g ∨ ¬a1 ∨ ... ∨ ¬an)。

    Args:
        circuit: 电路
        roots: 需要同时为真的引用
        input_order: 先按此顺序为输入编号(包括不在锥内的输入)，其余输入随后编号

    Returns:
        合取范式；根为常量假时含一个空子句
    """
    # 输入先按给定顺序编号
    input_vars: Dict[str, int] = {}
    node_var: Dict[int, int] = {}
    next_var = 1
    for name in input_order or ():
        if name not in input_vars:
            input_vars[name] = next_var
            node_var[circuit.input(name)] = next_var
            next_var += 1

    clauses: List[Clause] = []
    if any(r == FALSE for r in roots):
        return Cnf(next_var - 1, [[]], input_vars)
    live = [r for r in roots if r != TRUE]
    cone = circuit.cone(live)

    for node in cone:
        if circuit.is_input(node) and node not in node_var:
            input_vars[circuit.name(node)] = next_var
            node_var[node] = next_var
            next_var += 1

    # 与门依拓扑序编为辅助变量
    aux: List[int] = []
    for node in cone:
        if circuit.is_and(node):
            node_var[node] = next_var
            aux.append(next_var)
            next_var += 1

    def lit(ref: int) -> int:
        v = node_var[abs(ref)]
        return v if ref > 0 else -v

    for node in cone:
        if not circuit.is_and(node):
            continue
        g = node_var[node]
        kids = [lit(c) for c in circuit.children(node)]
        for k in kids:
            clauses.append([-g, k])
        clauses.append([g] + [-k for k in kids])

    # 断言根
    for r in live:
        clauses.append([lit(r)])
    return Cnf(next_var - 1, clauses, input_vars, aux)
