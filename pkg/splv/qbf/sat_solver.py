"""
CDCL 求解器 - 双观察文字传播、1UIP 子句学习、非时序回跳、VSIDS、相位保存与 Luby 重启
"""
import heapq
from typing import Dict, List, Optional, Sequence, Tuple

from splv.qbf.circuit import Circuit
from splv.qbf.cnf import to_cnf
from splv.utils.logger import get_logger

logger = get_logger("sat_solver")

_UNASSIGNED = 0


def luby(i: int) -> int:
    """Luby 序列的第 i 项(从 1 开始)"""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


class CdclSolver:
    """
    命题可满足性求解器

    每次 solve 调用相互独立，实例不在调用之间保留状态。
    """

    def __init__(self, restart_base: int = 100, var_decay: float = 0.95):
        self.restart_base = restart_base
        self.var_decay = var_decay
        self.conflicts = 0
        self.decisions = 0

    def _reset(self, num_vars: int) -> None:
        self.num_vars = num_vars
        self.assigns: List[int] = [_UNASSIGNED] * (num_vars + 1)
        self.level: List[int] = [0] * (num_vars + 1)
        self.reason: List[int] = [-1] * (num_vars + 1)
        self.polarity: List[bool] = [False] * (num_vars + 1)
        self.activity: List[float] = [0.0] * (num_vars + 1)
        self.var_inc = 1.0
        self.clauses: List[List[int]] = []
        self.watches: Dict[int, List[int]] = {}
        for v in range(1, num_vars + 1):
            self.watches[v] = []
            self.watches[-v] = []
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.heap: List[Tuple[float, int]] = [(0.0, v) for v in range(1, num_vars + 1)]
        self.conflicts = 0
        self.decisions = 0

    def _value(self, lit: int) -> int:
        """1 为真，-1 为假，0 为未赋值"""
        a = self.assigns[abs(lit)]
        return a if lit > 0 else -a

    def _decision_level(self) -> int:
        return len(self.trail_lim)

    def _enqueue(self, lit: int, reason: int) -> None:
        v = abs(lit)
        self.assigns[v] = 1 if lit > 0 else -1
        self.level[v] = self._decision_level()
        self.reason[v] = reason
        self.trail.append(lit)

    def _attach(self, clause: List[int]) -> int:
        index = len(self.clauses)
        self.clauses.append(clause)
        self.watches[clause[0]].append(index)
        self.watches[clause[1]].append(index)
        return index

    def _add_clause(self, lits: Sequence[int]) -> bool:
        """加入原始子句，返回 False 表示已知不可满足"""
        clause: List[int] = []
        seen = set()
        for lit in lits:
            if -lit in seen:
                return True  # 重言式
            if lit not in seen:
                seen.add(lit)
                clause.append(lit)
        if not clause:
            return False
        if len(clause) == 1:
            value = self._value(clause[0])
            if value == -1:
                return False
            if value == _UNASSIGNED:
                self._enqueue(clause[0], -1)
            return True
        self._attach(clause)
        return True

    def _propagate(self) -> int:
        """单元传播，返回冲突子句编号或 -1"""
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -p
            ws = self.watches[false_lit]
            kept: List[int] = []
            i = 0
            while i < len(ws):
                ci = ws[i]
                i += 1
                c = self.clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if self._value(first) == 1:
                    kept.append(ci)
                    continue
                moved = False
                for k in range(2, len(c)):
                    if self._value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        self.watches[c[1]].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if self._value(first) == -1:
                    kept.extend(ws[i:])
                    self.watches[false_lit] = kept
                    self.qhead = len(self.trail)
                    return ci
                self._enqueue(first, ci)
            self.watches[false_lit] = kept
        return -1

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.num_vars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.num_vars + 1)
                         if self.assigns[u] == _UNASSIGNED]
            heapq.heapify(self.heap)

    def _analyze(self, confl: int) -> Tuple[List[int], int]:
        """1UIP 冲突分析，返回学习子句(断言文字在首位)和回跳层"""
        seen = [False] * (self.num_vars + 1)
        learnt: List[int] = [0]
        path_count = 0
        p = 0
        index = len(self.trail) - 1
        clause = self.clauses[confl]
        current = self._decision_level()
        while True:
            for q in (clause if p == 0 else clause[1:]):
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] >= current:
                        path_count += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[index])]:
                index -= 1
            p = self.trail[index]
            index -= 1
            seen[abs(p)] = False
            path_count -= 1
            if path_count == 0:
                break
            clause = self.clauses[self.reason[abs(p)]]
        learnt[0] = -p

        if len(learnt) == 1:
            return learnt, 0
        # 把层数最高的文字放到第二位作为观察文字
        best = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _cancel_until(self, level: int) -> None:
        if self._decision_level() <= level:
            return
        start = self.trail_lim[level]
        for lit in self.trail[start:]:
            v = abs(lit)
            self.polarity[v] = lit > 0
            self.assigns[v] = _UNASSIGNED
            self.reason[v] = -1
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[start:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def _pick_branch(self) -> int:
        while self.heap:
            _, v = heapq.heappop(self.heap)
            if self.assigns[v] == _UNASSIGNED:
                return v
        return 0

    def solve(self, num_vars: int, clauses: Sequence[Sequence[int]]) -> Optional[Dict[int, bool]]:
        """
        求解 CNF

        Args:
            num_vars: 变量个数，变量编号为 1..num_vars
            clauses: 子句列表，文字为非零整数

        Returns:
            可满足时为完整赋值(变量号到布尔值)，否则 None
        """
        # 加载子句，单位子句直接入队
        self._reset(num_vars)
        for clause in clauses:
            if not self._add_clause(clause):
                return None

        restarts = 1
        restart_limit = luby(restarts) * self.restart_base
        conflicts_here = 0
        while True:
            confl = self._propagate()
            if confl >= 0:
                self.conflicts += 1
                conflicts_here += 1
                if self._decision_level() == 0:
                    return None
                # 学习子句并非时序回跳
                learnt, back_level = self._analyze(confl)
                self._cancel_until(back_level)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    self._enqueue(learnt[0], self._attach(learnt))
                self.var_inc /= self.var_decay
                continue

            # Luby 重启
            if conflicts_here >= restart_limit:
                self._cancel_until(0)
                restarts += 1
                restart_limit = luby(restarts) * self.restart_base
                conflicts_here = 0

            # VSIDS 选变量，沿用上次的相位
            v = self._pick_branch()
            if v == 0:
                return {u: self.assigns[u] == 1 for u in range(1, num_vars + 1)}
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.polarity[v] else -v, -1)


def sat(circuit: Circuit, root: int, solver: Optional[CdclSolver] = None) -> Optional[Dict[str, bool]]:
    """
    判定电路可满足性

    Args:
        circuit: 电路
        root: 需要为真的引用
        solver: 可选的求解器实例(用于读取统计)

    Returns:
        可满足时为 root 锥内输入的赋值，否则 None
    """
    cnf = to_cnf(circuit, [root])
    model = (solver or CdclSolver()).solve(cnf.num_vars, cnf.clauses)
    if model is None:
        return None
    return {name: model[var] for name, var in cnf.input_vars.items()}
