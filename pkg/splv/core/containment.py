"""
语言包含 - 子集构造补全、乘积广度优先搜索与最短反例
"""
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from splv.core.machine import Fsm, Word
from splv.utils.errors import ModelError
from splv.utils.logger import get_logger

logger = get_logger("containment")


@dataclass(frozen=True, eq=False)
class Dfa:
    """
    完全确定化的自动机，状态为整数

    sink 为空子集对应的陷阱状态，一个单词到达 sink 当且仅当它不在原语言中。
    """
    alphabet: Tuple[str, ...]
    initial: int
    sink: int
    subsets: Tuple[FrozenSet[str], ...]
    delta: Dict[Tuple[int, str], int]

    @property
    def size(self) -> int:
        return len(self.subsets)

    def step(self, state: int, event: str) -> int:
        return self.delta[(state, event)]

    def run(self, word: Iterable[str]) -> int:
        state = self.initial
        for event in word:
            state = self.delta[(state, event)]
        return state

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) != self.sink

    def to_fsm(self, include_sink: bool = False) -> Fsm:
        """
        转回 Fsm；默认去掉陷阱状态，使语言与确定化前相同
        """
        keep = [q for q in range(self.size) if include_sink or q != self.sink]
        names = {q: f"q{q}" for q in keep}
        transitions = tuple(
            (names[q], event, names[self.delta[(q, event)]])
            for q in keep for event in self.alphabet
            if self.delta[(q, event)] in names
        )
        return Fsm(tuple(names[q] for q in keep), names[self.initial], self.alphabet, transitions)


def complete_and_determinize(r: Fsm, alphabet: Optional[Iterable[str]] = None) -> Dfa:
    """
    子集构造并在给定字母表上补全

    Args:
        r: 可能非确定的 FSM
        alphabet: 字母表，须包含 r 的事件集，默认即 r 的事件集

    Returns:
        确定且完全的自动机
    """
    letters = tuple(sorted(set(r.events if alphabet is None else alphabet)))
    missing = set(r.events) - set(letters)
    if missing:
        raise ModelError(f"字母表缺少事件: {sorted(missing)}")

    # 状态 0 为陷阱(空子集)，状态 1 为初始子集
    empty: FrozenSet[str] = frozenset()
    start = frozenset((r.initial,))
    subsets: List[FrozenSet[str]] = [empty, start]
    index: Dict[FrozenSet[str], int] = {empty: 0, start: 1}
    delta: Dict[Tuple[int, str], int] = {}
    queue = deque([1])
    for event in letters:
        delta[(0, event)] = 0
    # 广度优先展开可达子集
    while queue:
        q = queue.popleft()
        current = subsets[q]
        for event in letters:
            target = frozenset(dst for state in current for dst in r.step(state, event))
            if target not in index:
                index[target] = len(subsets)
                subsets.append(target)
                queue.append(index[target])
            delta[(q, event)] = index[target]
    logger.debug(f"确定化: {len(r.states)} 个状态 -> {len(subsets)} 个子集状态")
    return Dfa(letters, 1, 0, tuple(subsets), delta)


@dataclass(frozen=True)
class ContainmentVerdict:
    """包含判定结果；不成立时附带最短反例"""
    holds: bool
    counterexample: Optional[Word] = None

    def __post_init__(self):
        if self.holds != (self.counterexample is None):
            raise ValueError("反例存在当且仅当包含不成立")


def contains_dfa(d: Fsm, dfa: Dfa) -> ContainmentVerdict:
    """
    在 d 与已补全的需求自动机的乘积上做广度优先搜索

    Args:
        d: 设计变体
        dfa: 字母表覆盖 d 的事件集的完全确定自动机

    Returns:
        包含判定
    """
    missing = set(d.events) - set(dfa.alphabet)
    if missing:
        raise ModelError(f"需求自动机字母表缺少事件: {sorted(missing)}")
    start = (d.initial, dfa.initial)
    parent: Dict[Tuple[str, int], Optional[Tuple[Tuple[str, int], str]]] = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        ds, rq = node
        for event in dfa.alphabet:
            targets = d.step(ds, event)
            if not targets:
                continue
            rnext = dfa.delta[(rq, event)]
            if rnext == dfa.sink:
                # 设计可走而需求落入陷阱
                return ContainmentVerdict(False, _trace(parent, node) + (event,))
            for dnext in targets:
                succ = (dnext, rnext)
                if succ not in parent:
                    parent[succ] = (node, event)
                    queue.append(succ)
    return ContainmentVerdict(True)


def _trace(parent, node) -> Word:
    word: List[str] = []
    while parent[node] is not None:
        node, event = parent[node]
        word.append(event)
    return tuple(reversed(word))


def contains(d: Fsm, r: Fsm) -> ContainmentVerdict:
    """
    判定 L(d) ⊆ L(r)

    字母表取两者事件集的并，设计独有的事件会直接把需求驱入陷阱状态。

    Args:
        d: 设计变体
        r: 需求变体

    Returns:
        包含判定，不成立时附带最短反例
    """
    alphabet = set(d.events) | set(r.events)
    return contains_dfa(d, complete_and_determinize(r, alphabet))
