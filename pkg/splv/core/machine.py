"""
FSMv 状态机 - 带变异性的有限状态机、变体投影与有界语言
"""
import functools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from splv.lang.predicate import (
    TRUE, Predicate, check_scope, compile_predicate, evaluate, is_consistent, qualify, satisfying_assignments, to_text,
)
from splv.lang.variables import Configuration, VarDecl, scope_index
from splv.utils.errors import ModelError, ScopeError, ValidityError
from splv.utils.logger import get_logger

logger = get_logger("machine")

Word = Tuple[str, ...]


def _check_unique(kind: str, names: Sequence[str], owner: str) -> None:
    seen = set()
    for name in names:
        if name in seen:
            raise ModelError(f"{owner}: {kind} {name} 重复")
        seen.add(name)


@dataclass(frozen=True)
class Fsm:
    """
    无守卫的有限状态机，所有状态都可接受，语言前缀封闭

    transitions 为 (源状态, 事件, 目标状态) 三元组。
    """
    states: Tuple[str, ...]
    initial: str
    events: Tuple[str, ...]
    transitions: Tuple[Tuple[str, str, str], ...]

    def __post_init__(self):
        for name in ("states", "events", "transitions"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        _check_unique("状态", self.states, "FSM")
        _check_unique("事件", self.events, "FSM")
        states, events = set(self.states), set(self.events)
        if self.initial not in states:
            raise ModelError(f"FSM: 初始状态 {self.initial} 不在状态集中")
        for src, event, dst in self.transitions:
            if src not in states or dst not in states:
                raise ModelError(f"FSM: 迁移 {src} -> {dst} 的端点不在状态集中")
            if event not in events:
                raise ModelError(f"FSM: 迁移事件 {event} 不在事件集中")

    @functools.cached_property
    def successors(self) -> Dict[Tuple[str, str], Tuple[str, ...]]:
        """(状态, 事件) -> 去重且保持顺序的后继状态"""
        table: Dict[Tuple[str, str], List[str]] = defaultdict(list)
        for src, event, dst in self.transitions:
            if dst not in table[(src, event)]:
                table[(src, event)].append(dst)
        return {key: tuple(value) for key, value in table.items()}

    def step(self, state: str, event: str) -> Tuple[str, ...]:
        return self.successors.get((state, event), ())

    def reachable_states(self) -> List[str]:
        order = [self.initial]
        seen = {self.initial}
        by_src: Dict[str, List[str]] = defaultdict(list)
        for src, _, dst in self.transitions:
            by_src[src].append(dst)
        i = 0
        while i < len(order):
            for dst in by_src[order[i]]:
                if dst not in seen:
                    seen.add(dst)
                    order.append(dst)
            i += 1
        return order

    def pruned(self) -> "Fsm":
        """删除从初始状态不可达的状态，语言不变"""
        keep = set(self.reachable_states())
        if len(keep) == len(self.states):
            return self
        return Fsm(
            states=tuple(s for s in self.states if s in keep),
            initial=self.initial,
            events=self.events,
            transitions=tuple(t for t in self.transitions if t[0] in keep),
        )

    def is_deterministic(self) -> bool:
        return all(len(dsts) == 1 for dsts in self.successors.values())

    def accepts(self, word: Sequence[str]) -> bool:
        current = {self.initial}
        for event in word:
            current = {dst for state in current for dst in self.step(state, event)}
            if not current:
                return False
        return True


@dataclass(frozen=True)
class Transition:
    """带守卫的迁移 (src, guard, event, dst)"""
    src: str
    event: str
    dst: str
    guard: Predicate = TRUE

    def to_text(self) -> str:
        when = "" if self.guard == TRUE else f" when {to_text(self.guard)}"
        return f"trans {self.src} -> {self.dst} on {self.event}{when};"


@dataclass(frozen=True)
class FsmvMachine:
    """
    带变异性的有限状态机 ⟨Q, q0, Σ, Var, E, ρ⟩

    构造时检查结构与作用域；ρ 和守卫的一致性由 check_consistency 检查。
    """
    name: str
    states: Tuple[str, ...]
    initial: str
    events: Tuple[str, ...]
    variables: Tuple[VarDecl, ...] = ()
    transitions: Tuple[Transition, ...] = ()
    global_predicate: Predicate = TRUE
    description: str = field(default="", compare=False)

    def __post_init__(self):
        for name in ("states", "events", "variables", "transitions"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        _check_unique("状态", self.states, self.name)
        _check_unique("事件", self.events, self.name)
        states, events = set(self.states), set(self.events)
        if self.initial not in states:
            raise ModelError(f"{self.name}: 初始状态 {self.initial} 不在状态集中")
        try:
            scope = scope_index(self.variables)
            check_scope(self.global_predicate, scope)
            for t in self.transitions:
                if t.src not in states:
                    raise ModelError(f"{self.name}: 迁移源状态 {t.src} 未声明")
                if t.dst not in states:
                    raise ModelError(f"{self.name}: 迁移目标状态 {t.dst} 未声明")
                if t.event not in events:
                    raise ModelError(f"{self.name}: 迁移事件 {t.event} 未声明")
                check_scope(t.guard, scope)
        except ScopeError as e:
            raise ModelError(f"{self.name}: {e}") from e

    @functools.cached_property
    def scope(self) -> Dict[str, VarDecl]:
        return scope_index(self.variables)

    @property
    def variable_names(self) -> Tuple[str, ...]:
        return tuple(decl.name for decl in self.variables)

    def check_consistency(self, enum_limit: int = 4096) -> None:
        """
        检查 ρ 与每条迁移守卫都可满足

        Args:
            enum_limit: 改用 SAT 判定的作用域大小阈值
        """
        if not is_consistent(self.global_predicate, self.variables, enum_limit=enum_limit):
            raise ModelError(f"{self.name}: 全局谓词 ρ 不一致")
        checked = set()
        for t in self.transitions:
            if t.guard in checked:
                continue
            if not is_consistent(t.guard, self.variables, enum_limit=enum_limit):
                raise ModelError(f"{self.name}: 迁移 {t.src} -> {t.dst} on {t.event} 的守卫不一致")
            checked.add(t.guard)

    def qualified(self, prefix: str) -> "FsmvMachine":
        """变量名加上 "prefix." 前缀，状态与事件不变"""
        return FsmvMachine(
            name=self.name,
            states=self.states,
            initial=self.initial,
            events=self.events,
            variables=tuple(decl.qualified(prefix) for decl in self.variables),
            transitions=tuple(Transition(t.src, t.event, t.dst, qualify(t.guard, prefix))
                              for t in self.transitions),
            global_predicate=qualify(self.global_predicate, prefix),
            description=self.description,
        )


def valid_configs(m: FsmvMachine, budget: Optional[int] = None) -> List[Configuration]:
    """
    机器的全部有效配置 Π(ρ)

    Args:
        m: 状态机
        budget: 枚举上限

    Returns:
        按确定顺序排列的配置列表
    """
    return satisfying_assignments(m.global_predicate, m.variables, budget)


def check_valid(m: FsmvMachine, pi: Mapping[str, str]) -> Configuration:
    """确认 pi 是 m 的有效配置并返回规范化的 Configuration"""
    config = pi if isinstance(pi, Configuration) else Configuration(pi)
    config.check_total(m.variables)
    if not evaluate(m.global_predicate, config):
        raise ValidityError(f"{m.name}: 配置 {config!r} 不满足全局谓词")
    return config


def project(m: FsmvMachine, pi: Mapping[str, str], prune: bool = True, check: bool = True) -> Fsm:
    """
    变体投影 A↓π: 保留 π ⊨ g 的迁移并去掉守卫

    Args:
        m: 状态机
        pi: 有效配置
        prune: 是否删除不可达状态
        check: 是否检查配置有效性

    Returns:
        投影得到的 FSM，事件集保持为 m 的完整事件集
    """
    if check:
        pi = check_valid(m, pi)
    kept = tuple((t.src, t.event, t.dst) for t in m.transitions if compile_predicate(t.guard)(pi))
    fsm = Fsm(m.states, m.initial, m.events, kept)
    return fsm.pruned() if prune else fsm


def bounded_language(a: Fsm, k: int) -> FrozenSet[Word]:
    """
    长度不超过 k 的全部可执行事件序列

    Args:
        a: FSM
        k: 长度上界

    Returns:
        单词集合(前缀封闭)
    """
    if k < 0:
        raise ValueError("长度上界必须非负")
    words = {()}
    frontier: Dict[Word, FrozenSet[str]] = {(): frozenset((a.initial,))}
    for _ in range(k):
        nxt: Dict[Word, FrozenSet[str]] = {}
        for word, current in frontier.items():
            for event in a.events:
                targets = frozenset(dst for state in current for dst in a.step(state, event))
                if targets:
                    nxt[word + (event,)] = targets
        words.update(nxt)
        frontier = nxt
        if not frontier:
            break
    return frozenset(words)
