"""
并行组合 - FSMv 的握手组合、配置代数、一致性映射加法与交错(shuffle)语义
"""
import itertools
from collections import defaultdict, deque
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from splv.core.conformance import ConformanceMapping
from splv.core.machine import Fsm, FsmvMachine, Transition, Word
from splv.lang.predicate import (
    TRUE, Predicate, check_scope, compile_predicate, conj, evaluate, is_consistent, satisfying_assignments, variables,
)
from splv.lang.variables import Configuration, VarDecl, scope_index, scope_size
from splv.utils.config_loader import env_enum_budget
from splv.utils.errors import CapacityError, CompositionError, ScopeError
from splv.utils.logger import get_logger

logger = get_logger("composition")


def pair_state(s1: str, s2: str) -> str:
    return f"({s1},{s2})"


class _ConsistencyOracle:
    """
    判定守卫与全局谓词 ρ 的合取是否可满足，结果按守卫缓存

    有效配置在预算内时预先枚举，否则逐个守卫交给 SAT。
    """

    def __init__(self, rho: Predicate, scope: Sequence[VarDecl], budget: Optional[int] = None,
                 enum_limit: int = 4096):
        self.rho = rho
        self.scope = list(scope)
        self.enum_limit = enum_limit
        self.cache: Dict[Predicate, bool] = {}
        self.valid: Optional[List[Configuration]] = None
        try:
            self.valid = satisfying_assignments(rho, self.scope, budget)
        except CapacityError:
            logger.debug(f"组合配置空间过大({scope_size(self.scope)})，改用 SAT 判定守卫一致性")

    def rho_consistent(self) -> bool:
        if self.valid is not None:
            return bool(self.valid)
        return is_consistent(self.rho, self.scope, enum_limit=self.enum_limit)

    def __call__(self, guard: Predicate) -> bool:
        cached = self.cache.get(guard)
        if cached is None:
            if self.valid is not None:
                test = compile_predicate(guard)
                cached = any(test(pi) for pi in self.valid)
            else:
                cached = is_consistent(conj(guard, self.rho), self.scope, enum_limit=self.enum_limit)
            self.cache[guard] = cached
        return cached


def compose(a1: FsmvMachine, a2: FsmvMachine, rho12: Predicate = TRUE, name: Optional[str] = None,
            check_consistency: bool = True, budget: Optional[int] = None) -> FsmvMachine:
    """
    并行组合 A1 ∥ A2

    共享事件同步(守卫取 g1 ∧ g2)，私有事件交错；只保留守卫与组合后 ρ 一致的迁移，
    状态空间限于从 (q1, q2) 可达的部分。

    Args:
        a1: 第一个状态机
        a2: 第二个状态机，变量名须与 a1 不相交
        rho12: 组合谓词，作用于两侧变量
        name: 结果机器名，默认 "A1||A2"
        check_consistency: 是否检查 ρ12 ∧ ρ1 ∧ ρ2 一致
        budget: 组合配置空间的枚举上限

    Returns:
        组合后的状态机，全局谓词为 ρ12 ∧ ρ1 ∧ ρ2
    """
    clash = set(a1.variable_names) & set(a2.variable_names)
    if clash:
        raise CompositionError(f"{a1.name} 与 {a2.name} 的变量名冲突: {sorted(clash)}")
    variables_ = a1.variables + a2.variables
    try:
        check_scope(rho12, variables_)
    except ScopeError as e:
        raise CompositionError(f"组合谓词越界: {e}") from e
    rho = conj(rho12, a1.global_predicate, a2.global_predicate)

    consistent = _ConsistencyOracle(rho, variables_, budget)
    if check_consistency and not consistent.rho_consistent():
        raise CompositionError(f"{a1.name} 与 {a2.name} 的组合谓词不一致")

    # 按源状态索引两侧迁移
    shared = set(a1.events) & set(a2.events)
    out1: Dict[str, List[Transition]] = defaultdict(list)
    out2: Dict[str, List[Transition]] = defaultdict(list)
    for t in a1.transitions:
        out1[t.src].append(t)
    for t in a2.transitions:
        out2[t.src].append(t)

    # 从初始状态对出发只展开可达部分
    start = (a1.initial, a2.initial)
    seen = {start}
    order = [start]
    queue = deque([start])
    transitions: List[Transition] = []

    def emit(src, event, dst, guard):
        if not consistent(guard):
            return
        transitions.append(Transition(pair_state(*src), event, pair_state(*dst), guard))
        if dst not in seen:
            seen.add(dst)
            order.append(dst)
            queue.append(dst)

    while queue:
        s1, s2 = node = queue.popleft()
        for t1 in out1[s1]:
            # 共享事件同步，私有事件交错
            if t1.event in shared:
                for t2 in out2[s2]:
                    if t2.event == t1.event:
                        emit(node, t1.event, (t1.dst, t2.dst), conj(t1.guard, t2.guard))
            else:
                emit(node, t1.event, (t1.dst, s2), t1.guard)
        for t2 in out2[s2]:
            if t2.event not in shared:
                emit(node, t2.event, (s1, t2.dst), t2.guard)

    events = a1.events + tuple(e for e in a2.events if e not in shared)
    logger.debug(f"组合 {a1.name} || {a2.name}: {len(order)} 个可达状态, {len(transitions)} 条迁移, "
                 f"握手事件 {sorted(shared)}")
    return FsmvMachine(
        name=name or f"{a1.name}||{a2.name}",
        states=tuple(pair_state(*s) for s in order),
        initial=pair_state(*start),
        events=events,
        variables=variables_,
        transitions=tuple(transitions),
        global_predicate=rho,
    )


def schedule_constraints(scopes: Sequence[Iterable[str]], constraints: Sequence[Predicate]) -> List[List[Predicate]]:
    """
    为左折叠的每一步分配约束: 约束在其变量首次全部出现的那一步施加

    Args:
        scopes: 各个组件的变量名
        constraints: 跨组件约束

    Returns:
        与 scopes 等长的列表，第 i 项为在并入第 i 个组件时施加的约束
    """
    steps: List[List[Predicate]] = [[] for _ in scopes]
    for constraint in constraints:
        needed = variables(constraint)
        covered = set()
        for i, scope in enumerate(scopes):
            covered |= set(scope)
            if needed <= covered:
                steps[i].append(constraint)
                break
        else:
            raise ScopeError(f"约束引用了未声明的变量: {sorted(needed - covered)}")
    return steps


def compose_all(machines: Sequence[FsmvMachine], constraints: Sequence[Predicate] = (),
                name: Optional[str] = None, budget: Optional[int] = None,
                check_consistency: bool = True) -> FsmvMachine:
    """
    n 元组合: 两两左折叠，跨特性约束在其变量首次齐备时并入组合谓词

    Args:
        machines: 已限定变量名的状态机
        constraints: 跨特性约束
        name: 结果机器名
        budget: 组合配置空间的枚举上限
        check_consistency: 是否要求每一步的组合谓词一致

    Returns:
        组合后的状态机
    """
    if not machines:
        raise CompositionError("没有可组合的状态机")
    try:
        steps = schedule_constraints([m.variable_names for m in machines], constraints)
    except ScopeError as e:
        raise CompositionError(str(e)) from e
    acc = machines[0]
    if len(machines) == 1:
        extra = conj(*steps[0])
        if extra == TRUE:
            return acc
        return FsmvMachine(name or acc.name, acc.states, acc.initial, acc.events, acc.variables,
                           acc.transitions, conj(extra, acc.global_predicate))
    # 第一个组件自身就能覆盖的约束并入第一步
    pending = steps[0]
    for i, machine in enumerate(machines[1:], start=1):
        acc = compose(acc, machine, conj(*pending, *steps[i]), check_consistency=check_consistency, budget=budget)
        pending = []
    if name:
        acc = FsmvMachine(name, acc.states, acc.initial, acc.events, acc.variables,
                          acc.transitions, acc.global_predicate)
    return acc


def compose_configs(pi1: Configuration, pi2: Configuration, rho: Predicate = TRUE) -> Optional[Configuration]:
    """
    配置加法 π1 + π2

    Args:
        pi1: 第一个组件的有效配置
        pi2: 第二个组件的有效配置
        rho: 组合后的全局谓词

    Returns:
        满足 rho 时为合并后的配置，否则为 None
    """
    merged = pi1.merge(pi2)
    return merged if evaluate(rho, merged) else None


def decompose_config(pi: Configuration, scopes: Tuple[Sequence[VarDecl], Sequence[VarDecl]]
                     ) -> Tuple[Configuration, Configuration]:
    """把组合配置拆成两个组件上的限制"""
    first, second = scopes
    return pi.restrict(d.name for d in first), pi.restrict(d.name for d in second)


def add_mappings(phi1: ConformanceMapping, phi2: ConformanceMapping, rho_d: Predicate = TRUE,
                 rho_r: Predicate = TRUE, budget: Optional[int] = None,
                 feature: Optional[str] = None) -> ConformanceMapping:
    """
    一致性映射加法 Φ1 + Φ2

    组件像为空时组合像也为空，非一致性得以传播。

    Args:
        phi1: 第一个特性的映射(变量已限定)
        phi2: 第二个特性的映射(变量已限定)
        rho_d: 设计侧组合谓词
        rho_r: 需求侧组合谓词
        budget: 组合设计配置数的上限
        feature: 结果特性名

    Returns:
        组合设计配置到组合需求配置集合的映射
    """
    limit = budget if budget is not None else env_enum_budget()
    size = len(phi1.entries) * len(phi2.entries)
    if size > limit:
        raise CapacityError(f"组合设计配置空间 {size} 超出枚举预算 {limit}")
    design_scope = phi1.design_scope + phi2.design_scope
    requirement_scope = phi1.requirement_scope + phi2.requirement_scope
    try:
        check_scope(rho_d, design_scope)
        check_scope(rho_r, requirement_scope)
    except ScopeError as e:
        raise CompositionError(f"组合谓词越界: {e}") from e
    test_d = compile_predicate(rho_d)
    test_r = compile_predicate(rho_r)

    entries = []
    for pi_d1, image1 in phi1.entries:
        for pi_d2, image2 in phi2.entries:
            pi_d = pi_d1.merge(pi_d2)
            if not test_d(pi_d):
                continue
            # 像为两侧像的积，再按 rho_r 过滤
            image = []
            for pi_r1, pi_r2 in itertools.product(image1, image2):
                pi_r = pi_r1.merge(pi_r2)
                if test_r(pi_r):
                    image.append(pi_r)
            entries.append((pi_d, tuple(image)))
    return ConformanceMapping(
        feature=feature or f"{phi1.feature}+{phi2.feature}",
        design_scope=design_scope,
        requirement_scope=requirement_scope,
        entries=tuple(entries),
        maximal=phi1.maximal and phi2.maximal,
    )


def fold_mappings(mappings: Sequence[ConformanceMapping], des_constraints: Sequence[Predicate] = (),
                  req_constraints: Sequence[Predicate] = (), budget: Optional[int] = None) -> ConformanceMapping:
    """
    对多个(已限定的)映射左折叠做加法，约束在其变量首次齐备时施加

    Args:
        mappings: 各特性的映射
        des_constraints: 设计侧跨特性约束
        req_constraints: 需求侧跨特性约束
        budget: 组合设计配置数的上限

    Returns:
        整条产品线的组合映射
    """
    if not mappings:
        raise CompositionError("没有可相加的映射")
    try:
        des_steps = schedule_constraints([[d.name for d in m.design_scope] for m in mappings], des_constraints)
        req_steps = schedule_constraints([[d.name for d in m.requirement_scope] for m in mappings], req_constraints)
    except ScopeError as e:
        raise CompositionError(str(e)) from e
    unit = ConformanceMapping("", (), (), ((Configuration(), (Configuration(),)),))
    acc = unit
    for i, mapping in enumerate(mappings):
        acc = add_mappings(acc, mapping, conj(*des_steps[i]), conj(*req_steps[i]), budget=budget,
                           feature=mapping.feature if i == 0 else f"{acc.feature}+{mapping.feature}")
    return acc


def handshake_product(f1: Fsm, f2: Fsm) -> Fsm:
    """
    两个 FSM 的握手积: 公共事件同步，其余事件交错

    Args:
        f1: 第一个 FSM
        f2: 第二个 FSM

    Returns:
        只含可达状态的积 FSM
    """
    shared = set(f1.events) & set(f2.events)
    start = (f1.initial, f2.initial)
    seen = {start}
    order = [start]
    queue = deque([start])
    transitions = []
    events = f1.events + tuple(e for e in f2.events if e not in set(f1.events))
    while queue:
        s1, s2 = node = queue.popleft()
        for event in events:
            if event in shared:
                targets = [(d1, d2) for d1 in f1.step(s1, event) for d2 in f2.step(s2, event)]
            elif event in f1.events:
                targets = [(d1, s2) for d1 in f1.step(s1, event)]
            else:
                targets = [(s1, d2) for d2 in f2.step(s2, event)]
            for dst in targets:
                transitions.append((pair_state(*node), event, pair_state(*dst)))
                if dst not in seen:
                    seen.add(dst)
                    order.append(dst)
                    queue.append(dst)
    return Fsm(tuple(pair_state(*s) for s in order), pair_state(*start), events, tuple(transitions))


def project_word(word: Sequence[str], alphabet: Iterable[str]) -> Word:
    """w↓Σ: 保留属于 Σ 的事件"""
    keep = set(alphabet)
    return tuple(e for e in word if e in keep)


def shuffle_words(words: Sequence[Sequence[str]], alphabets: Sequence[Iterable[str]]) -> Set[Word]:
    """
    异步交错 u1 ∥ ... ∥ un = { w | 对每个 i，w↓Σi = ui }

    Args:
        words: 各组件的单词(字符串按字符视为事件序列)
        alphabets: 各组件的字母表

    Returns:
        单词集合
    """
    if len(words) != len(alphabets):
        raise ValueError("单词数与字母表数不一致")
    us = [tuple(w) for w in words]
    sigmas = [frozenset(a) for a in alphabets]
    for u, sigma in zip(us, sigmas):
        if not set(u) <= sigma:
            raise ValueError(f"单词 {''.join(u)} 不在其字母表上")
    union = sorted(frozenset().union(*sigmas)) if sigmas else []
    owners = {e: [i for i, s in enumerate(sigmas) if e in s] for e in union}
    memo: Dict[Tuple[int, ...], Set[Word]] = {}

    def suffixes(pos: Tuple[int, ...]) -> Set[Word]:
        if pos in memo:
            return memo[pos]
        if all(p == len(u) for p, u in zip(pos, us)):
            result = {()}
        else:
            result = set()
            for e in union:
                if all(pos[i] < len(us[i]) and us[i][pos[i]] == e for i in owners[e]):
                    nxt = list(pos)
                    for i in owners[e]:
                        nxt[i] += 1
                    result.update((e,) + rest for rest in suffixes(tuple(nxt)))
        memo[pos] = result
        return result

    return suffixes(tuple(0 for _ in us))


def shuffle_languages(languages: Sequence[Iterable[Sequence[str]]], alphabets: Sequence[Iterable[str]]) -> Set[Word]:
    """语言的交错: 各语言任取一个单词做交错后取并"""
    sigmas = [frozenset(a) for a in alphabets]
    result: Set[Word] = set()
    for combo in itertools.product(*[list(lang) for lang in languages]):
        result |= shuffle_words(combo, sigmas)
    return result
