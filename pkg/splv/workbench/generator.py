"""
随机产品线生成器 - 按种子确定地生成特性的需求/设计模型对与清单

设计模型是需求在某个固定需求配置下的变体的子机器，因此每个设计配置至少映射到该配置，
逐特性一致性由构造保证；注入缺陷时按概率改写设计迁移的事件与目标状态。
"""
import random
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from splv.core.engine import FeaturePair, SplInstance
from splv.core.machine import FsmvMachine, Transition
from splv.lang.predicate import (
    TRUE, Iff, Implies, Predicate, conj, disj, eq, evaluate, neg, neq, satisfying_assignments,
)
from splv.lang.variables import VarDecl
from splv.storage.file_storage import FileStorage
from splv.utils.config_loader import Settings
from splv.utils.logger import get_logger
from splv.workbench.manifest import FeatureEntry, SplManifest, manifest_to_text
from splv.workbench.model_format import model_to_text

logger = get_logger("generator")

# 设计迁移保留的概率
_KEEP_PROBABILITY = 0.8
# 守卫非平凡的概率
_GUARD_PROBABILITY = 0.5
# ρ 非平凡的概率
_RHO_PROBABILITY = 0.3


@dataclass(frozen=True)
class GeneratorOptions:
    features: int
    seed: int = 0
    min_states: int = 3
    max_states: int = 8
    variables: int = 2
    domain_size: int = 2
    events: int = 3
    link_probability: float = 0.5
    inject_bugs: float = 0.0
    shared_events: bool = False
    random_constraints: bool = False

    def __post_init__(self):
        if self.features < 1:
            raise ValueError("特性数必须至少为 1")
        if not 1 <= self.min_states <= self.max_states:
            raise ValueError(f"状态数区间无效: {self.min_states}:{self.max_states}")
        if self.variables < 0 or self.domain_size < 1 or self.events < 1:
            raise ValueError("变量数、值域大小和事件数必须为正")
        for name in ("link_probability", "inject_bugs"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} 必须在 [0, 1] 内")

    @classmethod
    def from_settings(cls, settings: Settings, features: int, **overrides) -> "GeneratorOptions":
        base = cls(features=features, min_states=settings.min_states, max_states=settings.max_states,
                   variables=settings.variables, domain_size=settings.domain_size, events=settings.events,
                   link_probability=settings.link_probability)
        return replace(base, **{k: v for k, v in overrides.items() if v is not None})


def feature_names(count: int) -> List[str]:
    width = len(str(count))
    return [f"F{i:0{width}d}" for i in range(1, count + 1)]


class SplGenerator:
    """
    随机产品线生成器

    同一组选项总是产生相同的模型(相同的打印结果)。
    """

    def __init__(self, options: GeneratorOptions):
        self.options = options
        self.rng = random.Random(options.seed)
        self.domain = tuple(f"v{i}" for i in range(options.domain_size))

    def _scope(self, prefix: str) -> Tuple[VarDecl, ...]:
        return tuple(VarDecl(f"{prefix}{k}", self.domain) for k in range(self.options.variables))

    def _atom(self, scope: Sequence[VarDecl]) -> Predicate:
        decl = self.rng.choice(scope)
        value = self.rng.choice(decl.domain)
        if len(decl.domain) > 1 and self.rng.random() < 0.5:
            return neq(decl.name, value)
        return eq(decl.name, value)

    def _guard(self, scope: Sequence[VarDecl]) -> Predicate:
        if not scope or self.rng.random() >= _GUARD_PROBABILITY:
            return TRUE
        return self._atom(scope)

    def _rho(self, scope: Sequence[VarDecl]) -> Predicate:
        # 两个不同变量各排除一个取值组合，值域至少为 2 时总是一致
        if len(scope) < 2 or len(self.domain) < 2 or self.rng.random() >= _RHO_PROBABILITY:
            return TRUE
        first, second = self.rng.sample(list(scope), 2)
        return neg(conj(eq(first.name, self.rng.choice(self.domain)), eq(second.name, self.rng.choice(self.domain))))

    def _requirement(self, name: str, events: Tuple[str, ...]) -> FsmvMachine:
        opts = self.options
        count = self.rng.randint(opts.min_states, opts.max_states)
        states = tuple(f"s{i}" for i in range(count))
        scope = self._scope("r")
        transitions: List[Transition] = []
        # 生成树保证每个状态都可达
        for k in range(1, count):
            src = states[self.rng.randrange(k)]
            transitions.append(Transition(src, self.rng.choice(events), states[k], self._guard(scope)))
        for src in states:
            for event in events:
                if self.rng.random() < opts.link_probability:
                    transitions.append(Transition(src, event, self.rng.choice(states), self._guard(scope)))
        return FsmvMachine(f"{name}_req", states, states[0], events, scope, tuple(transitions), self._rho(scope),
                           description=f"generated requirement of feature {name} (seed {opts.seed})")

    def _design(self, name: str, req: FsmvMachine) -> FsmvMachine:
        opts = self.options
        configs = satisfying_assignments(req.global_predicate, req.variables)
        anchor = self.rng.choice(configs)
        scope = self._scope("d")
        transitions: List[Transition] = []
        for t in req.transitions:
            if not evaluate(t.guard, anchor) or self.rng.random() >= _KEEP_PROBABILITY:
                continue
            event, dst = t.event, t.dst
            if opts.inject_bugs > 0 and self.rng.random() < opts.inject_bugs:
                event = self.rng.choice(req.events)
                dst = self.rng.choice([s for s in req.states if s != t.dst] or [t.dst])
            transitions.append(Transition(t.src, event, dst, self._guard(scope)))
        return FsmvMachine(f"{name}_des", req.states, req.initial, req.events, scope, tuple(transitions),
                           self._rho(scope),
                           description=f"generated design of feature {name} (seed {opts.seed}), "
                                       f"refines requirement configuration {anchor.render() or '()'}")

    def _events(self, index: int, count: int) -> Tuple[str, ...]:
        events = [f"e{index}_{j}" for j in range(self.options.events)]
        if self.options.shared_events:
            if index > 1:
                events.append(f"h{index - 1}")
            if index < count:
                events.append(f"h{index}")
        return tuple(events)

    def _link(self, left: str, right: str, var: str) -> Predicate:
        a = eq(f"{left}.{var}", self.rng.choice(self.domain))
        b = eq(f"{right}.{var}", self.rng.choice(self.domain))
        shape = self.rng.randrange(3)
        if shape == 0:
            return Iff(a, b)
        if shape == 1:
            return Implies(a, b)
        return disj(a, b)

    def generate(self) -> SplInstance:
        """
        生成整条产品线

        Returns:
            产品线实例；设计侧相邻特性之间按 link_probability 加入蕴含约束，
            random_constraints 时两侧都随机抽取约束
        """
        opts = self.options
        names = feature_names(opts.features)
        pairs = []
        for index, name in enumerate(names, start=1):
            req = self._requirement(name, self._events(index, len(names)))
            pairs.append(FeaturePair(name, req, self._design(name, req)))

        des_constraints: List[Predicate] = []
        req_constraints: List[Predicate] = []
        if opts.variables > 0:
            for left, right in zip(names, names[1:]):
                if self.rng.random() >= opts.link_probability:
                    continue
                if opts.random_constraints:
                    des_constraints.append(self._link(left, right, "d0"))
                    req_constraints.append(self._link(left, right, "r0"))
                else:
                    des_constraints.append(Implies(eq(f"{left}.d0", self.domain[0]), eq(f"{right}.d0", self.domain[0])))
        instance = SplInstance(f"Gen{opts.features}s{opts.seed}", tuple(pairs), tuple(req_constraints),
                               tuple(des_constraints))
        logger.info(f"生成产品线 {instance.name}: {len(pairs)} 个特性, "
                    f"{len(des_constraints)} 条设计约束, {len(req_constraints)} 条需求约束")
        return instance


def generate_spl(options: GeneratorOptions) -> SplInstance:
    return SplGenerator(options).generate()


def write_spl(instance: SplInstance, out_dir: str, storage: Optional[FileStorage] = None) -> str:
    """
    把产品线写成模型文件与清单

    Args:
        instance: 产品线
        out_dir: 输出目录
        storage: 可选的文件存储

    Returns:
        清单文件路径
    """
    storage = storage or FileStorage(out_dir)
    entries = []
    for pair in instance.features:
        req_file, des_file = f"{pair.name}_req.fsmv", f"{pair.name}_des.fsmv"
        storage.write_text_sync(req_file, model_to_text(pair.requirement))
        storage.write_text_sync(des_file, model_to_text(pair.design))
        entries.append(FeatureEntry(pair.name, req_file, des_file))
    manifest = SplManifest(instance.name, tuple(entries), instance.requirement_constraints,
                           instance.design_constraints)
    path = storage.write_text_sync(f"{instance.name}.spl", manifest_to_text(manifest))
    logger.info(f"已写出 {len(entries)} 对模型与清单 {path}")
    return path
