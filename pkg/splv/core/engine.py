"""
验证引擎 - 协调逐特性的一致性检查与整条产品线的判定
"""
import asyncio
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from splv.core.composition import compose_all, fold_mappings
from splv.core.conformance import ConformanceMapping, compute_conformance
from splv.core.machine import FsmvMachine
from splv.lang.predicate import Predicate, conj, satisfying_assignments
from splv.lang.variables import Configuration
from splv.qbf.cegar import solve_forall_exists
from splv.qbf.psi import PsiFeature, QbfFormula, build_psi
from splv.utils.config_loader import Settings
from splv.utils.errors import CapacityError, InternalError
from splv.utils.helpers import Stopwatch
from splv.utils.logger import get_logger

logger = get_logger("engine")

MODES = ("qbf", "enumerate", "monolithic")


@dataclass(frozen=True)
class FeaturePair:
    """一个特性的需求模型与设计模型，变量名未限定"""
    name: str
    requirement: FsmvMachine
    design: FsmvMachine


@dataclass(frozen=True)
class SplInstance:
    """
    待验证的产品线

    跨特性约束中的变量以 "特性名.变量名" 限定。
    """
    name: str
    features: Tuple[FeaturePair, ...]
    requirement_constraints: Tuple[Predicate, ...] = ()
    design_constraints: Tuple[Predicate, ...] = ()

    def feature(self, name: str) -> FeaturePair:
        for pair in self.features:
            if pair.name == name:
                return pair
        raise KeyError(name)


def shared_events(instance: SplInstance) -> FrozenSet[str]:
    """两个及以上特性共同使用的事件"""
    seen: Set[str] = set()
    shared: Set[str] = set()
    for pair in instance.features:
        events = set(pair.requirement.events) | set(pair.design.events)
        shared |= seen & events
        seen |= events
    return frozenset(shared)


def check_agreement(instance: SplInstance, agreed: Dict[str, bool]) -> None:
    """
    核对交叉验证的各模式结论

    组合判定 (qbf、enumerate) 之间必须一致，组合判定符合时整体判定也必须符合。
    特性共享事件时同步可能掩盖逐特性的失败，此时只有整体判定符合而组合判定不符合是允许的，记警告。

    Raises:
        InternalError: 结论矛盾
    """
    verdicts = {v for m, v in agreed.items() if m != "monolithic"}
    if len(verdicts) > 1:
        raise InternalError(f"各模式结论不一致: {agreed}")
    if "monolithic" not in agreed or not verdicts or verdicts == {agreed["monolithic"]}:
        return
    shared = shared_events(instance)
    if shared and agreed["monolithic"]:
        logger.warning(f"整体判定符合而组合判定不符合, 特性间共享事件 {sorted(shared)}")
        return
    raise InternalError(f"各模式结论不一致: {agreed}")


@dataclass
class FeatureOutcome:
    name: str
    mapping: ConformanceMapping
    seconds: float

    @property
    def conforms(self) -> bool:
        return self.mapping.conforms


@dataclass
class SplOutcome:
    """产品线判定结果；witness 为不一致时的组合设计配置"""
    mode: str
    conforms: bool
    witness: Optional[Configuration] = None
    refinements: int = 0
    sat_calls: int = 0
    clauses: int = 0
    seconds: float = 0.0
    agreed: Dict[str, bool] = field(default_factory=dict)


def psi_for(instance: SplInstance, mappings: Sequence[ConformanceMapping]) -> QbfFormula:
    """
    由各特性映射构造一致性公式 Ψ

    Args:
        instance: 产品线
        mappings: 与 instance.features 对应的映射(未限定)

    Returns:
        ∀∃ 公式
    """
    features = [PsiFeature(pair.name, mapping, pair.design.global_predicate, pair.requirement.global_predicate)
                for pair, mapping in zip(instance.features, mappings)]
    return build_psi(features, list(instance.design_constraints), list(instance.requirement_constraints))


def decide_qbf(instance: SplInstance, mappings: Sequence[ConformanceMapping], settings: Settings) -> SplOutcome:
    """构造 Ψ 并用 2QBF 求解器判定"""
    with Stopwatch() as watch:
        formula = psi_for(instance, mappings)
        verdict = solve_forall_exists(formula, settings.max_refinements, settings.split_components)
    logger.debug(f"{instance.name}: Ψ 拆为 {verdict.components} 个独立块, {verdict.refinements} 次细化")
    return SplOutcome("qbf", verdict.conforms, verdict.witness, verdict.refinements, verdict.sat_calls,
                      verdict.clauses, watch.seconds)


def decide_enumerate(instance: SplInstance, mappings: Sequence[ConformanceMapping],
                     settings: Settings) -> SplOutcome:
    """显式对映射做加法，组合映射中出现空像即不一致"""
    with Stopwatch() as watch:
        qualified = [m.qualified(pair.name) for pair, m in zip(instance.features, mappings)]
        total = fold_mappings(qualified, instance.design_constraints, instance.requirement_constraints,
                              budget=settings.enum_budget)
        failing = total.failing
    return SplOutcome("enumerate", not failing, failing[0] if failing else None, seconds=watch.seconds)


def _composite_config_count(machines: Sequence[FsmvMachine], constraints: Sequence[Predicate], budget: int) -> int:
    scope = [decl for m in machines for decl in m.variables]
    return len(satisfying_assignments(conj(*(m.global_predicate for m in machines), *constraints), scope, budget))


def decide_monolithic(instance: SplInstance, settings: Settings) -> SplOutcome:
    """组合全部设计与全部需求后直接做一次一致性检查，配置对数超出上限时在组合前报容量错误"""
    with Stopwatch() as watch:
        designs = [p.design.qualified(p.name) for p in instance.features]
        requirements = [p.requirement.qualified(p.name) for p in instance.features]
        # 组合前按配置对数检查容量
        pairs = (_composite_config_count(designs, instance.design_constraints, settings.enum_budget) *
                 _composite_config_count(requirements, instance.requirement_constraints, settings.enum_budget))
        if pairs > settings.monolithic_pair_budget:
            raise CapacityError(f"整体检查需要 {pairs} 个配置对，超出上限 {settings.monolithic_pair_budget}")
        # 两侧分别整体组合
        design = compose_all(designs, instance.design_constraints, name=f"{instance.name}_des",
                             budget=settings.enum_budget, check_consistency=False)
        requirement = compose_all(requirements, instance.requirement_constraints, name=f"{instance.name}_req",
                                  budget=settings.enum_budget, check_consistency=False)
        logger.debug(f"{instance.name}: 整体设计 {len(design.states)} 个状态, 需求 {len(requirement.states)} 个状态")
        mapping = compute_conformance(design, requirement, budget=settings.enum_budget, maximal=False,
                                      feature=instance.name)
        failing = mapping.failing
    return SplOutcome("monolithic", not failing, failing[0] if failing else None, seconds=watch.seconds)


class VerificationEngine:
    """验证引擎，逐特性检查并发执行，结果按特性顺序汇总"""

    def __init__(self, settings: Settings):
        """
        初始化验证引擎

        Args:
            settings: 运行参数
        """
        self.settings = settings
        self.jobs = max(1, settings.jobs)
        self.is_running = False
        self._executor: Optional[ThreadPoolExecutor] = None
        self._semaphore: Optional[asyncio.Semaphore] = None

    async def initialize(self) -> None:
        if self.is_running:
            logger.warning("引擎已经在运行中")
            return
        # 初始化线程池与并发限制
        self._executor = ThreadPoolExecutor(max_workers=self.jobs, thread_name_prefix="splv")
        self._semaphore = asyncio.Semaphore(self.jobs)
        self.is_running = True
        logger.debug(f"验证引擎已启动，并发数 {self.jobs}")

    async def shutdown(self) -> None:
        if not self.is_running:
            return
        self.is_running = False
        self._executor.shutdown(wait=True)
        self._executor = None
        logger.debug("验证引擎已关闭")

    async def __aenter__(self) -> "VerificationEngine":
        await self.initialize()
        return self

    async def __aexit__(self, *exc) -> None:
        await self.shutdown()

    async def _run(self, fn, *args):
        if not self.is_running:
            raise RuntimeError("引擎尚未初始化")
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(self._executor, fn, *args)

    def _check_feature_sync(self, pair: FeaturePair) -> FeatureOutcome:
        with Stopwatch() as watch:
            mapping = compute_conformance(pair.design, pair.requirement, budget=self.settings.enum_budget,
                                          feature=pair.name)
        return FeatureOutcome(pair.name, mapping, watch.seconds)

    async def check_feature(self, pair: FeaturePair) -> FeatureOutcome:
        """
        检查单个特性的设计是否符合需求

        Args:
            pair: 特性的需求与设计模型

        Returns:
            映射与耗时
        """
        async with self._semaphore:
            logger.debug(f"开始检查特性: {pair.name}")
            outcome = await self._run(self._check_feature_sync, pair)
        state = "符合" if outcome.conforms else f"不符合 ({len(outcome.mapping.failing)} 个失败配置)"
        logger.info(f"特性 {pair.name}: {state}, 用时 {outcome.seconds:.3f}s")
        return outcome

    async def check_features(self, pairs: Sequence[FeaturePair]) -> List[FeatureOutcome]:
        """并发检查全部特性，返回顺序与输入一致"""
        return list(await asyncio.gather(*(self.check_feature(p) for p in pairs)))

    async def decide(self, instance: SplInstance, outcomes: Sequence[FeatureOutcome], mode: str) -> SplOutcome:
        """
        按指定模式判定整条产品线

        Args:
            instance: 产品线
            outcomes: 逐特性结果
            mode: qbf、enumerate 或 monolithic

        Returns:
            判定结果
        """
        mappings = [o.mapping for o in outcomes]
        if mode == "qbf":
            return await self._run(decide_qbf, instance, mappings, self.settings)
        if mode == "enumerate":
            return await self._run(decide_enumerate, instance, mappings, self.settings)
        if mode == "monolithic":
            return await self._run(decide_monolithic, instance, self.settings)
        raise ValueError(f"未知的判定模式: {mode}")

    async def check_spl(self, instance: SplInstance, mode: str = "qbf", keep_going: bool = False,
                        cross_check: bool = False) -> Tuple[List[FeatureOutcome], SplOutcome]:
        """
        检查整条产品线

        有特性不符合且未设置 keep_going 时不再构造 Ψ，以 "feature" 模式报告不一致。
        cross_check 时依次运行 qbf、enumerate，以及在全部特性都符合时运行 monolithic，结论矛盾则报内部错误；
        次要模式超出容量时跳过。

        Args:
            instance: 产品线
            mode: 主判定模式
            keep_going: 特性不符合时是否继续判定
            cross_check: 是否交叉验证各模式

        Returns:
            (逐特性结果, 产品线结论)
        """
        logger.info(f"检查产品线 {instance.name}: {len(instance.features)} 个特性, 模式 {mode}")
        # 逐特性检查
        outcomes = await self.check_features(instance.features)
        failed = [o for o in outcomes if not o.conforms]
        if failed and not keep_going:
            first = failed[0]
            witness = Configuration((f"{first.name}.{k}", v) for k, v in first.mapping.failing[0].items())
            logger.info(f"{len(failed)} 个特性不符合，跳过产品线判定")
            return outcomes, SplOutcome("feature", False, witness,
                                        seconds=sum(o.seconds for o in outcomes))

        # 产品线判定
        result = await self.decide(instance, outcomes, mode)
        if cross_check:
            others = [m for m in MODES if m != mode and (m != "monolithic" or not failed)]
            result.agreed[mode] = result.conforms
            for other in others:
                try:
                    extra = await self.decide(instance, outcomes, other)
                except CapacityError as e:
                    logger.warning(f"交叉验证跳过 {other}: {e}")
                    continue
                result.agreed[other] = extra.conforms
                logger.info(f"交叉验证 {other}: {'符合' if extra.conforms else '不符合'}")
            check_agreement(instance, result.agreed)
        logger.info(f"产品线 {instance.name}: {'符合' if result.conforms else '不符合'} ({result.mode})")
        return outcomes, result
