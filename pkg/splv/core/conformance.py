"""
一致性映射 - 逐对检查设计变体与需求变体的语言包含，构造映射 Φ
"""
import functools
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from splv.core.containment import Dfa, complete_and_determinize, contains_dfa
from splv.core.machine import Fsm, FsmvMachine, Word, project, valid_configs
from splv.lang.variables import Configuration, VarDecl
from splv.utils.logger import get_logger

logger = get_logger("conformance")


def render_config(config: Configuration) -> str:
    return config.render() or "()"


@dataclass(frozen=True)
class ConformanceMapping:
    """
    一致性映射 Φ: 有效设计配置 -> 语言包含成立的需求配置集合

    entries 按设计配置的枚举顺序排列，每个像按需求配置的枚举顺序排列。
    """
    feature: str
    design_scope: Tuple[VarDecl, ...]
    requirement_scope: Tuple[VarDecl, ...]
    entries: Tuple[Tuple[Configuration, Tuple[Configuration, ...]], ...]
    requirement_configs: Tuple[Configuration, ...] = ()
    counterexamples: Tuple[Tuple[Configuration, Word], ...] = ()
    maximal: bool = True

    @functools.cached_property
    def _index(self) -> Dict[Configuration, Tuple[Configuration, ...]]:
        return dict(self.entries)

    @property
    def design_configs(self) -> Tuple[Configuration, ...]:
        return tuple(pi for pi, _ in self.entries)

    def image(self, pi_d: Configuration) -> Tuple[Configuration, ...]:
        return self._index[pi_d]

    @property
    def failing(self) -> Tuple[Configuration, ...]:
        return tuple(pi for pi, image in self.entries if not image)

    @property
    def conforms(self) -> bool:
        return all(image for _, image in self.entries)

    @property
    def pair_count(self) -> int:
        return sum(len(image) for _, image in self.entries)

    def counterexample(self, pi_d: Configuration) -> Optional[Word]:
        for pi, word in self.counterexamples:
            if pi == pi_d:
                return word
        return None

    def qualified(self, prefix: str) -> "ConformanceMapping":
        """把所有配置和作用域的变量名加上 "prefix." 前缀"""
        def q(config: Configuration) -> Configuration:
            return Configuration((f"{prefix}.{name}", value) for name, value in config.items())

        return ConformanceMapping(
            feature=self.feature,
            design_scope=tuple(decl.qualified(prefix) for decl in self.design_scope),
            requirement_scope=tuple(decl.qualified(prefix) for decl in self.requirement_scope),
            entries=tuple((q(pi), tuple(q(r) for r in image)) for pi, image in self.entries),
            requirement_configs=tuple(q(r) for r in self.requirement_configs),
            counterexamples=tuple((q(pi), word) for pi, word in self.counterexamples),
            maximal=self.maximal,
        )

    def to_table(self) -> str:
        """
        导出为逐行文本表

        Returns:
            首行为摘要注释，之后每个设计配置一行
        """
        lines = [f"# mapping {self.feature}: {len(self.entries)} design configurations, {self.pair_count} pairs"]
        for pi, image in self.entries:
            targets = "; ".join(render_config(r) for r in image)
            lines.append(f"{render_config(pi)} -> {{{targets}}}")
        return "\n".join(lines) + "\n"


def compute_conformance(des: FsmvMachine, req: FsmvMachine, budget: Optional[int] = None,
                        executor: Optional[Executor] = None, maximal: bool = True,
                        feature: Optional[str] = None) -> ConformanceMapping:
    """
    对每对有效配置 (π_d, π_r) 检查 L(des↓π_d) ⊆ L(req↓π_r)

    相同的投影只确定化或检查一次；结果按枚举顺序组装，与执行顺序无关。

    Args:
        des: 设计状态机
        req: 需求状态机
        budget: 配置枚举上限
        executor: 可选的线程池，逐行并发检查
        maximal: 为 False 时每个设计配置找到第一个匹配即停止
        feature: 特性名，默认取设计机器名

    Returns:
        一致性映射
    """
    # 枚举两侧有效配置
    design_configs = valid_configs(des, budget)
    requirement_configs = valid_configs(req, budget)
    alphabet = set(des.events) | set(req.events)

    # 需求投影确定化，相同投影共享一个 DFA
    dfa_cache: Dict[Fsm, Dfa] = {}
    req_dfas: List[Dfa] = []
    for pi_r in requirement_configs:
        proj = project(req, pi_r, check=False)
        if proj not in dfa_cache:
            dfa_cache[proj] = complete_and_determinize(proj, alphabet)
        req_dfas.append(dfa_cache[proj])

    design_projs = [project(des, pi_d, check=False) for pi_d in design_configs]
    unique = list(dict.fromkeys(design_projs))
    logger.debug(f"{feature or des.name}: {len(design_configs)} 个设计配置({len(unique)} 个不同变体), "
                 f"{len(requirement_configs)} 个需求配置({len(dfa_cache)} 个不同变体)")

    def check_row(d: Fsm) -> Tuple[List[int], Optional[Word]]:
        verdicts = {}
        image: List[int] = []
        shortest: Optional[Word] = None
        for i, dfa in enumerate(req_dfas):
            verdict = verdicts.get(id(dfa))
            if verdict is None:
                verdict = verdicts[id(dfa)] = contains_dfa(d, dfa)
            if verdict.holds:
                image.append(i)
                if not maximal:
                    break
            elif shortest is None or len(verdict.counterexample) < len(shortest):
                shortest = verdict.counterexample
        return image, (None if image else shortest)

    # 每个不同的设计投影检查一行
    if executor is not None:
        rows = list(executor.map(check_row, unique))
    else:
        rows = [check_row(d) for d in unique]
    by_projection = dict(zip(unique, rows))

    # 按设计配置的枚举顺序组装映射
    entries = []
    counterexamples = []
    for pi_d, proj in zip(design_configs, design_projs):
        image, shortest = by_projection[proj]
        entries.append((pi_d, tuple(requirement_configs[i] for i in image)))
        if not image:
            counterexamples.append((pi_d, shortest))

    return ConformanceMapping(
        feature=feature or des.name,
        design_scope=des.variables,
        requirement_scope=req.variables,
        entries=tuple(entries),
        requirement_configs=tuple(requirement_configs),
        counterexamples=tuple(counterexamples),
        maximal=maximal,
    )


def mapping_from_pairs(feature: str, design_scope: Sequence[VarDecl], requirement_scope: Sequence[VarDecl],
                       design_configs: Sequence[Configuration], requirement_configs: Sequence[Configuration],
                       pairs) -> ConformanceMapping:
    """
    由显式的 (π_d, π_r) 对构造映射，未出现的设计配置像为空

    Args:
        feature: 特性名
        design_scope: 设计变量
        requirement_scope: 需求变量
        design_configs: 全部有效设计配置
        requirement_configs: 全部有效需求配置
        pairs: 可迭代的配置对

    Returns:
        一致性映射
    """
    wanted: Dict[Configuration, set] = {pi: set() for pi in design_configs}
    for pi_d, pi_r in pairs:
        wanted[pi_d].add(pi_r)
    entries = tuple(
        (pi, tuple(r for r in requirement_configs if r in wanted[pi])) for pi in design_configs
    )
    return ConformanceMapping(feature, tuple(design_scope), tuple(requirement_scope), entries,
                              tuple(requirement_configs))
