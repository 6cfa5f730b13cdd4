"""
命令行 - check-feature、check-spl、gen、report、export 五个子命令

退出码: 0 符合，1 不符合，2 用法/解析/模型错误，3 内部错误，4 超出容量上限。
"""
import argparse
import asyncio
import dataclasses
import os
import sys
from typing import List, Optional, Sequence

from splv import __version__
from splv.core.conformance import ConformanceMapping, render_config
from splv.core.engine import MODES, FeaturePair, SplInstance, VerificationEngine, psi_for
from splv.core.promela import emit_promela
from splv.qbf.formats import export_qcir, export_qdimacs
from splv.storage.file_storage import FileStorage
from splv.storage.report_store import ReportStore
from splv.utils.config_loader import Settings, load_settings
from splv.utils.errors import CapacityError, InternalError, SplvError
from splv.utils.helpers import parse_range
from splv.utils.logger import get_logger, set_log_level, setup_file_logging
from splv.workbench.generator import GeneratorOptions, generate_spl, write_spl
from splv.workbench.manifest import instantiate, load_manifest
from splv.workbench.model_format import load_model, model_to_text
from splv.workbench.report import REPORT_FORMATS, build_report, render, render_text

logger = get_logger("cli")

EXIT_CONFORMS = 0
EXIT_NONCONFORMING = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3
EXIT_CAPACITY = 4


def exit_code_for(error: BaseException) -> int:
    """异常到退出码的映射"""
    if isinstance(error, CapacityError):
        return EXIT_CAPACITY
    if isinstance(error, InternalError):
        return EXIT_INTERNAL
    if isinstance(error, (SplvError, OSError, ValueError)):
        return EXIT_USAGE
    return EXIT_INTERNAL


def _verdict_code(conforms: bool) -> int:
    return EXIT_CONFORMS if conforms else EXIT_NONCONFORMING


def _write(path: str, content: str) -> None:
    """写文件，"-" 表示标准输出"""
    if path == "-":
        sys.stdout.write(content)
        return
    written = FileStorage().write_text_sync(path, content)
    logger.info(f"已写入 {written}")


def _export_qbf(path: str, instance: SplInstance, mappings: Sequence[ConformanceMapping]) -> None:
    formula = psi_for(instance, mappings)
    text = export_qcir(formula) if path.endswith(".qcir") else export_qdimacs(formula)
    _write(path, text)


def _print_counterexamples(mapping: ConformanceMapping) -> None:
    for pi in mapping.failing:
        word = mapping.counterexample(pi)
        trace = " ".join(word) if word else "(ε)"
        print(f"counterexample {render_config(pi)}: {trace}")


def _feature_pair(req_path: str, des_path: str, name: Optional[str], settings: Settings) -> FeaturePair:
    requirement = load_model(req_path, enum_limit=settings.consistency_enum_limit)
    design = load_model(des_path, enum_limit=settings.consistency_enum_limit)
    return FeaturePair(name or design.name.split(".")[0], requirement, design)


async def _save_report(args, settings: Settings, report) -> None:
    store = ReportStore(settings.data_dir)
    if args.report:
        await store.save_async(args.report, report)
    if args.archive:
        store.archive_report(report)


async def cmd_check_feature(args, settings: Settings) -> int:
    pair = _feature_pair(args.requirement, args.design, args.name, settings)
    async with VerificationEngine(settings) as engine:
        outcome = await engine.check_feature(pair)
    mapping = outcome.mapping
    if args.promela:
        _write(args.promela, emit_promela(pair.design, pair.requirement))
    if args.mapping:
        _write(args.mapping, mapping.to_table())
    report = build_report(pair.name, [outcome])
    sys.stdout.write(render_text(report))
    _print_counterexamples(mapping)
    await _save_report(args, settings, report)
    return _verdict_code(mapping.conforms)


async def cmd_check_spl(args, settings: Settings) -> int:
    manifest = load_manifest(args.manifest)
    instance = instantiate(manifest, enum_limit=settings.consistency_enum_limit)
    async with VerificationEngine(settings) as engine:
        outcomes, spl = await engine.check_spl(instance, mode=args.mode, keep_going=args.keep_going,
                                               cross_check=args.cross_check)
    if args.export_qbf:
        _export_qbf(args.export_qbf, instance, [o.mapping for o in outcomes])
    if args.mapping:
        _write(args.mapping, "".join(o.mapping.to_table() for o in outcomes))
    report = build_report(instance.name, outcomes, spl)
    sys.stdout.write(render_text(report))
    if spl.witness is not None:
        print(f"witness: {render_config(spl.witness)}")
    await _save_report(args, settings, report)
    return _verdict_code(spl.conforms)


def cmd_generate(args, settings: Settings) -> int:
    overrides = dict(seed=args.seed, inject_bugs=args.inject_bugs, shared_events=args.shared_events,
                     random_constraints=args.random_constraints, domain_size=args.domain_size,
                     variables=args.variables, events=args.events)
    if args.states:
        overrides["min_states"], overrides["max_states"] = parse_range(args.states)
    options = GeneratorOptions.from_settings(settings, args.count, **overrides)
    path = write_spl(generate_spl(options), args.out)
    print(path)
    return EXIT_CONFORMS


def cmd_report(args, settings: Settings) -> int:
    store = ReportStore(settings.data_dir)
    if args.list:
        for name in store.list_archived():
            print(name)
        return EXIT_CONFORMS
    if not args.path:
        raise ValueError("需要报告路径或归档名")
    report = store.load(args.path)
    sys.stdout.write(render(report, args.format))
    return EXIT_CONFORMS


async def cmd_export(args, settings: Settings) -> int:
    if len(args.inputs) == 1:
        instance = instantiate(load_manifest(args.inputs[0]), enum_limit=settings.consistency_enum_limit)
    elif len(args.inputs) == 2:
        pair = _feature_pair(args.inputs[0], args.inputs[1], args.name, settings)
        instance = SplInstance(pair.name, (pair,))
    else:
        raise ValueError("export 需要一个清单，或者需求与设计两个模型")

    if args.promela:
        if len(instance.features) == 1:
            pair = instance.features[0]
            _write(args.promela, emit_promela(pair.design, pair.requirement))
        else:
            storage = FileStorage(args.promela)
            for pair in instance.features:
                storage.write_text_sync(f"{pair.name}.pml", emit_promela(pair.design, pair.requirement))
            logger.info(f"已写出 {len(instance.features)} 个 Promela 模型到 {args.promela}")
    if args.normalize:
        storage = FileStorage(args.normalize)
        for pair in instance.features:
            storage.write_text_sync(f"{pair.name}_req.fsmv", model_to_text(pair.requirement))
            storage.write_text_sync(f"{pair.name}_des.fsmv", model_to_text(pair.design))
        logger.info(f"已写出规范化模型到 {args.normalize}")
    if args.mapping or args.qbf:
        async with VerificationEngine(settings) as engine:
            outcomes = await engine.check_features(instance.features)
        mappings = [o.mapping for o in outcomes]
        if args.mapping:
            _write(args.mapping, "".join(m.to_table() for m in mappings))
        if args.qbf:
            _export_qbf(args.qbf, instance, mappings)
    return EXIT_CONFORMS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splv", description="带变异性的有限状态机产品线一致性验证")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="YAML 配置文件")
    parser.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    parser.add_argument("--log-file", help="额外写入的日志文件")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-feature", help="检查单个特性的设计是否符合需求")
    p.add_argument("requirement", help="需求模型文件")
    p.add_argument("design", help="设计模型文件")
    p.add_argument("--name", help="特性名，默认取设计模型名")
    p.add_argument("--promela", metavar="PATH", help="同时导出 Promela 模型")
    p.add_argument("--mapping", metavar="PATH", help="导出一致性映射表(- 为标准输出)")
    p.add_argument("--report", metavar="PATH", help="写出报告(.json 或 kv)")
    p.add_argument("--archive", action="store_true", help="把报告归档到数据目录")
    p.add_argument("--jobs", type=int, help="并发数")

    p = sub.add_parser("check-spl", help="组合式检查整条产品线")
    p.add_argument("manifest", help="产品线清单")
    p.add_argument("--mode", choices=MODES, default="qbf", help="判定方式")
    p.add_argument("--keep-going", action="store_true", help="有特性不符合时仍判定产品线")
    p.add_argument("--cross-check", action="store_true", help="交叉验证全部判定方式")
    p.add_argument("--export-qbf", metavar="PATH", help="导出 Ψ (.qdimacs 或 .qcir)")
    p.add_argument("--mapping", metavar="PATH", help="导出各特性的一致性映射表")
    p.add_argument("--report", metavar="PATH", help="写出报告(.json 或 kv)")
    p.add_argument("--archive", action="store_true", help="把报告归档到数据目录")
    p.add_argument("--jobs", type=int, help="并发数")

    p = sub.add_parser("gen", help="生成随机产品线")
    p.add_argument("count", type=int, help="特性数")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", default="generated", help="输出目录")
    p.add_argument("--inject-bugs", type=float, metavar="P", help="以概率 P 改写设计迁移")
    p.add_argument("--shared-events", action="store_true", default=None, help="相邻特性共享握手事件")
    p.add_argument("--random-constraints", action="store_true", default=None, help="两侧随机抽取组合约束")
    p.add_argument("--states", metavar="MIN:MAX", help="每个模型的状态数区间")
    p.add_argument("--domain-size", type=int)
    p.add_argument("--variables", type=int)
    p.add_argument("--events", type=int)

    p = sub.add_parser("report", help="渲染保存的报告")
    p.add_argument("path", nargs="?", help="报告文件或归档名")
    p.add_argument("--format", choices=REPORT_FORMATS, default="text")
    p.add_argument("--list", action="store_true", help="列出归档的报告")

    p = sub.add_parser("export", help="导出 Promela、映射表、QBF 实例或规范化模型")
    p.add_argument("inputs", nargs="+", help="一个清单，或需求与设计两个模型")
    p.add_argument("--name", help="两个模型时的特性名")
    p.add_argument("--promela", metavar="PATH", help="Promela 文件(清单时为目录)")
    p.add_argument("--mapping", metavar="PATH")
    p.add_argument("--qbf", metavar="PATH", help=".qdimacs 或 .qcir")
    p.add_argument("--normalize", metavar="DIR", help="重新打印的模型目录")
    return parser


def _configure(args) -> Settings:
    settings = load_settings(args.config)
    if getattr(args, "jobs", None):
        settings = dataclasses.replace(settings, jobs=max(1, args.jobs))
    set_log_level("DEBUG" if args.verbose else os.environ.get("SPLV_LOG_LEVEL", settings.log_level))
    log_file = args.log_file or settings.log_file
    if log_file:
        setup_file_logging(log_file)
    return settings


def run(argv: Optional[List[str]] = None) -> int:
    """
    命令行入口

    Args:
        argv: 参数列表，默认取 sys.argv[1:]

    Returns:
        退出码
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _configure(args)
        if args.command == "check-feature":
            return asyncio.run(cmd_check_feature(args, settings))
        if args.command == "check-spl":
            return asyncio.run(cmd_check_spl(args, settings))
        if args.command == "gen":
            return cmd_generate(args, settings)
        if args.command == "report":
            return cmd_report(args, settings)
        return asyncio.run(cmd_export(args, settings))
    except KeyboardInterrupt:
        logger.info("收到中断信号，退出")
        return EXIT_INTERNAL
    except (SplvError, OSError, ValueError) as e:
        code = exit_code_for(e)
        logger.error(f"{args.command} 失败: {e}")
        logger.debug("详细信息", exc_info=True)
        return code
    except Exception as e:
        logger.error(f"{args.command} 出现未处理异常: {e}", exc_info=True)
        return EXIT_INTERNAL
