#!/usr/bin/env python3
"""
splv 可扩展性脚本
在内存中生成若干规模的随机产品线，依次做逐特性检查、构造 Ψ 并求解，输出 QBF 变量数与耗时

使用方法:
1. 默认规模: python scripts/scalability.py
2. 指定规模: python scripts/scalability.py --features 10 100 1000 --seed 7
"""

import argparse
import asyncio
import os
import sys

# 添加项目根目录到Python路径
script_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(script_dir)
sys.path.insert(0, project_root)

try:
    from splv.core.engine import SplInstance, VerificationEngine, decide_qbf, psi_for
    from splv.qbf.formats import export_qdimacs
    from splv.utils.config_loader import load_settings
    from splv.utils.errors import SplvError
    from splv.utils.helpers import Stopwatch, format_seconds
    from splv.utils.logger import setup_logger
    from splv.workbench.generator import GeneratorOptions, generate_spl
except ImportError:
    print("无法导入splv模块，请确保当前目录正确")
    sys.exit(1)

logger = setup_logger("scalability")

HEADER = ("features", "qbf_vars", "clauses", "check_s", "qbf_s", "qdimacs_s", "verdict")


def parse_arguments():
    """解析命令行参数"""
    parser = argparse.ArgumentParser(description="splv 可扩展性测量")
    parser.add_argument("--config", type=str, default=None, help="配置文件路径")
    parser.add_argument("--features", type=int, nargs="+", default=[10, 100, 1000], help="产品线的特性数")
    parser.add_argument("--seed", type=int, default=0, help="生成器种子")
    parser.add_argument("--inject-bugs", type=float, default=0.0, help="设计缺陷注入概率")
    parser.add_argument("--skip-export", action="store_true", help="不测量 QDIMACS 导出")
    return parser.parse_args()


async def measure(instance: SplInstance, settings, export: bool) -> tuple:
    """测量一条产品线，返回一行结果"""
    async with VerificationEngine(settings) as engine:
        with Stopwatch() as check_watch:
            outcomes = await engine.check_features(instance.features)
    mappings = [o.mapping for o in outcomes]
    failed = sum(1 for o in outcomes if not o.conforms)
    if failed:
        logger.warning(f"{instance.name}: {failed} 个特性不符合，Ψ 的结论只作参考")

    verdict = decide_qbf(instance, mappings, settings)
    formula = psi_for(instance, mappings)
    qbf_vars = len(formula.universal) + len(formula.existential)

    export_seconds = 0.0
    if export:
        with Stopwatch() as export_watch:
            export_qdimacs(formula)
        export_seconds = export_watch.seconds

    return (str(len(instance.features)), str(qbf_vars), str(verdict.clauses), format_seconds(check_watch.seconds),
            format_seconds(verdict.seconds), format_seconds(export_seconds),
            "conforms" if verdict.conforms else "does not conform")


def main():
    """主函数"""
    args = parse_arguments()
    try:
        settings = load_settings(args.config)
    except (OSError, ValueError) as e:
        logger.critical(f"无法加载配置文件: {e}")
        return 2

    rows = [HEADER]
    for count in args.features:
        options = GeneratorOptions.from_settings(settings, count, seed=args.seed, inject_bugs=args.inject_bugs)
        try:
            instance = generate_spl(options)
            rows.append(asyncio.run(measure(instance, settings, not args.skip_export)))
        except SplvError as e:
            logger.error(f"{count} 个特性的测量失败: {e}")
            rows.append((str(count), "-", "-", "-", "-", "-", type(e).__name__))

    widths = [max(len(row[i]) for row in rows) for i in range(len(HEADER))]
    for row in rows:
        print("  ".join(cell.rjust(width) for cell, width in zip(row, widths)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
