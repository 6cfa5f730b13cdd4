#!/usr/bin/env python3
"""
splv - 带变异性的有限状态机产品线一致性验证工具
主入口文件
"""
import signal
import sys

from splv.utils.logger import setup_logger
from splv.workbench.cli import run

logger = setup_logger()


def signal_handler(sig, frame):
    """处理系统信号"""
    logger.info(f"接收到信号 {sig}，准备退出...")
    raise KeyboardInterrupt


if __name__ == "__main__":
    # 注册信号处理
    signal.signal(signal.SIGTERM, signal_handler)
    sys.exit(run())
