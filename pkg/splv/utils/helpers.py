"""
辅助函数 - 提供通用工具函数
"""
import datetime
import time
from typing import Tuple


def get_current_timestamp() -> float:
    """
    获取当前时间戳

    Returns:
        当前时间戳(秒)
    """
    return time.time()


def format_timestamp(timestamp: float, fmt: str = "%Y-%m-%d %H:%M:%S") -> str:
    """
    格式化时间戳为可读字符串

    Args:
        timestamp: 时间戳(秒)
        fmt: 日期格式

    Returns:
        格式化后的日期时间字符串
    """
    return datetime.datetime.fromtimestamp(timestamp).strftime(fmt)


def format_seconds(value: float, decimals: int = 6) -> str:
    """
    格式化耗时为固定小数位数的字符串

    Args:
        value: 秒数
        decimals: 小数位数

    Returns:
        格式化后的字符串
    """
    return f"{value:.{decimals}f}"


def parse_range(text: str) -> Tuple[int, int]:
    """
    解析 "MIN:MAX" 或单个整数形式的区间

    Args:
        text: 区间字符串

    Returns:
        (最小值, 最大值)
    """
    if ":" in text:
        low, high = text.split(":", 1)
        lo, hi = int(low), int(high)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise ValueError(f"无效区间: {text}")
    return lo, hi


class Stopwatch:
    """计时上下文管理器，退出后 seconds 为经过的秒数"""

    def __init__(self):
        self.started = 0.0
        self.seconds = 0.0

    def __enter__(self) -> "Stopwatch":
        self.started = time.perf_counter()
        return self

    def __exit__(self, *exc) -> None:
        self.seconds = time.perf_counter() - self.started
