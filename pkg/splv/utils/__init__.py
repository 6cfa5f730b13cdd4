"""
工具函数模块 - 提供项目中使用的各种工具函数
"""

from splv.utils.config_loader import load_config, load_settings, Settings
from splv.utils.logger import setup_logger, get_logger, set_log_level
from splv.utils.helpers import (
    format_timestamp,
    format_seconds,
    get_current_timestamp,
    parse_range,
    Stopwatch,
)

__all__ = [
    "load_config",
    "load_settings",
    "Settings",
    "setup_logger",
    "get_logger",
    "set_log_level",
    "format_timestamp",
    "format_seconds",
    "get_current_timestamp",
    "parse_range",
    "Stopwatch",
]
