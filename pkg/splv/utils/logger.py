"""
日志配置 - 配置项目日志记录
"""
import os
import sys
import logging
import logging.handlers
from typing import Dict, Optional

import colorlog

# 全局日志记录器字典
_loggers: Dict[str, logging.Logger] = {}

_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"
_DATEFMT = "%Y-%m-%d %H:%M:%S"


def _resolve_level(level: Optional[str]) -> int:
    if level is None:
        level = os.environ.get("SPLV_LOG_LEVEL", "INFO")
    return getattr(logging, str(level).upper(), logging.INFO)


def _file_handler(log_file: str, numeric_level: int) -> logging.Handler:
    log_dir = os.path.dirname(log_file)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        log_file,
        maxBytes=10 * 1024 * 1024,  # 10MB
        backupCount=5,
        encoding='utf-8'
    )
    handler.setLevel(numeric_level)
    handler.setFormatter(logging.Formatter(_FORMAT, datefmt=_DATEFMT))
    return handler


def setup_logger(name: str = "splv", level: Optional[str] = None, log_file: Optional[str] = None) -> logging.Logger:
    """
    设置并配置日志记录器

    控制台输出写到 stderr，stdout 留给命令结果(表格、映射导出)。

    Args:
        name: 日志记录器名称
        level: 日志级别，默认取 SPLV_LOG_LEVEL 环境变量或 INFO
        log_file: 日志文件路径，默认None(不写入文件)

    Returns:
        配置好的日志记录器
    """
    if name in _loggers:
        return _loggers[name]

    numeric_level = _resolve_level(level)

    logger = logging.getLogger(name)
    logger.setLevel(numeric_level)
    logger.propagate = False  # 防止日志被传递到根日志记录器

    if logger.handlers:
        logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(colorlog.ColoredFormatter(
        "%(log_color)s" + _FORMAT,
        log_colors={
            'DEBUG': 'cyan',
            'INFO': 'green',
            'WARNING': 'yellow',
            'ERROR': 'red',
            'CRITICAL': 'bold_red',
        },
        datefmt=_DATEFMT
    ))
    logger.addHandler(console_handler)

    if log_file:
        logger.addHandler(_file_handler(log_file, numeric_level))

    _loggers[name] = logger
    return logger


def get_logger(name: str) -> logging.Logger:
    """
    获取命名日志记录器

    Args:
        name: 日志记录器名称

    Returns:
        日志记录器
    """
    if name not in _loggers:
        _loggers[name] = setup_logger(name)
    return _loggers[name]


def set_log_level(level: str, logger_name: Optional[str] = None):
    """
    设置日志级别

    Args:
        level: 日志级别
        logger_name: 日志记录器名称，默认为None(所有记录器)
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)
    targets = [get_logger(logger_name)] if logger_name else list(_loggers.values())
    for logger in targets:
        logger.setLevel(numeric_level)
        for handler in logger.handlers:
            handler.setLevel(numeric_level)


def setup_file_logging(log_file: str):
    """
    为所有已存在的记录器追加同一个轮转日志文件

    Args:
        log_file: 日志文件路径
    """
    for logger in _loggers.values():
        if any(isinstance(h, logging.FileHandler) for h in logger.handlers):
            continue
        logger.addHandler(_file_handler(log_file, logger.level))
