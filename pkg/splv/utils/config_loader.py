"""
配置加载器 - 负责加载和处理配置文件
"""
import os
import re
from dataclasses import dataclass
from typing import Any, Dict, Optional

import yaml

from splv.utils.logger import get_logger

logger = get_logger("config_loader")

DEFAULT_ENUM_BUDGET = 1 << 20

DEFAULT_CONFIG: Dict[str, Any] = {
    "system": {
        "log_level": "INFO",
        "log_file": "",
        "data_dir": "./data",
        "jobs": 4,
    },
    "verification": {
        "enum_budget": DEFAULT_ENUM_BUDGET,
        "max_refinements": 1000000,
        "split_components": True,
        "monolithic_pair_budget": 4194304,
        "consistency_enum_limit": 4096,
    },
    "generator": {
        "min_states": 3,
        "max_states": 8,
        "variables": 2,
        "domain_size": 2,
        "events": 3,
        "link_probability": 0.5,
    },
}

CONFIG_SCHEMA: Dict[str, Dict[str, Any]] = {
    "system": {"type": "object"},
    "verification": {"type": "object"},
    "generator": {"type": "object"},
}


def load_config(config_path: str) -> Optional[Dict[str, Any]]:
    """
    加载配置文件

    Args:
        config_path: 配置文件路径

    Returns:
        配置字典或None(加载失败时)
    """
    try:
        if not os.path.exists(config_path):
            logger.error(f"配置文件不存在: {config_path}")
            return None

        with open(config_path, 'r', encoding='utf-8') as file:
            config = yaml.safe_load(file) or {}
            config = _process_env_vars(config)
            logger.debug(f"成功加载配置文件: {config_path}")
            return config

    except yaml.YAMLError as e:
        logger.error(f"解析YAML配置文件失败: {e}")
    except Exception as e:
        logger.error(f"加载配置文件时出错: {e}")

    return None


def _process_env_vars(config: Any) -> Any:
    """
    处理配置中的环境变量引用，格式如 ${ENV_VAR} 或 ${ENV_VAR:default_value}
    """
    if isinstance(config, dict):
        return {k: _process_env_vars(v) for k, v in config.items()}
    if isinstance(config, list):
        return [_process_env_vars(item) for item in config]
    if isinstance(config, str):
        pattern = r'\${([A-Za-z0-9_]+)(?::([^}]*))?}'

        def replace_env_var(match):
            default_value = match.group(2) if match.group(2) is not None else ""
            return os.environ.get(match.group(1), default_value)

        return re.sub(pattern, replace_env_var, config)
    return config


def validate_config(config: Dict[str, Any], schema: Dict[str, Any]) -> bool:
    """
    验证配置是否符合模式要求

    Args:
        config: 配置字典
        schema: 模式字典

    Returns:
        配置是否有效
    """
    type_map = {
        "string": str,
        "number": (int, float),
        "boolean": bool,
        "array": list,
        "object": dict,
    }
    for key, rule in schema.items():
        if rule.get("required", False) and key not in config:
            logger.error(f"缺少必需的配置项: {key}")
            return False
        expected = rule.get("type")
        if key in config and expected and not isinstance(config[key], type_map[expected]):
            logger.error(f"配置项 {key} 应为 {expected} 类型")
            return False
    return True


def merge_configs(base_config: Dict[str, Any], override_config: Dict[str, Any]) -> Dict[str, Any]:
    """
    合并两个配置字典，后者的值会覆盖前者

    Args:
        base_config: 基础配置
        override_config: 覆盖配置

    Returns:
        合并后的配置
    """
    merged_config = base_config.copy()
    for key, value in override_config.items():
        if key in merged_config and isinstance(merged_config[key], dict) and isinstance(value, dict):
            merged_config[key] = merge_configs(merged_config[key], value)
        else:
            merged_config[key] = value
    return merged_config


def get_config_value(config: Dict[str, Any], path: str, default: Any = None) -> Any:
    """
    通过路径获取配置值

    Args:
        config: 配置字典
        path: 配置路径，格式如 "verification.enum_budget"
        default: 默认值

    Returns:
        配置值或默认值
    """
    current: Any = config
    for part in path.split("."):
        if not isinstance(current, dict) or part not in current:
            return default
        current = current[part]
    return current


def env_enum_budget(default: int = DEFAULT_ENUM_BUDGET) -> int:
    """读取 SPLV_ENUM_BUDGET 环境变量，未设置或非法时返回默认值"""
    raw = os.environ.get("SPLV_ENUM_BUDGET")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"忽略非法的 SPLV_ENUM_BUDGET: {raw}")
        return default
    return value if value > 0 else default


@dataclass(frozen=True)
class Settings:
    """运行时设置，由配置字典物化而来"""
    log_level: str = "INFO"
    log_file: str = ""
    data_dir: str = "./data"
    jobs: int = 4
    enum_budget: int = DEFAULT_ENUM_BUDGET
    max_refinements: int = 1000000
    split_components: bool = True
    monolithic_pair_budget: int = 4194304
    consistency_enum_limit: int = 4096
    min_states: int = 3
    max_states: int = 8
    variables: int = 2
    domain_size: int = 2
    events: int = 3
    link_probability: float = 0.5

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "Settings":
        def get(path: str, cast):
            return cast(get_config_value(config, path, get_config_value(DEFAULT_CONFIG, path)))

        return cls(
            log_level=get("system.log_level", str),
            log_file=get("system.log_file", str),
            data_dir=get("system.data_dir", str),
            jobs=max(1, get("system.jobs", int)),
            enum_budget=env_enum_budget(get("verification.enum_budget", int)),
            max_refinements=get("verification.max_refinements", int),
            split_components=get("verification.split_components", _as_bool),
            monolithic_pair_budget=get("verification.monolithic_pair_budget", int),
            consistency_enum_limit=get("verification.consistency_enum_limit", int),
            min_states=get("generator.min_states", int),
            max_states=get("generator.max_states", int),
            variables=get("generator.variables", int),
            domain_size=get("generator.domain_size", int),
            events=get("generator.events", int),
            link_probability=get("generator.link_probability", float),
        )


def _as_bool(value: Any) -> bool:
    if isinstance(value, str):
        return value.strip().lower() in ("1", "true", "yes", "on")
    return bool(value)


def load_settings(config_path: Optional[str] = None) -> Settings:
    """
    按查找顺序加载设置: 显式路径、SPLV_CONFIG、./config.yaml，最后是内置默认值

    Args:
        config_path: 命令行给出的配置文件路径

    Returns:
        设置对象
    """
    path = config_path or os.environ.get("SPLV_CONFIG")
    if not path and os.path.exists("config.yaml"):
        path = "config.yaml"

    config = DEFAULT_CONFIG
    if path:
        loaded = load_config(path)
        if loaded is None:
            raise FileNotFoundError(f"无法加载配置文件: {path}")
        if not validate_config(loaded, CONFIG_SCHEMA):
            raise ValueError(f"配置文件格式无效: {path}")
        config = merge_configs(DEFAULT_CONFIG, loaded)
    return Settings.from_config(config)
