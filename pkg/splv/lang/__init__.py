"""
变量与谓词语言 - 有限域变量、配置和谓词
"""

from splv.lang.variables import VarDecl, Configuration
from splv.lang.predicate import (
    Predicate, TRUE, FALSE, evaluate, is_consistent, satisfying_assignments, to_text,
)
from splv.lang.parser import parse_predicate

__all__ = [
    "VarDecl",
    "Configuration",
    "Predicate",
    "TRUE",
    "FALSE",
    "evaluate",
    "is_consistent",
    "satisfying_assignments",
    "to_text",
    "parse_predicate",
]
