"""
谓词语法分析 - 递归下降

优先级从高到低: "!"、"&&"、"||"、"=>"(右结合)、"<=>"(不可结合)。
"""
from typing import Mapping, Optional

from splv.lang.lexer import TokenStream
from splv.lang.predicate import (
    AtomKind, Atom, And, Const, Iff, Implies, Not, Or, Predicate, check_scope, resolve,
)
from splv.lang.variables import VarDecl


def parse_predicate_tokens(ts: TokenStream) -> Predicate:
    """从记号流中解析一个谓词，停在第一个不属于谓词的记号前"""
    left = _parse_implies(ts)
    if ts.at("<=>"):
        ts.next()
        right = _parse_implies(ts)
        if ts.at("<=>"):
            ts.fail("\"<=>\" 不可结合，请加括号")
        return Iff(left, right)
    return left


def _parse_implies(ts: TokenStream) -> Predicate:
    left = _parse_or(ts)
    if ts.accept("=>"):
        return Implies(left, _parse_implies(ts))
    return left


def _parse_or(ts: TokenStream) -> Predicate:
    args = [_parse_and(ts)]
    while ts.accept("||"):
        args.append(_parse_and(ts))
    return args[0] if len(args) == 1 else Or(tuple(args))


def _parse_and(ts: TokenStream) -> Predicate:
    args = [_parse_unary(ts)]
    while ts.accept("&&"):
        args.append(_parse_unary(ts))
    return args[0] if len(args) == 1 else And(tuple(args))


def _parse_unary(ts: TokenStream) -> Predicate:
    if ts.accept("!"):
        return Not(_parse_unary(ts))
    return _parse_primary(ts)


def _parse_primary(ts: TokenStream) -> Predicate:
    if ts.accept("("):
        inner = parse_predicate_tokens(ts)
        ts.expect(")")
        return inner
    token = ts.peek()
    if token.kind != "ident":
        ts.fail("期望谓词")
    ts.next()
    if token.text == "true":
        return Const(True)
    if token.text == "false":
        return Const(False)
    if ts.accept("="):
        kind = AtomKind.EQ_CONST
    elif ts.accept("!="):
        kind = AtomKind.NEQ_CONST
    else:
        ts.fail(f"变量 {token.text} 后期望 \"=\" 或 \"!=\"")
    operand = ts.expect_kind("ident", "取值或变量名")
    return Atom(kind, token.text, operand.text)


def parse_predicate(text: str, scope: Optional[Mapping[str, VarDecl]] = None,
                    source: Optional[str] = None) -> Predicate:
    """
    解析完整的谓词文本

    Args:
        text: 谓词文本
        scope: 变量作用域(名称索引)，给出时解析原子并检查良构
        source: 来源名，用于错误信息

    Returns:
        谓词
    """
    ts = TokenStream(text, source)
    predicate = parse_predicate_tokens(ts)
    if ts.peek().kind != "eof":
        ts.fail("谓词后有多余内容")
    if scope is not None:
        predicate = resolve(predicate, scope)
        check_scope(predicate, scope)
    return predicate
