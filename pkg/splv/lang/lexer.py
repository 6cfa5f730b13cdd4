"""
词法分析 - 模型、清单与谓词文本共用的记号流
"""
from dataclasses import dataclass
from typing import List, Optional

from splv.utils.errors import ParseError

# 按长度优先匹配
_SYMBOLS = ("<=>", "&&", "||", "=>", "!=", "->", "(", ")", "{", "}", ",", ";", "!", "=", "*")


@dataclass(frozen=True)
class Token:
    kind: str   # "ident"、"string"、"symbol"、"eof"
    text: str
    line: int
    column: int


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(text: str, source: Optional[str] = None) -> List[Token]:
    """
    把文本切分为记号，"#" 到行尾为注释

    标识符允许以点连接的限定名(如 DL.Cp1)，也允许以数字开头的取值(如 2D)。

    Args:
        text: 源文本
        source: 文件名，用于错误信息

    Returns:
        以 eof 记号结尾的记号列表
    """
    tokens: List[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            end = text.find('"', i + 1)
            newline = text.find("\n", i + 1)
            if end < 0 or (0 <= newline < end):
                raise ParseError("字符串缺少结束引号", line, col, source)
            tokens.append(Token("string", text[i + 1:end], line, col))
            col += end + 1 - i
            i = end + 1
            continue
        if _is_ident_char(ch):
            start = i
            while i < n and (_is_ident_char(text[i]) or
                             (text[i] == "." and i + 1 < n and _is_ident_char(text[i + 1]))):
                i += 1
            tokens.append(Token("ident", text[start:i], line, col))
            col += i - start
            continue
        for symbol in _SYMBOLS:
            if text.startswith(symbol, i):
                tokens.append(Token("symbol", symbol, line, col))
                i += len(symbol)
                col += len(symbol)
                break
        else:
            raise ParseError(f"非法字符 {ch!r}", line, col, source)
    tokens.append(Token("eof", "", line, col))
    return tokens


class TokenStream:
    """带一个记号前瞻的记号流"""

    def __init__(self, text: str, source: Optional[str] = None):
        self.source = source
        self.tokens = tokenize(text, source)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def at(self, text: str) -> bool:
        token = self.peek()
        return token.kind in ("symbol", "ident") and token.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"期望 {text!r}")
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            self.fail(f"期望{what}")
        return self.next()

    def fail(self, message: str, token: Optional[Token] = None):
        token = token or self.peek()
        found = "文件结尾" if token.kind == "eof" else repr(token.text)
        raise ParseError(f"{message}，实际为 {found}", token.line, token.column, self.source)
