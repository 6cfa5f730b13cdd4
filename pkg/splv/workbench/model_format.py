"""
模型文件格式 - fsmv 块的解析与打印

    fsmv Name {
        var x in {a,b};
        global x = a || x = b;
        events {e1,e2};
        states {s0,s1};
        initial s0;
        trans s0 -> s1 on e1 when x = a;
        trans s1 -> s1 on *;
    }

"on *" 展开为每个已声明事件各一条迁移。
"""
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from splv.core.machine import FsmvMachine, Transition
from splv.lang.lexer import Token, TokenStream
from splv.lang.parser import parse_predicate_tokens
from splv.lang.predicate import TRUE, Predicate, check_scope, resolve, to_text
from splv.lang.variables import VarDecl
from splv.utils.errors import ModelError, ParseError, ScopeError
from splv.utils.logger import get_logger

logger = get_logger("model_format")

_BARE_NAME_RE = re.compile(r"[A-Za-z0-9_]+(\.[A-Za-z0-9_]+)*\Z")


@dataclass
class _PendingTransition:
    src: str
    dst: str
    event: Optional[str]    # None 表示 "on *"
    guard: Predicate
    token: Token


def _parse_name(ts: TokenStream, what: str) -> Token:
    token = ts.peek()
    if token.kind not in ("ident", "string"):
        ts.fail(f"期望{what}")
    return ts.next()


def _parse_name_set(ts: TokenStream, what: str) -> List[Token]:
    ts.expect("{")
    names: List[Token] = []
    if not ts.at("}"):
        names.append(_parse_name(ts, what))
        while ts.accept(","):
            names.append(_parse_name(ts, what))
    ts.expect("}")
    return names


def _resolve_at(ts: TokenStream, p: Predicate, scope, token: Token) -> Predicate:
    try:
        p = resolve(p, scope)
        check_scope(p, scope)
        return p
    except ScopeError as e:
        ts.fail(str(e), token)


def _parse_block(ts: TokenStream) -> FsmvMachine:
    header = ts.expect("fsmv")
    name = ts.expect_kind("ident", "状态机名").text
    ts.expect("{")

    variables: List[VarDecl] = []
    global_pred: Optional[Tuple[Predicate, Token]] = None
    events: Optional[List[Token]] = None
    states: Optional[List[Token]] = None
    initial: Optional[Token] = None
    pending: List[_PendingTransition] = []

    while not ts.accept("}"):
        token = ts.peek()
        if token.kind == "eof":
            ts.fail(f"状态机 {name} 缺少 \"}}\"")
        if ts.accept("var"):
            var_tok = ts.expect_kind("ident", "变量名")
            ts.expect("in")
            values = _parse_name_set(ts, "取值")
            try:
                decl = VarDecl(var_tok.text, tuple(v.text for v in values))
            except ScopeError as e:
                ts.fail(str(e), var_tok)
            if any(v.name == decl.name for v in variables):
                ts.fail(f"变量 {decl.name} 重复声明", var_tok)
            variables.append(decl)
        elif ts.accept("global"):
            if global_pred is not None:
                ts.fail("global 重复出现", token)
            global_pred = (parse_predicate_tokens(ts), token)
        elif ts.accept("events"):
            if events is not None:
                ts.fail("events 重复出现", token)
            events = _parse_name_set(ts, "事件名")
        elif ts.accept("states"):
            if states is not None:
                ts.fail("states 重复出现", token)
            states = _parse_name_set(ts, "状态名")
        elif ts.accept("initial"):
            if initial is not None:
                ts.fail("initial 重复出现", token)
            initial = _parse_name(ts, "初始状态")
        elif ts.accept("trans"):
            src = _parse_name(ts, "源状态").text
            ts.expect("->")
            dst = _parse_name(ts, "目标状态").text
            ts.expect("on")
            event = None if ts.accept("*") else _parse_name(ts, "事件名").text
            guard = parse_predicate_tokens(ts) if ts.accept("when") else TRUE
            pending.append(_PendingTransition(src, dst, event, guard, token))
        else:
            ts.fail("期望 var、global、events、states、initial 或 trans")
        ts.expect(";")

    if states is None:
        ts.fail(f"状态机 {name} 缺少 states", header)
    if initial is None:
        ts.fail(f"状态机 {name} 缺少 initial", header)
    event_names = [t.text for t in events or ()]
    state_names = {t.text for t in states}
    if initial.text not in state_names:
        ts.fail(f"初始状态 {initial.text} 未声明", initial)

    scope = {decl.name: decl for decl in variables}
    rho = TRUE
    if global_pred is not None:
        rho = _resolve_at(ts, global_pred[0], scope, global_pred[1])

    transitions: List[Transition] = []
    for t in pending:
        for endpoint in (t.src, t.dst):
            if endpoint not in state_names:
                ts.fail(f"状态 {endpoint} 未声明", t.token)
        if t.event is not None and t.event not in event_names:
            ts.fail(f"事件 {t.event} 未声明", t.token)
        guard = _resolve_at(ts, t.guard, scope, t.token)
        for event in ([t.event] if t.event is not None else event_names):
            transitions.append(Transition(t.src, event, t.dst, guard))

    try:
        return FsmvMachine(
            name=name,
            states=tuple(t.text for t in states),
            initial=initial.text,
            events=tuple(event_names),
            variables=tuple(variables),
            transitions=tuple(transitions),
            global_predicate=rho,
        )
    except ModelError as e:
        ts.fail(str(e), header)


def parse_models(text: str, source: Optional[str] = None) -> List[FsmvMachine]:
    """
    解析文本中的全部 fsmv 块

    Args:
        text: 模型文本
        source: 文件名，用于错误信息

    Returns:
        状态机列表，按出现顺序
    """
    ts = TokenStream(text, source)
    machines = []
    while ts.peek().kind != "eof":
        machines.append(_parse_block(ts))
    return machines


def parse_model(text: str, source: Optional[str] = None) -> FsmvMachine:
    """解析恰好含一个 fsmv 块的文本"""
    machines = parse_models(text, source)
    if len(machines) != 1:
        raise ParseError(f"期望恰好一个 fsmv 块，实际为 {len(machines)} 个", 1, 1, source)
    return machines[0]


def load_model(path: str, check_consistency: bool = True, enum_limit: int = 4096) -> FsmvMachine:
    """
    从文件加载一个状态机

    Args:
        path: 模型文件路径
        check_consistency: 是否检查 ρ 与守卫的一致性
        enum_limit: 一致性检查改用 SAT 的阈值

    Returns:
        状态机
    """
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    machine = parse_model(text, source=path)
    if check_consistency:
        try:
            machine.check_consistency(enum_limit)
        except ModelError as e:
            raise ParseError(str(e), 1, 1, path) from e
    logger.debug(f"加载模型 {machine.name}: {len(machine.states)} 个状态, "
                 f"{len(machine.transitions)} 条迁移, {len(machine.variables)} 个变量")
    return machine


def _name_text(name: str) -> str:
    return name if _BARE_NAME_RE.match(name) and name not in ("true", "false") else f'"{name}"'


def model_to_text(m: FsmvMachine) -> str:
    """
    打印为模型文件格式，重新解析后与 m 结构相等

    Args:
        m: 状态机

    Returns:
        以换行结尾的文本
    """
    lines = [f"# {line}".rstrip() for line in m.description.splitlines()]
    lines.append(f"fsmv {m.name} {{")
    for decl in m.variables:
        lines.append(f"    {decl.to_text()}")
    if m.global_predicate != TRUE:
        lines.append(f"    global {to_text(m.global_predicate)};")
    lines.append("    events {" + ",".join(_name_text(e) for e in m.events) + "};")
    lines.append("    states {" + ",".join(_name_text(s) for s in m.states) + "};")
    lines.append(f"    initial {_name_text(m.initial)};")
    for t in m.transitions:
        when = "" if t.guard == TRUE else f" when {to_text(t.guard)}"
        lines.append(f"    trans {_name_text(t.src)} -> {_name_text(t.dst)} on {_name_text(t.event)}{when};")
    lines.append("}")
    return "\n".join(lines) + "\n"
