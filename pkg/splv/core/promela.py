"""
Promela 导出 - 生成可交给外部模型检查器的一致性检查模型

输出包含五部分: 事件与取值常量、随机配置初始化、环境进程、设计与需求两个带错误标志的进程，以及 never 声明。
"""
from typing import Callable, List

from splv.core.machine import FsmvMachine
from splv.lang.predicate import And, Atom, AtomKind, Const, Iff, Implies, Not, Or, Predicate, TRUE


def _ident(name: str) -> str:
    return name.replace(".", "_")


def _predicate_expr(p: Predicate, var: Callable[[str], str], const: Callable[[str, str], str]) -> str:
    if isinstance(p, Const):
        return "true" if p.value else "false"
    if isinstance(p, Atom):
        op = "!=" if p.kind.negated else "=="
        if p.kind in (AtomKind.EQ_VAR, AtomKind.NEQ_VAR):
            return f"({var(p.var)} {op} {var(p.operand)})"
        return f"({var(p.var)} {op} {const(p.var, p.operand)})"
    if isinstance(p, Not):
        return f"!{_predicate_expr(p.arg, var, const)}"
    if isinstance(p, And):
        return "(" + " && ".join(_predicate_expr(a, var, const) for a in p.args) + ")"
    if isinstance(p, Or):
        return "(" + " || ".join(_predicate_expr(a, var, const) for a in p.args) + ")"
    if isinstance(p, Implies):
        return f"(!{_predicate_expr(p.left, var, const)} || {_predicate_expr(p.right, var, const)})"
    if isinstance(p, Iff):
        return f"({_predicate_expr(p.left, var, const)} == {_predicate_expr(p.right, var, const)})"
    raise TypeError(f"未知谓词节点: {p!r}")


class _Side:
    """一侧状态机的命名约定: 设计为 d/D/DS，需求为 r/R/RS"""

    def __init__(self, machine: FsmvMachine, lower: str, upper: str, role: str):
        self.m = machine
        self.lower = lower
        self.upper = upper
        self.role = role

    def var(self, name: str) -> str:
        return f"{self.lower}_{_ident(name)}"

    def const(self, name: str, value: str) -> str:
        return f"{self.upper}_{_ident(name)}_{value}"

    def state(self, name: str) -> str:
        return f"{self.upper}S_{_ident(name)}"

    def expr(self, p: Predicate) -> str:
        return _predicate_expr(p, self.var, self.const)

    def declarations(self) -> List[str]:
        lines = [f"/* {self.role} {self.m.name}: states and variables */"]
        for i, state in enumerate(self.m.states):
            lines.append(f"#define {self.state(state)} {i}")
        for decl in self.m.variables:
            for i, value in enumerate(decl.domain):
                lines.append(f"#define {self.const(decl.name, value)} {i}")
        lines.append(f"int {self.lower}_state = {self.state(self.m.initial)};")
        lines.append(f"bool {self.lower}_err = false;")
        for decl in self.m.variables:
            lines.append(f"byte {self.var(decl.name)};")
        lines.append("")
        return lines

    def initialization(self) -> List[str]:
        lines = []
        for decl in self.m.variables:
            choices = " ".join(f":: {self.var(decl.name)} = {self.const(decl.name, v)}" for v in decl.domain)
            lines.append(f"\t\tif {choices} fi;")
        if self.m.global_predicate != TRUE:
            lines.append(f"\t\t{self.expr(self.m.global_predicate)};  /* blocks configurations violating rho */")
        return lines

    def process(self, channel: str) -> List[str]:
        name = "Des" if self.lower == "d" else "Req"
        lines = [
            f"proctype {name}() {{",
            "\tbyte e;",
            "\tdo",
            f"\t:: {channel}?e ->",
            "\t\tif",
            f"\t\t:: {self.lower}_err -> skip",
            "\t\t:: else ->",
            "\t\t\tif",
        ]
        for t in self.m.transitions:
            cond = f"{self.lower}_state == {self.state(t.src)} && e == EV_{_ident(t.event)}"
            if t.guard != TRUE:
                cond += f" && {self.expr(t.guard)}"
            lines.append(f"\t\t\t:: ({cond}) -> {self.lower}_state = {self.state(t.dst)}")
        lines += [
            f"\t\t\t:: else -> {self.lower}_err = true",
            "\t\t\tfi",
            "\t\tfi",
            "\tod",
            "}",
            "",
        ]
        return lines


def emit_promela(des: FsmvMachine, req: FsmvMachine) -> str:
    """
    生成设计/需求一致性检查的 Promela 模型

    环境每步从两侧事件集的并中任选一个事件，先后交给设计进程和需求进程；
    无可用迁移的一侧置错误标志并保持。never 声明接受 []<>(!d_err && r_err)，
    即存在设计仍可执行而需求已出错的运行。环境可以随时停止，停止后的终止状态按停顿扩展处理。

    Args:
        des: 设计状态机
        req: 需求状态机

    Returns:
        Promela 源文本
    """
    d = _Side(des, "d", "D", "design")
    r = _Side(req, "r", "R", "requirement")
    events = sorted(set(des.events) | set(req.events))

    # 常量与全局声明
    lines = [f"/* conformance check: design {des.name} against requirement {req.name} */", ""]
    lines.append("/* events */")
    for i, event in enumerate(events, start=1):
        lines.append(f"#define EV_{_ident(event)} {i}")
    lines.append("")
    lines += d.declarations()
    lines += r.declarations()
    lines += ["chan to_des = [0] of { byte };", "chan to_req = [0] of { byte };", ""]

    # 进程
    lines += ["/* environment: emits arbitrary events, may stop at any time */",
              "proctype Environment() {",
              "\tbyte ev;",
              "\tdo"]
    if events:
        choices = " ".join(f":: ev = EV_{_ident(e)}" for e in events)
        lines.append(f"\t:: atomic {{ if {choices} fi; to_des!ev; to_req!ev }}")
    lines += ["\t:: break", "\tod", "}", ""]

    lines += d.process("to_des")
    lines += r.process("to_req")

    lines += ["/* random configuration initialization */", "init {", "\tatomic {"]
    lines += d.initialization()
    lines += r.initialization()
    lines += ["\t\trun Environment();", "\t\trun Des();", "\t\trun Req()", "\t}", "}", ""]

    # never 声明
    lines += [
        "never {    /* []<>(!d_err && r_err) */",
        "T0_init:",
        "\tdo",
        "\t:: (!d_err && r_err) -> goto accept_S1",
        "\t:: (1) -> goto T0_init",
        "\tod;",
        "accept_S1:",
        "\tdo",
        "\t:: (1) -> goto T0_init",
        "\tod;",
        "}",
    ]
    return "\n".join(lines) + "\n"
