"""
QBF 文件格式 - QDIMACS 与 QCIR-G14 的导出和解析
"""
import re
from typing import Dict, List, Optional, Sequence, Tuple

from splv.qbf.circuit import TRUE, Circuit
from splv.qbf.cnf import to_cnf
from splv.qbf.psi import QbfFormula
from splv.utils.errors import QbfFormatError
from splv.utils.logger import get_logger

logger = get_logger("qbf_formats")


def export_qdimacs(f: QbfFormula) -> str:
    """
    导出 QDIMACS

    全称位编号为 1..nx，存在位随后，Tseitin 辅助变量追加到最内层存在块；空量词行省略。

    Args:
        f: ∀∃ 公式

    Returns:
        QDIMACS 文本
    """
    order = list(f.universal) + list(f.existential)
    cnf = to_cnf(f.circuit, [f.matrix], input_order=order)
    nx = len(f.universal)
    universal = list(range(1, nx + 1))
    existential = list(range(nx + 1, len(order) + 1)) + cnf.aux_vars

    lines = [f"c splv forall-exists instance: {len(f.universal)} universal, {len(f.existential)} existential"]
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    if universal:
        lines.append("a " + " ".join(map(str, universal)) + " 0")
    if existential:
        lines.append("e " + " ".join(map(str, existential)) + " 0")
    for clause in cnf.clauses:
        lines.append(" ".join(map(str, clause + [0])))
    return "\n".join(lines) + "\n"


def _formula_from_blocks(circuit: Circuit, blocks: List[Tuple[str, List[str]]], matrix: int,
                         used: Sequence[str]) -> QbfFormula:
    kinds = [kind for kind, _ in blocks]
    if kinds not in ([], ["a"], ["e"], ["a", "e"]):
        raise QbfFormatError(f"只支持 ∀∃ 前缀，实际为 {''.join(kinds)}")
    universal: List[str] = []
    existential: List[str] = []
    for kind, names in blocks:
        (universal if kind == "a" else existential).extend(names)
    bound = set(universal) | set(existential)
    if len(bound) != len(universal) + len(existential):
        raise QbfFormatError("变量被重复量化")
    free = [n for n in used if n not in bound]
    if free:
        if universal:
            raise QbfFormatError(f"存在自由变量: {free[:5]}")
        existential.extend(free)
    return QbfFormula(circuit, tuple(universal), tuple(existential), (), (matrix,) if matrix != TRUE else ())


def parse_qdimacs(text: str) -> QbfFormula:
    """
    解析 ∀∃ 形式的 QDIMACS

    Args:
        text: 文件内容

    Returns:
        以整个矩阵为后件、前件为空的公式，输入名为 "v<编号>"
    """
    header: Optional[Tuple[int, int]] = None
    blocks: List[Tuple[str, List[str]]] = []
    clauses: List[List[int]] = []
    pending: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if header is None:
            m = re.match(r"p\s+cnf\s+(\d+)\s+(\d+)\s*$", line)
            if m is None:
                raise QbfFormatError(f"第 {lineno} 行: 期望 p cnf 头，实际为 {line!r}")
            header = (int(m.group(1)), int(m.group(2)))
            continue
        if line[0] in "ae" and not clauses and not pending:
            parts = line.split()
            if parts[-1] != "0":
                raise QbfFormatError(f"第 {lineno} 行: 量词行必须以 0 结尾")
            try:
                names = [f"v{int(x)}" for x in parts[1:-1]]
            except ValueError:
                raise QbfFormatError(f"第 {lineno} 行: 非法变量号") from None
            if blocks and blocks[-1][0] == parts[0]:
                blocks[-1][1].extend(names)
            else:
                blocks.append((parts[0], names))
            continue
        try:
            lits = [int(x) for x in line.split()]
        except ValueError:
            raise QbfFormatError(f"第 {lineno} 行: 非法子句 {line!r}") from None
        for lit in lits:
            if lit == 0:
                clauses.append(pending)
                pending = []
            else:
                if abs(lit) > header[0]:
                    raise QbfFormatError(f"第 {lineno} 行: 变量 {abs(lit)} 超出声明的 {header[0]}")
                pending.append(lit)
    if header is None:
        raise QbfFormatError("缺少 p cnf 头")
    if pending:
        raise QbfFormatError("最后一个子句缺少结尾的 0")
    if len(clauses) != header[1]:
        raise QbfFormatError(f"子句数 {len(clauses)} 与声明的 {header[1]} 不一致")

    # 量化变量先建输入，保持编号顺序
    circuit = Circuit()
    for _, names in blocks:
        for n in names:
            circuit.input(n)

    def ref(lit: int) -> int:
        r = circuit.input(f"v{abs(lit)}")
        return r if lit > 0 else -r

    matrix = circuit.conj(*(circuit.disj(*(ref(l) for l in clause)) for clause in clauses))
    used = sorted({f"v{abs(l)}" for clause in clauses for l in clause}, key=lambda n: int(n[1:]))
    return _formula_from_blocks(circuit, blocks, matrix, used)


def export_qcir(f: QbfFormula) -> str:
    """
    导出 QCIR-G14(只用与门)

    变量编号与 QDIMACS 导出一致，门编号随后；常量真为空与门。

    Args:
        f: ∀∃ 公式

    Returns:
        QCIR 文本
    """
    circuit = f.circuit
    root = f.matrix
    order = list(f.universal) + list(f.existential)
    ids: Dict[int, int] = {}
    for i, name in enumerate(order, start=1):
        ids[circuit.input(name)] = i
    next_id = len(order) + 1

    lines = ["#QCIR-G14"]
    if f.universal:
        lines.append("forall(" + ", ".join(str(ids[circuit.input(n)]) for n in f.universal) + ")")
    if f.existential:
        lines.append("exists(" + ", ".join(str(ids[circuit.input(n)]) for n in f.existential) + ")")

    # 常量输出用空与门表示
    gates: List[str] = []
    if abs(root) == TRUE:
        out = next_id
        gates.append(f"{out} = and()")
        output = str(out) if root == TRUE else f"-{out}"
    else:
        for node in circuit.cone([root]):
            if circuit.is_input(node) and node not in ids:
                raise QbfFormatError(f"输入 {circuit.name(node)} 未被量化")
            if circuit.is_and(node):
                ids[node] = next_id
                next_id += 1
                args = ", ".join(str(ids[abs(c)]) if c > 0 else f"-{ids[abs(c)]}" for c in circuit.children(node))
                gates.append(f"{ids[node]} = and({args})")
        output = str(ids[abs(root)]) if root > 0 else f"-{ids[abs(root)]}"
    lines.append(f"output({output})")
    lines.extend(gates)
    return "\n".join(lines) + "\n"


_GATE_RE = re.compile(r"^(\w+)\s*=\s*(and|or)\s*\((.*)\)$", re.IGNORECASE)
_QUANT_RE = re.compile(r"^(forall|exists)\s*\((.*)\)$", re.IGNORECASE)
_OUTPUT_RE = re.compile(r"^output\s*\(\s*(-?\w+)\s*\)$", re.IGNORECASE)


def parse_qcir(text: str) -> QbfFormula:
    """
    解析 ∀∃ 形式的 QCIR-G14(与门、或门)

    Args:
        text: 文件内容

    Returns:
        以电路输出为后件、前件为空的公式，输入名为 "v<标识>"
    """
    circuit = Circuit()
    blocks: List[Tuple[str, List[str]]] = []
    refs: Dict[str, int] = {}
    output: Optional[str] = None
    used: List[str] = []

    def lookup(token: str, lineno: int) -> int:
        token = token.strip()
        negated = token.startswith("-")
        name = token[1:] if negated else token
        if not re.fullmatch(r"\w+", name):
            raise QbfFormatError(f"第 {lineno} 行: 非法标识 {token!r}")
        if name not in refs:
            refs[name] = circuit.input(f"v{name}")
            used.append(f"v{name}")
        r = refs[name]
        return -r if negated else r

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _QUANT_RE.match(line)
        if m:
            if output is not None:
                raise QbfFormatError(f"第 {lineno} 行: 量词块必须在 output 之前")
            kind = "a" if m.group(1).lower() == "forall" else "e"
            names = [t.strip() for t in m.group(2).split(",") if t.strip()]
            for n in names:
                refs[n] = circuit.input(f"v{n}")
            names = [f"v{n}" for n in names]
            if blocks and blocks[-1][0] == kind:
                blocks[-1][1].extend(names)
            else:
                blocks.append((kind, names))
            continue
        m = _OUTPUT_RE.match(line)
        if m:
            output = m.group(1)
            continue
        m = _GATE_RE.match(line)
        if m:
            name, op, body = m.group(1), m.group(2).lower(), m.group(3)
            if name in refs:
                raise QbfFormatError(f"第 {lineno} 行: 门 {name} 重复定义")
            args = [lookup(t, lineno) for t in body.split(",") if t.strip()]
            refs[name] = circuit.conj(*args) if op == "and" else circuit.disj(*args)
            continue
        raise QbfFormatError(f"第 {lineno} 行: 无法识别 {line!r}")

    if output is None:
        raise QbfFormatError("缺少 output 行")
    matrix = lookup(output, 0)
    support = set(circuit.support(matrix))
    gate_inputs = [n for n in used if n in support]
    return _formula_from_blocks(circuit, blocks, matrix, gate_inputs)
