"""
布尔编码 - 有限域变量的二进制位编码与谓词、映射的电路编码
"""
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from splv.core.conformance import ConformanceMapping
from splv.lang.predicate import And, Atom, AtomKind, Const, Iff, Implies, Not, Or, Predicate
from splv.lang.variables import Configuration, VarDecl, scope_index
from splv.qbf.circuit import FALSE, TRUE, Circuit
from splv.utils.errors import ScopeError, ValidityError


def bit_width(size: int) -> int:
    """⌈log2 size⌉，单值值域为 0 位"""
    return (size - 1).bit_length()


class BoolEncoding:
    """
    变量作用域的二进制编码，低位在前

    每个变量占 ⌈log2 |值域|⌉ 个电路输入，命名为 "<prefix><变量名>#<位>"；
    validity 排除未使用的位模式。
    """

    def __init__(self, scope: Sequence[VarDecl], circuit: Optional[Circuit] = None, prefix: str = ""):
        self.circuit = circuit if circuit is not None else Circuit()
        self.scope: Tuple[VarDecl, ...] = tuple(scope)
        self.index = scope_index(self.scope)
        self.prefix = prefix
        self.bits: Dict[str, Tuple[int, ...]] = {}
        self.bit_names: Dict[str, Tuple[str, ...]] = {}
        for decl in self.scope:
            names = tuple(f"{prefix}{decl.name}#{i}" for i in range(bit_width(len(decl.domain))))
            self.bit_names[decl.name] = names
            self.bits[decl.name] = tuple(self.circuit.input(n) for n in names)

    def input_names(self) -> List[str]:
        return [n for decl in self.scope for n in self.bit_names[decl.name]]

    def _decl(self, name: str) -> VarDecl:
        decl = self.index.get(name)
        if decl is None:
            raise ScopeError(f"编码中没有变量 {name}")
        return decl

    def _pattern(self, name: str, index: int) -> int:
        return self.circuit.conj(*(b if (index >> i) & 1 else -b for i, b in enumerate(self.bits[name])))

    def value_is(self, name: str, value: str) -> int:
        """变量取某个值的电路"""
        return self._pattern(name, self._decl(name).index(value))

    def variable_validity(self, name: str) -> int:
        decl = self._decl(name)
        unused = range(len(decl.domain), 1 << len(self.bits[name]))
        return self.circuit.conj(*(-self._pattern(name, k) for k in unused))

    def validity(self) -> int:
        """所有变量的位模式都对应值域内的取值"""
        return self.circuit.conj(*(self.variable_validity(decl.name) for decl in self.scope))

    def equals_config(self, config: Mapping[str, str]) -> int:
        return self.circuit.conj(*(self.value_is(name, value) for name, value in config.items()))

    def equal_vars(self, left: str, right: str) -> int:
        a, b = self._decl(left), self._decl(right)
        if a.domain != b.domain:
            raise ScopeError(f"变量 {left} 与 {right} 的值域不同")
        return self.circuit.conj(*(self.circuit.iff(x, y) for x, y in zip(self.bits[left], self.bits[right])))

    def encode(self, config: Mapping[str, str]) -> Dict[str, bool]:
        """配置 -> 位赋值"""
        bits: Dict[str, bool] = {}
        for name, value in config.items():
            index = self._decl(name).index(value)
            for i, bit in enumerate(self.bit_names[name]):
                bits[bit] = bool((index >> i) & 1)
        return bits

    def decode(self, bits: Mapping[str, bool]) -> Configuration:
        """位赋值 -> 配置，缺省位按 False 处理"""
        pairs = []
        for decl in self.scope:
            index = sum(1 << i for i, bit in enumerate(self.bit_names[decl.name]) if bits.get(bit, False))
            if index >= len(decl.domain):
                raise ValidityError(f"变量 {decl.name} 的位模式 {index} 不对应任何取值")
            pairs.append((decl.name, decl.domain[index]))
        return Configuration(pairs)


def encode_config_space(scope: Sequence[VarDecl], circuit: Optional[Circuit] = None, prefix: str = "") -> BoolEncoding:
    return BoolEncoding(scope, circuit, prefix)


def encode_predicate(p: Predicate, enc: BoolEncoding) -> int:
    """
    谓词 -> 电路；在合法位模式上与谓词求值一致

    Args:
        p: 谓词
        enc: 覆盖 p 中变量的编码

    Returns:
        电路引用
    """
    c = enc.circuit
    if isinstance(p, Const):
        return TRUE if p.value else FALSE
    if isinstance(p, Atom):
        if p.kind in (AtomKind.EQ_VAR, AtomKind.NEQ_VAR):
            ref = enc.equal_vars(p.var, p.operand)
        else:
            ref = enc.value_is(p.var, p.operand)
        return -ref if p.kind.negated else ref
    if isinstance(p, Not):
        return -encode_predicate(p.arg, enc)
    if isinstance(p, And):
        return c.conj(*(encode_predicate(a, enc) for a in p.args))
    if isinstance(p, Or):
        return c.disj(*(encode_predicate(a, enc) for a in p.args))
    if isinstance(p, Implies):
        return c.implies(encode_predicate(p.left, enc), encode_predicate(p.right, enc))
    if isinstance(p, Iff):
        return c.iff(encode_predicate(p.left, enc), encode_predicate(p.right, enc))
    raise TypeError(f"未知谓词节点: {p!r}")


def encode_mapping(phi: ConformanceMapping, enc_d: BoolEncoding, enc_r: BoolEncoding) -> int:
    """
    映射 Φ -> ⋀_{π_d} (x = π_d) ⇒ ⋁_{π_r ∈ Φ(π_d)} (y = π_r)

    空像得到指向 false 的蕴含。
    """
    c = enc_d.circuit
    clauses = []
    for pi_d, image in phi.entries:
        clauses.append(c.implies(enc_d.equals_config(pi_d), c.disj(*(enc_r.equals_config(r) for r in image))))
    return c.conj(*clauses)
