"""
谓词语言 - 有限域变量上的守卫与全局谓词: 求值、一致性、枚举与打印
"""
import enum
import functools
from dataclasses import dataclass
from typing import Callable, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from splv.lang.variables import Configuration, VarDecl, all_assignments, scope_index, scope_size
from splv.utils.errors import ScopeError
from splv.utils.logger import get_logger

logger = get_logger("predicate")

DEFAULT_CONSISTENCY_ENUM_LIMIT = 4096


class AtomKind(enum.Enum):
    EQ_CONST = "var-eq-const"
    NEQ_CONST = "var-neq-const"
    EQ_VAR = "var-eq-var"
    NEQ_VAR = "var-neq-var"

    @property
    def negated(self) -> bool:
        return self in (AtomKind.NEQ_CONST, AtomKind.NEQ_VAR)

    @property
    def against_var(self) -> bool:
        return self in (AtomKind.EQ_VAR, AtomKind.NEQ_VAR)


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Atom:
    """原子公式: var 与常量或另一个变量比较"""
    kind: AtomKind
    var: str
    operand: str


@dataclass(frozen=True)
class Not:
    arg: "Predicate"


@dataclass(frozen=True)
class And:
    args: Tuple["Predicate", ...]


@dataclass(frozen=True)
class Or:
    args: Tuple["Predicate", ...]


@dataclass(frozen=True)
class Implies:
    left: "Predicate"
    right: "Predicate"


@dataclass(frozen=True)
class Iff:
    left: "Predicate"
    right: "Predicate"


Predicate = Union[Const, Atom, Not, And, Or, Implies, Iff]

TRUE = Const(True)
FALSE = Const(False)


def eq(var: str, value: str) -> Atom:
    return Atom(AtomKind.EQ_CONST, var, value)


def neq(var: str, value: str) -> Atom:
    return Atom(AtomKind.NEQ_CONST, var, value)


def eq_var(left: str, right: str) -> Atom:
    return Atom(AtomKind.EQ_VAR, left, right)


def neg(p: Predicate) -> Predicate:
    if isinstance(p, Const):
        return Const(not p.value)
    return Not(p)


def conj(*parts: Predicate) -> Predicate:
    """
    合取，展平嵌套合取并化简常量

    Args:
        parts: 合取项

    Returns:
        化简后的谓词，无合取项时为 TRUE
    """
    args: List[Predicate] = []
    for part in parts:
        if part == TRUE:
            continue
        if part == FALSE:
            return FALSE
        if isinstance(part, And):
            args.extend(part.args)
        else:
            args.append(part)
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return And(tuple(args))


def disj(*parts: Predicate) -> Predicate:
    args: List[Predicate] = []
    for part in parts:
        if part == FALSE:
            continue
        if part == TRUE:
            return TRUE
        if isinstance(part, Or):
            args.extend(part.args)
        else:
            args.append(part)
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return Or(tuple(args))


@functools.lru_cache(maxsize=8192)
def compile_predicate(p: Predicate) -> Callable[[Mapping[str, str]], bool]:
    """
    把谓词编译为闭包，供大量求值时复用

    未绑定变量在调用时抛出 KeyError。
    """
    if isinstance(p, Const):
        value = p.value
        return lambda env: value
    if isinstance(p, Atom):
        var, operand = p.var, p.operand
        if p.kind is AtomKind.EQ_CONST:
            return lambda env: env[var] == operand
        if p.kind is AtomKind.NEQ_CONST:
            return lambda env: env[var] != operand
        if p.kind is AtomKind.EQ_VAR:
            return lambda env: env[var] == env[operand]
        return lambda env: env[var] != env[operand]
    if isinstance(p, Not):
        inner = compile_predicate(p.arg)
        return lambda env: not inner(env)
    if isinstance(p, And):
        parts = tuple(compile_predicate(a) for a in p.args)
        return lambda env: all(f(env) for f in parts)
    if isinstance(p, Or):
        parts = tuple(compile_predicate(a) for a in p.args)
        return lambda env: any(f(env) for f in parts)
    if isinstance(p, Implies):
        left, right = compile_predicate(p.left), compile_predicate(p.right)
        return lambda env: (not left(env)) or right(env)
    if isinstance(p, Iff):
        left, right = compile_predicate(p.left), compile_predicate(p.right)
        return lambda env: left(env) == right(env)
    raise TypeError(f"未知谓词节点: {p!r}")


def evaluate(p: Predicate, pi: Mapping[str, str]) -> bool:
    """
    在配置下求值谓词

    Args:
        p: 谓词
        pi: 覆盖 p 中所有变量的赋值

    Returns:
        真值
    """
    # 先查作用域，短路求值不会读到全部变量
    missing = sorted(v for v in variables(p) if v not in pi)
    if missing:
        raise ScopeError(f"谓词引用了未绑定的变量: {', '.join(missing)}")
    return compile_predicate(p)(pi)


def variables(p: Predicate) -> FrozenSet[str]:
    """谓词中出现的全部变量名"""
    if isinstance(p, Const):
        return frozenset()
    if isinstance(p, Atom):
        return frozenset((p.var, p.operand)) if p.kind.against_var else frozenset((p.var,))
    if isinstance(p, Not):
        return variables(p.arg)
    if isinstance(p, (And, Or)):
        return frozenset().union(*(variables(a) for a in p.args))
    return variables(p.left) | variables(p.right)


def atoms(p: Predicate) -> List[Atom]:
    if isinstance(p, Const):
        return []
    if isinstance(p, Atom):
        return [p]
    if isinstance(p, Not):
        return atoms(p.arg)
    if isinstance(p, (And, Or)):
        return [atom for a in p.args for atom in atoms(a)]
    return atoms(p.left) + atoms(p.right)


def transform_atoms(p: Predicate, fn: Callable[[Atom], Predicate]) -> Predicate:
    """自底向上替换原子，结构保持不变"""
    if isinstance(p, Const):
        return p
    if isinstance(p, Atom):
        return fn(p)
    if isinstance(p, Not):
        return Not(transform_atoms(p.arg, fn))
    if isinstance(p, And):
        return And(tuple(transform_atoms(a, fn) for a in p.args))
    if isinstance(p, Or):
        return Or(tuple(transform_atoms(a, fn) for a in p.args))
    if isinstance(p, Implies):
        return Implies(transform_atoms(p.left, fn), transform_atoms(p.right, fn))
    return Iff(transform_atoms(p.left, fn), transform_atoms(p.right, fn))


def rename(p: Predicate, mapping: Callable[[str], str]) -> Predicate:
    def rename_atom(atom: Atom) -> Atom:
        operand = mapping(atom.operand) if atom.kind.against_var else atom.operand
        return Atom(atom.kind, mapping(atom.var), operand)

    return transform_atoms(p, rename_atom)


def qualify(p: Predicate, prefix: str) -> Predicate:
    """给谓词中所有变量加上 "prefix." 前缀"""
    return rename(p, lambda name: f"{prefix}.{name}")


def resolve(p: Predicate, scope: Mapping[str, VarDecl]) -> Predicate:
    """
    解析原子右侧的名字: 属于左侧值域时为常量，否则若已声明则为变量，否则报作用域错误

    语法分析得到的原子一律是 var-eq-const / var-neq-const 形式，这里按作用域改写。
    """
    def resolve_atom(atom: Atom) -> Atom:
        if atom.kind.against_var:
            return atom
        decl = scope.get(atom.var)
        if decl is None:
            raise ScopeError(f"未声明的变量: {atom.var}")
        if atom.operand in decl.domain:
            return atom
        if atom.operand in scope:
            kind = AtomKind.NEQ_VAR if atom.kind.negated else AtomKind.EQ_VAR
            return Atom(kind, atom.var, atom.operand)
        raise ScopeError(f"{atom.operand!r} 既不在 {atom.var} 的值域中，也不是已声明的变量")

    return transform_atoms(p, resolve_atom)


def check_scope(p: Predicate, scope: Union[Sequence[VarDecl], Mapping[str, VarDecl]]) -> None:
    """
    检查谓词在作用域内良构

    Args:
        p: 谓词
        scope: 变量声明列表或名称索引
    """
    index = scope if isinstance(scope, Mapping) else scope_index(scope)
    for atom in atoms(p):
        decl = index.get(atom.var)
        if decl is None:
            raise ScopeError(f"未声明的变量: {atom.var}")
        if atom.kind.against_var:
            other = index.get(atom.operand)
            if other is None:
                raise ScopeError(f"未声明的变量: {atom.operand}")
            if other.domain != decl.domain:
                raise ScopeError(f"变量 {atom.var} 与 {atom.operand} 的值域不同，不能比较")
        elif atom.operand not in decl.domain:
            raise ScopeError(f"{atom.operand!r} 不在变量 {atom.var} 的值域中")


# 打印优先级: <=> 最低，然后 =>、||、&&、!
_PREC_IFF, _PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_NOT, _PREC_ATOM = range(6)


def _precedence(p: Predicate) -> int:
    if isinstance(p, Iff):
        return _PREC_IFF
    if isinstance(p, Implies):
        return _PREC_IMPLIES
    if isinstance(p, Or):
        return _PREC_OR
    if isinstance(p, And):
        return _PREC_AND
    if isinstance(p, Not):
        return _PREC_NOT
    return _PREC_ATOM


def _wrap(p: Predicate, minimum: int) -> str:
    text = to_text(p)
    return f"({text})" if _precedence(p) < minimum else text


def to_text(p: Predicate) -> str:
    """
    打印为具体语法，括号最少且重新解析后结构相同
    """
    if isinstance(p, Const):
        return "true" if p.value else "false"
    if isinstance(p, Atom):
        op = "!=" if p.kind.negated else "="
        return f"{p.var} {op} {p.operand}"
    if isinstance(p, Not):
        if isinstance(p.arg, Const):
            return "!" + to_text(p.arg)
        return f"!({to_text(p.arg)})"
    if isinstance(p, And):
        return " && ".join(_wrap(a, _PREC_NOT) for a in p.args)
    if isinstance(p, Or):
        return " || ".join(_wrap(a, _PREC_AND) for a in p.args)
    if isinstance(p, Implies):
        return f"{_wrap(p.left, _PREC_OR)} => {_wrap(p.right, _PREC_IMPLIES)}"
    return f"{_wrap(p.left, _PREC_IMPLIES)} <=> {_wrap(p.right, _PREC_IMPLIES)}"


def satisfying_assignments(p: Predicate, scope: Sequence[VarDecl],
                           budget: Optional[int] = None) -> List[Configuration]:
    """
    枚举作用域上满足谓词的全部配置

    Args:
        p: 谓词
        scope: 变量作用域
        budget: 枚举上限，超出时抛出 CapacityError

    Returns:
        按声明顺序、值域顺序字典序排列的配置列表
    """
    check_scope(p, scope)
    test = compile_predicate(p)
    return [Configuration(env) for env in all_assignments(scope, budget) if test(env)]


def is_consistent(p: Predicate, scope: Sequence[VarDecl], method: str = "auto",
                  enum_limit: int = DEFAULT_CONSISTENCY_ENUM_LIMIT) -> bool:
    """
    判断谓词是否可满足

    小作用域直接枚举，否则编码为命题公式交给 SAT 求解器。

    Args:
        p: 谓词
        scope: 变量作用域
        method: "auto"、"enumerate" 或 "sat"
        enum_limit: auto 模式下改用 SAT 的阈值

    Returns:
        是否存在满足 p 的全赋值
    """
    check_scope(p, scope)
    if isinstance(p, Const):
        return p.value
    # 只需对 p 中出现的变量求解
    mentioned = variables(p)
    relevant = [decl for decl in scope if decl.name in mentioned]
    if method == "enumerate" or (method == "auto" and scope_size(relevant) <= enum_limit):
        test = compile_predicate(p)
        return any(test(env) for env in all_assignments(relevant, budget=scope_size(relevant)))
    if method not in ("auto", "sat"):
        raise ValueError(f"未知的一致性检查方法: {method}")

    from splv.qbf.encoding import BoolEncoding, encode_predicate
    from splv.qbf.sat_solver import sat

    encoding = BoolEncoding(relevant)
    circuit = encoding.circuit
    root = circuit.conj(encoding.validity(), encode_predicate(p, encoding))
    return sat(circuit, root) is not None

