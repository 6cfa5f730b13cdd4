"""
变量与配置 - 有限域变量声明和配置(全赋值)
"""
import itertools
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from splv.utils.config_loader import env_enum_budget
from splv.utils.errors import CapacityError, ScopeError, ValidityError

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*\Z")
VALUE_RE = re.compile(r"[A-Za-z0-9_]+\Z")
KEYWORDS = frozenset({"true", "false"})


@dataclass(frozen=True)
class VarDecl:
    """有限域变量声明，domain 保持声明顺序"""
    name: str
    domain: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if not NAME_RE.match(self.name) or self.name in KEYWORDS:
            raise ScopeError(f"非法变量名: {self.name!r}")
        if not self.domain:
            raise ScopeError(f"变量 {self.name} 的值域为空")
        if len(set(self.domain)) != len(self.domain):
            raise ScopeError(f"变量 {self.name} 的值域含重复值: {self.domain}")
        for value in self.domain:
            if not VALUE_RE.match(value):
                raise ScopeError(f"变量 {self.name} 的取值非法: {value!r}")

    def index(self, value: str) -> int:
        try:
            return self.domain.index(value)
        except ValueError:
            raise ScopeError(f"{value!r} 不在变量 {self.name} 的值域 {{{','.join(self.domain)}}} 中") from None

    def qualified(self, prefix: str) -> "VarDecl":
        return VarDecl(f"{prefix}.{self.name}", self.domain)

    def to_text(self) -> str:
        return f"var {self.name} in {{{','.join(self.domain)}}};"


def scope_index(scope: Sequence[VarDecl]) -> Dict[str, VarDecl]:
    """
    按名称索引变量作用域，重名时报错

    Args:
        scope: 变量声明列表

    Returns:
        名称到声明的字典(保持声明顺序)
    """
    index: Dict[str, VarDecl] = {}
    for decl in scope:
        if decl.name in index:
            raise ScopeError(f"变量重复声明: {decl.name}")
        index[decl.name] = decl
    return index


def scope_size(scope: Sequence[VarDecl]) -> int:
    """作用域内全赋值的个数"""
    size = 1
    for decl in scope:
        size *= len(decl.domain)
    return size


class Configuration(Mapping[str, str]):
    """
    配置: 变量名到取值的不可变映射

    迭代顺序为构造顺序，相等性与哈希和顺序无关。
    """

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, items: Union[Mapping[str, str], Iterable[Tuple[str, str]]] = ()):
        pairs = tuple(items.items()) if isinstance(items, Mapping) else tuple(items)
        self._map: Dict[str, str] = dict(pairs)
        if len(self._map) != len(pairs):
            raise ValidityError(f"配置中变量重复: {pairs}")
        self._items = pairs
        self._hash: Optional[int] = None

    def __getitem__(self, name: str) -> str:
        return self._map[name]

    def __iter__(self) -> Iterator[str]:
        return (name for name, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, Configuration):
            return self._map == other._map
        if isinstance(other, Mapping):
            return self._map == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._items))
        return self._hash

    def __repr__(self) -> str:
        return f"⟨{self.render()}⟩"

    def restrict(self, names: Iterable[str]) -> "Configuration":
        """按给定变量名(及其顺序)取子配置"""
        try:
            return Configuration((name, self._map[name]) for name in names)
        except KeyError as e:
            raise ValidityError(f"配置缺少变量 {e.args[0]}") from None

    def merge(self, other: "Configuration") -> "Configuration":
        """合并两个变量不相交的配置"""
        clash = set(self._map) & set(other._map)
        if clash:
            raise ValidityError(f"配置变量重叠: {sorted(clash)}")
        return Configuration(self._items + other._items)

    def render(self) -> str:
        return ",".join(f"{name}={value}" for name, value in self._items)

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        """解析 render() 的输出，空串为空配置"""
        text = text.strip()
        if not text:
            return cls()
        pairs = []
        for chunk in text.split(","):
            name, sep, value = chunk.partition("=")
            if not sep:
                raise ValidityError(f"无法解析配置项: {chunk!r}")
            pairs.append((name.strip(), value.strip()))
        return cls(pairs)

    def check_total(self, scope: Sequence[VarDecl]) -> None:
        """检查配置在作用域上是全赋值且每个取值在值域内"""
        names = set()
        for decl in scope:
            names.add(decl.name)
            if decl.name not in self._map:
                raise ValidityError(f"配置 {self!r} 缺少变量 {decl.name}")
            if self._map[decl.name] not in decl.domain:
                raise ValidityError(f"配置 {self!r} 中 {decl.name} 的取值不在值域内")
        extra = set(self._map) - names
        if extra:
            raise ValidityError(f"配置 {self!r} 含作用域外变量: {sorted(extra)}")


def all_assignments(scope: Sequence[VarDecl], budget: Optional[int] = None) -> Iterator[Dict[str, str]]:
    """
    按声明顺序、值域顺序的字典序枚举全部赋值

    Args:
        scope: 变量作用域
        budget: 枚举上限，默认 2^20 或 SPLV_ENUM_BUDGET

    Returns:
        赋值字典的迭代器
    """
    limit = budget if budget is not None else env_enum_budget()
    size = scope_size(scope)
    if size > limit:
        raise CapacityError(f"配置空间 {size} 超出枚举预算 {limit}")
    names = [decl.name for decl in scope]
    for values in itertools.product(*(decl.domain for decl in scope)):
        yield dict(zip(names, values))
