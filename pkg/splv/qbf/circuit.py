"""
布尔电路 - 与非图(AIG)风格的共享电路，引用为带符号整数

节点 1 是常量真，引用 -r 表示 r 的否定；与门按子引用排序去重后哈希共享。
"""
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

TRUE = 1
FALSE = -1


class Circuit:
    """可增长的布尔电路，节点按创建顺序拓扑有序"""

    def __init__(self):
        # 下标 0 占位，1 为常量节点
        self._kinds: List[str] = ["", "const"]
        self._children: List[Tuple[int, ...]] = [(), ()]
        self._names: List[Optional[str]] = [None, None]
        self._inputs: Dict[str, int] = {}
        self._and_cache: Dict[Tuple[int, ...], int] = {}

    def __len__(self) -> int:
        return len(self._kinds) - 1

    def _new_node(self, kind: str, children: Tuple[int, ...] = (), name: Optional[str] = None) -> int:
        self._kinds.append(kind)
        self._children.append(children)
        self._names.append(name)
        return len(self._kinds) - 1

    def input(self, name: str) -> int:
        """按名称取得(或创建)输入节点"""
        ref = self._inputs.get(name)
        if ref is None:
            ref = self._inputs[name] = self._new_node("input", name=name)
        return ref

    def is_input(self, ref: int) -> bool:
        return self._kinds[abs(ref)] == "input"

    def is_and(self, ref: int) -> bool:
        return self._kinds[abs(ref)] == "and"

    def name(self, ref: int) -> str:
        name = self._names[abs(ref)]
        if name is None:
            raise ValueError(f"节点 {ref} 不是输入")
        return name

    def children(self, ref: int) -> Tuple[int, ...]:
        return self._children[abs(ref)]

    def conj(self, *refs: int) -> int:
        """与门，做常量折叠、互补检测与去重"""
        items = set()
        for r in refs:
            if r == FALSE:
                return FALSE
            if r == TRUE:
                continue
            if -r in items:
                return FALSE
            items.add(r)
        if not items:
            return TRUE
        if len(items) == 1:
            return next(iter(items))
        key = tuple(sorted(items, key=lambda r: (abs(r), r)))
        node = self._and_cache.get(key)
        if node is None:
            node = self._and_cache[key] = self._new_node("and", key)
        return node

    def disj(self, *refs: int) -> int:
        return -self.conj(*(-r for r in refs))

    def implies(self, a: int, b: int) -> int:
        return self.disj(-a, b)

    def iff(self, a: int, b: int) -> int:
        return self.conj(self.implies(a, b), self.implies(b, a))

    def cone(self, roots: Iterable[int]) -> List[int]:
        """roots 可达的全部节点编号，按拓扑序(子节点在前)"""
        seen = set()
        stack = [abs(r) for r in roots]
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(abs(c) for c in self._children[node])
        return sorted(seen)

    def support(self, root: int) -> List[str]:
        """root 依赖的输入名，按创建顺序"""
        return [self._names[n] for n in self.cone([root]) if self._kinds[n] == "input"]

    def evaluate(self, root: int, values: Mapping[str, bool]) -> bool:
        """
        在输入赋值下求值

        Args:
            root: 电路引用
            values: 输入名到布尔值，缺省输入按 False 处理

        Returns:
            真值
        """
        cache: Dict[int, bool] = {}
        for node in self.cone([root]):
            kind = self._kinds[node]
            if kind == "const":
                cache[node] = True
            elif kind == "input":
                cache[node] = bool(values.get(self._names[node], False))
            else:
                cache[node] = all(cache[abs(c)] == (c > 0) for c in self._children[node])
        result = cache[abs(root)]
        return result if root > 0 else not result

    def substitute(self, root: int, values: Mapping[str, bool]) -> int:
        """
        把部分输入替换为常量并化简

        Args:
            root: 电路引用
            values: 被替换的输入名到布尔值

        Returns:
            新的电路引用
        """
        mapped: Dict[int, int] = {}
        for node in self.cone([root]):
            kind = self._kinds[node]
            if kind == "const":
                mapped[node] = TRUE
            elif kind == "input":
                name = self._names[node]
                mapped[node] = (TRUE if values[name] else FALSE) if name in values else node
            else:
                mapped[node] = self.conj(*(mapped[abs(c)] if c > 0 else -mapped[abs(c)]
                                           for c in self._children[node]))
        result = mapped[abs(root)]
        return result if root > 0 else -result

    def conjuncts(self, root: int) -> List[int]:
        """把顶层与门拆成合取项"""
        if root > 0 and self.is_and(root):
            return list(self._children[root])
        if root == TRUE:
            return []
        return [root]

