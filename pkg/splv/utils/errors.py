"""
异常定义 - 验证工具的统一异常层次
"""
from typing import Optional


class SplvError(Exception):
    """所有 splv 异常的基类"""


class ScopeError(SplvError):
    """谓词引用了未声明的变量、域外常量，或比较了不同域的变量"""


class ModelError(SplvError):
    """状态机结构错误：未知状态/事件、重名、不一致的 ρ 或守卫"""


class ParseError(SplvError):
    """文本格式语法错误，带 1 起始的行列号"""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")


class ValidityError(SplvError):
    """配置不完整、取值越界或不满足全局谓词"""


class CompositionError(SplvError):
    """组合时变量名冲突或组合谓词不一致"""


class CapacityError(SplvError):
    """超出枚举预算、CEGAR 迭代上限或单体检查规模上限"""


class QbfFormatError(SplvError):
    """QDIMACS/QCIR 输入格式错误或量词前缀不受支持"""


class InternalError(SplvError):
    """内部不一致，例如不同检查模式给出不同结论"""
