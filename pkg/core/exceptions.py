"""
异常定义

所有模块只抛出 LmgError 家族的异常，CLI 按类别映射退出码：
参数类错误 -> 2，数值类错误 -> 3，I/O 错误 (OSError) -> 4。
"""


class LmgError(Exception):
    """模拟器异常基类"""


class InvalidParameterError(LmgError, ValueError):
    """参数越界、非有限值或温度非法"""


class BathOrderError(InvalidParameterError):
    """热库温度顺序错误 (要求 T1 > T2 > 0)"""


class InvalidBracketError(InvalidParameterError):
    """能级交叉搜索区间端点不是合法参数"""


class LabelMismatchError(LmgError, ValueError):
    """能量与占据概率的标签不对齐"""


class ProtocolVariantError(LmgError, TypeError):
    """绝热协议类型不符合操作要求"""


class UnknownPresetError(LmgError, KeyError):
    """未知的图预设名称"""

    def __str__(self) -> str:
        # KeyError 默认会给消息加引号
        return str(self.args[0]) if self.args else ""


class NumericalError(LmgError, ArithmeticError):
    """数值计算失败"""


class ConvergenceError(NumericalError):
    """Jacobi 迭代在旋转预算内未收敛"""


class BaselineZeroError(NumericalError):
    """单比特基准功 w_q 为零，功比值无定义"""


class NoEnginePointError(NumericalError):
    """扫描网格上没有任何热机工作点，目标函数无定义"""
