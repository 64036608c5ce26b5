"""
异常类型
输入错误与内部错误分开，CLI 据此决定退出码
"""


class HeckeError(Exception):
    """所有异常的基类"""


class HeckeInputError(HeckeError, ValueError):
    """调用方输入不合法（下标越界、父对象不一致、表达式无法解析等）"""


class RootDatumError(HeckeInputError):
    """根数据构造阶段校验失败"""


class HeckeInternalError(HeckeError, RuntimeError):
    """内部不变量被破坏（迭代上限、下降剥离停滞、次数界违例等）"""


class StraighteningError(HeckeInternalError):
    """拉直算法超过改写次数上限"""
