"""
仿射 Hecke 代数与双陪集模计算的配置
默认窗口偏小，保证整套验证能在笔记本上几分钟内跑完
"""

from dataclasses import dataclass, field
from typing import Optional
import os


@dataclass
class HeckeConfig:
    """计算与验证配置"""

    # ========== 存储配置 ==========
    # 数据存储路径
    data_dir: str = field(default_factory=lambda: os.getenv("HECKE_DATA_DIR", "./data"))
    # KL 表缓存数据库文件名
    db_name: str = "kl_cache.db"
    # 是否把算好的 KL 列写入 SQLite 并在启动时读回
    enable_cache: bool = True

    # ========== 根数据配置 ==========
    # 预设名: A1, A2, B2, G2, A1ad, A2ad, GL2, A1affine
    preset: str = "A1"
    # 根数据 JSON 文件（给出时优先于 preset）
    datum_file: Optional[str] = None

    # ========== 窗口配置 ==========
    # W_ex 元素的长度上限
    length_window: int = 4
    # 权坐标绝对值上限
    weight_window: int = 2
    # Γ 无限时平移坐标的截断
    gamma_window: int = 2

    # ========== 终止保护 ==========
    # 拉直的最大改写次数
    straighten_cap: int = 10_000
    # 支配化与下降剥离的最大步数
    max_iterations: int = 10_000

    # ========== 检查配置 ==========
    # 构造 H^{IJ} 元素时检查 T_s 的 -1 特征性质
    check_invariants: bool = True
    # 随机抽样的种子
    random_seed: int = 0
    # 结合律抽样的三元组个数
    associativity_samples: int = 100
    # θ 乘法性抽样的权对个数
    theta_samples: int = 50
    # suite 中各 (I, J) 检查的进程数，1 为顺序执行
    workers: int = 1

    # ========== 日志配置 ==========
    log_level: str = field(default_factory=lambda: os.getenv("HECKE_LOG_LEVEL", "WARNING"))

    def get_db_path(self) -> str:
        """获取数据库完整路径"""
        return os.path.join(self.data_dir, self.db_name)


# 预设配置模板
class ConfigPresets:
    """配置预设模板"""

    @staticmethod
    def minimal() -> HeckeConfig:
        """最小配置：不落盘，窗口最小，适合测试"""
        return HeckeConfig(
            enable_cache=False,
            length_window=3,
            weight_window=1,
            associativity_samples=10,
            theta_samples=10,
        )

    @staticmethod
    def default() -> HeckeConfig:
        return HeckeConfig(length_window=4, weight_window=2)

    @staticmethod
    def extended() -> HeckeConfig:
        """扩展窗口：耗时明显更长"""
        return HeckeConfig(length_window=6, weight_window=3)


# 默认配置实例
default_config = HeckeConfig()
