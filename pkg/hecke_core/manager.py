"""
Hecke 管理器：核心控制层
负责根数据到 KL 表的整条构造链、KL 表缓存的读写，以及按 (I, J) 缓存双陪集模
"""
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import sys
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import HeckeConfig
from hecke_core.double_coset_module import DoubleCosetModule
from hecke_core.errors import HeckeInputError
from hecke_core.expr import Value, parse_expression
from hecke_core.ext_affine_weyl import ExtAffElt, ExtendedAffineWeylGroup
from hecke_core.finite_weyl import WeylGroup
from hecke_core.hecke_algebra import HeckeAlgebra
from hecke_core.kl_basis import KazhdanLusztigBasis
from hecke_core.laurent import LaurentPoly
from hecke_core.models import SimpleSubset
from hecke_core.root_datum import RootDatum, preset
from storage.kl_storage import KLStorage


logger = logging.getLogger(__name__)

KLRow = Tuple[ExtAffElt, ExtAffElt, int, int, LaurentPoly]


def parse_subset(text: Optional[str], datum: RootDatum) -> SimpleSubset:
    """'S' 为全体，''/'none'/'∅' 为空集，否则为 1 起始的下标列表，如 '1,2'"""
    if text is None:
        return SimpleSubset.empty()
    text = text.strip()
    if text in ("", "none", "∅", "0"):
        return SimpleSubset.empty()
    if text.upper() == "S":
        return datum.all_simple
    try:
        items = [int(t) - 1 for t in text.replace(" ", ",").split(",") if t]
    except ValueError as e:
        raise HeckeInputError(f"无法解析单反射子集 {text!r}") from e
    return datum.check_subset(SimpleSubset.of(items))


class HeckeManager:
    """整合根数据、Weyl 群、Hecke 代数、KL 表与双陪集模"""

    def __init__(self, config: HeckeConfig = None):
        self.config = config or HeckeConfig()

        if self.config.datum_file:
            self.datum = RootDatum.load(self.config.datum_file)
        else:
            self.datum = preset(self.config.preset)
        self.weyl = WeylGroup(self.datum)
        self.ext = ExtendedAffineWeylGroup(
            self.weyl,
            gamma_window=self.config.gamma_window,
            max_iterations=self.config.max_iterations,
        )
        self.hecke = HeckeAlgebra(self.ext)
        self.kl = KazhdanLusztigBasis(self.hecke)

        # 初始化存储并预热 KL 表
        self.storage: Optional[KLStorage] = None
        if self.config.enable_cache:
            self.storage = KLStorage(self.config)
            for x, column in self.storage.load_columns(self.ext).items():
                self.kl.preload_column(x, column)

        self._modules: Dict[Tuple[SimpleSubset, SimpleSubset], DoubleCosetModule] = {}

    # ========== 双陪集模 ==========

    def subset(self, text: Optional[str]) -> SimpleSubset:
        return parse_subset(text, self.datum)

    def module(self, left: SimpleSubset, right: SimpleSubset) -> DoubleCosetModule:
        key = (left, right)
        if key not in self._modules:
            self._modules[key] = DoubleCosetModule(
                self.kl,
                left,
                right,
                straighten_cap=self.config.straighten_cap,
                check_invariants=self.config.check_invariants,
            )
        return self._modules[key]

    def parse(self, text: str, left: Optional[SimpleSubset] = None, right: Optional[SimpleSubset] = None) -> Value:
        module = None
        if left is not None and right is not None:
            module = self.module(left, right)
        return parse_expression(text, self.kl, module)

    # ========== KL 表 ==========

    def persist_kl_table(self) -> int:
        """把所有已完成的 C'_x 列写入缓存，返回列数"""
        if self.storage is None:
            return 0
        computed = self.kl.computed()
        for x in computed:
            self.storage.save_column(self.ext, x, self.kl.column(x))
        logger.info("已缓存 %s 的 %d 列", self.datum.name, len(computed))
        return len(computed)

    def kl_rows(self, max_len: int) -> List[KLRow]:
        """(y, x, ℓ(y), ℓ(x), P_{y,x})，x 取遍 enumerate_window(max_len)"""
        rows = []
        for x in self.ext.enumerate_window(max_len):
            column = self.kl.column(x)
            for y in sorted(column, key=self.ext.sort_key):
                rows.append((y, x, self.ext.length(y), self.ext.length(x), column[y]))
        return rows

    # ========== 摘要 ==========

    def coset_summary(self, left: SimpleSubset, right: SimpleSubset, weight_window: int) -> Dict[str, Any]:
        """W^{IJ}、每个 z 的 K = I ∩ zJ 以及窗口内的指标个数"""
        module = self.module(left, right)
        indices = module.coset_indices(weight_window)
        pieces = []
        for z in module.reps:
            pieces.append({
                "z": [i + 1 for i in z.word],
                "label": z.label(),
                "K": module.intersection(z).to_list(),
                "count": sum(1 for idx in indices if idx.z == z),
            })
        return {
            "datum": self.datum.name,
            "I": left.to_list(),
            "J": right.to_list(),
            "weight_window": weight_window,
            "pieces": pieces,
            "indices": [idx.to_dict() for idx in indices],
            "r_IJ": str(module.r_scalar()),
        }
