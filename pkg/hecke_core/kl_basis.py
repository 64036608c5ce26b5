"""
Kazhdan-Lusztig 多项式与基 C_x、C'_x

C'_x = v_x^-1 T_x + Σ_{y<x} v_x^-1 P_{y,x} T_y
C_x  = v_x^-1 T_x + Σ_{y<x} ε_y ε_x v_x v_y^-2 bar(P_{y,x}) T_y
"""
import logging
from typing import Dict, List, Mapping

from hecke_core.errors import HeckeInternalError
from hecke_core.ext_affine_weyl import ExtAffElt
from hecke_core.hecke_algebra import HeckeAlgebra, HeckeElt
from hecke_core.laurent import LaurentPoly, v_power


logger = logging.getLogger(__name__)


class KazhdanLusztigBasis:
    """KL 表：按列（每个 x 一列）缓存 C'_x"""

    def __init__(self, hecke: HeckeAlgebra):
        self.hecke = hecke
        self.ext = hecke.ext
        self._cprime: Dict[ExtAffElt, HeckeElt] = {}
        # 是否所有已算出的 P_{y,x} 都在 Z[v^2] 中，只记录不断言
        self.all_even = True

    # ========== C'_x ==========

    def c_prime(self, x: ExtAffElt) -> HeckeElt:
        cached = self._cprime.get(x)
        if cached is not None:
            return cached
        ext, hecke = self.ext, self.hecke
        if ext.length(x) == 0:
            result = hecke.T(x)
        else:
            y, gamma = ext.waf_gamma_decompose(x)
            if gamma != ext.identity:
                # C'_{yγ} = C'_y T_γ
                result = hecke.mul(self.c_prime(y), hecke.T(gamma))
            else:
                s = ext.left_descent(x)
                w = ext.multiply(ext.generator(s), x)
                cw = self.c_prime(w)
                # C'_s C'_w，C'_s = v^-1 (T_s + T_1)
                result = (hecke.left_mul_letter(s, cw) + cw).scale(v_power(-1))
                g = ext.generator(s)
                for z in cw.support():
                    if z == w or ext.length(ext.multiply(g, z)) > ext.length(z):
                        continue
                    mu = self.mu_coefficient(z, w)
                    if mu:
                        result = result - self.c_prime(z).scale(mu)
        self._check_column(x, result)
        self._cprime[x] = result
        logger.debug("C'_%s: %d 项", x.label(), len(result.support()))
        return result

    def _check_column(self, x: ExtAffElt, cx: HeckeElt):
        lx = self.ext.length(x)
        if cx.coefficient(x) != v_power(-lx):
            raise HeckeInternalError(f"C'_{x.label()} 中 T_x 的系数不是 v^{-lx}")
        for y, c in cx.items():
            if y == x:
                continue
            p = c.shift(lx)
            bound = lx - self.ext.length(y) - 1
            if p.valuation() < 0 or p.degree() > bound:
                raise HeckeInternalError(
                    f"P_{{{y.label()},{x.label()}}} = {p} 违反次数界 {bound}"
                )
            if not p.is_even():
                self.all_even = False

    def preload_column(self, x: ExtAffElt, column: Mapping[ExtAffElt, LaurentPoly]):
        """由缓存的 {y: P_{y,x}} 恢复 C'_x"""
        shift = v_power(-self.ext.length(x))
        cx = HeckeElt(self.hecke, {y: p * shift for y, p in column.items()})
        self._check_column(x, cx)
        self._cprime[x] = cx

    def computed(self) -> List[ExtAffElt]:
        return sorted(self._cprime, key=self.ext.sort_key)

    def column(self, x: ExtAffElt) -> Dict[ExtAffElt, LaurentPoly]:
        """{y: P_{y,x}}"""
        lx = self.ext.length(x)
        return {y: c.shift(lx) for y, c in self.c_prime(x).items()}

    # ========== 多项式 ==========

    def kl_polynomial(self, y: ExtAffElt, x: ExtAffElt) -> LaurentPoly:
        """P_{y,x} = v^{ℓ(x)} · (C'_x 中 T_y 的系数)"""
        if not self.ext.bruhat_leq(y, x):
            return LaurentPoly.zero()
        return self.c_prime(x).coefficient(y).shift(self.ext.length(x))

    def mu_coefficient(self, y: ExtAffElt, x: ExtAffElt) -> int:
        """P_{y,x} 中 v^{ℓ(x)-ℓ(y)-1} 的系数"""
        top = self.ext.length(x) - self.ext.length(y) - 1
        if top < 0:
            return 0
        return self.kl_polynomial(y, x).coefficient(top)

    # ========== C_x ==========

    def c_element(self, x: ExtAffElt) -> HeckeElt:
        lx = self.ext.length(x)
        terms = {}
        for y, c in self.c_prime(x).items():
            ly = self.ext.length(y)
            p = c.shift(lx)
            sign = -1 if (lx + ly) % 2 else 1
            terms[y] = p.bar().shift(lx - 2 * ly) * sign
        return HeckeElt(self.hecke, terms)


def solve_bar_invariant(hecke: HeckeAlgebra, x: ExtAffElt) -> HeckeElt:
    """
    不经递推，直接由 bar 不变性与次数条件解出 C'_x。
    记 T~_y = v^{-ℓ(y)} T_y，C'_x = Σ p_y T~_y，p_x = 1，p_y ∈ v^-1 Z[v^-1]；
    按长度自上而下，p_y 取 Σ_{z>y} bar(p_z) r_{y,z} 的负次部分
    """
    ext = hecke.ext
    ideal = sorted(ext.bruhat_ideal(x), key=ext.sort_key, reverse=True)
    p: Dict[ExtAffElt, LaurentPoly] = {x: LaurentPoly.one()}
    # r_{y,z}：bar(T~_z) 在 T~_y 上的系数
    bars = {z: hecke.invert_T(ext.inverse(z)) for z in ideal}
    for y in ideal:
        if y == x:
            continue
        ly = ext.length(y)
        q = LaurentPoly.zero()
        for z, pz in p.items():
            if ext.length(z) <= ly:
                continue
            r = bars[z].coefficient(y).shift(ext.length(z) + ly)
            if not r.is_zero():
                q = q + pz.bar() * r
        py = q.negative_part()
        if not py.is_zero():
            p[y] = py
    return HeckeElt(hecke, {y: c.shift(-ext.length(y)) for y, c in p.items()})
