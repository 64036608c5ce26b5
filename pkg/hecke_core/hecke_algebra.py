"""
扩展仿射 Hecke 代数 H
标准基 {T_x} 为主表示；Bernstein 形式 Σ c θ_λ T_w 是派生视图
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from hecke_core.errors import HeckeInputError, HeckeInternalError
from hecke_core.ext_affine_weyl import ExtAffElt, ExtendedAffineWeylGroup
from hecke_core.finite_weyl import WeylElt
from hecke_core.laurent import LaurentPoly, Scalar, parse_laurent, render, v_power
from hecke_core.models import Weight
from hecke_core.root_datum import add, scale, sub


logger = logging.getLogger(__name__)

V2 = v_power(2)
V_2 = v_power(-2)
ONE = LaurentPoly.one()

BernsteinKey = Tuple[Weight, WeylElt]


def _acc(target: Dict, key, coeff: LaurentPoly):
    """target[key] += coeff，并去掉零系数"""
    total = target.get(key)
    total = coeff if total is None else total + coeff
    if total.is_zero():
        target.pop(key, None)
    else:
        target[key] = total


class HeckeElt:
    """H 中的元素 Σ c_x T_x，不可变"""

    __slots__ = ("parent", "_terms")

    def __init__(self, parent: "HeckeAlgebra", terms: Optional[Mapping[ExtAffElt, LaurentPoly]] = None):
        self.parent = parent
        self._terms: Dict[ExtAffElt, LaurentPoly] = {
            x: c for x, c in (terms or {}).items() if not c.is_zero()
        }

    def items(self) -> Iterable[Tuple[ExtAffElt, LaurentPoly]]:
        return self._terms.items()

    def support(self) -> List[ExtAffElt]:
        return sorted(self._terms, key=self.parent.ext.sort_key)

    def coefficient(self, x: ExtAffElt) -> LaurentPoly:
        return self._terms.get(x, LaurentPoly.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "HeckeElt"):
        if other.parent is not self.parent:
            raise HeckeInputError("两个 Hecke 代数元素的父代数不同")

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        self._check(other)
        out = dict(self._terms)
        for x, c in other._terms.items():
            _acc(out, x, c)
        return HeckeElt(self.parent, out)

    def __neg__(self) -> "HeckeElt":
        return HeckeElt(self.parent, {x: -c for x, c in self._terms.items()})

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + (-other)

    def scale(self, coeff: Scalar) -> "HeckeElt":
        coeff = LaurentPoly.coerce(coeff)
        return HeckeElt(self.parent, {x: c * coeff for x, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElt):
            return self.parent.mul(self, other)
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"HeckeElt({self.parent.render(self)})"


@dataclass
class BernsteinForm:
    """
    Σ c_{λ,w} θ_λ T_w；theta_first 为 False 时表示 Σ c_{λ,w} T_w θ_λ
    """
    terms: Dict[BernsteinKey, LaurentPoly] = field(default_factory=dict)
    theta_first: bool = True

    def coefficient(self, lam: Weight, w: WeylElt) -> LaurentPoly:
        return self.terms.get((tuple(lam), w), LaurentPoly.zero())

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BernsteinForm):
            return NotImplemented
        return self.theta_first == other.theta_first and self.terms == other.terms


class HeckeAlgebra:
    """W_ex 上的 Hecke 代数，T_s^2 = v^2 T_1 + (v^2 - 1) T_s"""

    def __init__(self, ext: ExtendedAffineWeylGroup):
        self.ext = ext
        self.weyl = ext.weyl
        self.datum = ext.datum
        self._inverse_cache: Dict[ExtAffElt, HeckeElt] = {}
        self._theta_cache: Dict[Weight, HeckeElt] = {}
        self._finite_products: Dict[Tuple[WeylElt, WeylElt], Dict[WeylElt, LaurentPoly]] = {}
        self._t_theta_cache: Dict[Tuple[WeylElt, Weight], Dict[BernsteinKey, LaurentPoly]] = {}
        self._bernstein_of_T: Dict[ExtAffElt, Dict[BernsteinKey, LaurentPoly]] = {}

    # ========== 构造 ==========

    def zero(self) -> HeckeElt:
        return HeckeElt(self)

    def one(self) -> HeckeElt:
        return self.T(self.ext.identity)

    def T(self, x: ExtAffElt) -> HeckeElt:
        return HeckeElt(self, {x: ONE})

    def T_letter(self, letter: int) -> HeckeElt:
        return self.T(self.ext.generator(letter))

    def from_terms(self, terms: Mapping[ExtAffElt, Scalar]) -> HeckeElt:
        return HeckeElt(self, {x: LaurentPoly.coerce(c) for x, c in terms.items()})

    # ========== 乘法 ==========

    def _right_letter(self, terms: Mapping[ExtAffElt, LaurentPoly], letter: int) -> Dict[ExtAffElt, LaurentPoly]:
        """右乘 T_s"""
        ext = self.ext
        g = ext.generator(letter)
        out: Dict[ExtAffElt, LaurentPoly] = {}
        for y, c in terms.items():
            ys = ext.multiply(y, g)
            if ext.length(ys) > ext.length(y):
                _acc(out, ys, c)
            else:
                _acc(out, ys, c * V2)
                _acc(out, y, c * (V2 - 1))
        return out

    def _left_letter(self, letter: int, terms: Mapping[ExtAffElt, LaurentPoly]) -> Dict[ExtAffElt, LaurentPoly]:
        """左乘 T_s"""
        ext = self.ext
        g = ext.generator(letter)
        out: Dict[ExtAffElt, LaurentPoly] = {}
        for y, c in terms.items():
            sy = ext.multiply(g, y)
            if ext.length(sy) > ext.length(y):
                _acc(out, sy, c)
            else:
                _acc(out, sy, c * V2)
                _acc(out, y, c * (V2 - 1))
        return out

    def _right_element(self, terms: Mapping[ExtAffElt, LaurentPoly], x: ExtAffElt) -> Dict[ExtAffElt, LaurentPoly]:
        """右乘 T_x：沿约化字逐个字母，最后乘 T_γ"""
        word = self.ext.reduced_word(x)
        current: Mapping[ExtAffElt, LaurentPoly] = terms
        for letter in word.letters:
            current = self._right_letter(current, letter)
        if word.gamma != self.ext.identity:
            current = {self.ext.multiply(y, word.gamma): c for y, c in current.items()}
        return dict(current)

    def mul(self, a: HeckeElt, b: HeckeElt) -> HeckeElt:
        if a.parent is not self or b.parent is not self:
            raise HeckeInputError("参与乘法的元素不属于同一个 Hecke 代数")
        out: Dict[ExtAffElt, LaurentPoly] = {}
        for x, c in b.items():
            for y, d in self._right_element(a._terms, x).items():
                _acc(out, y, d * c)
        return HeckeElt(self, out)

    def left_mul_letter(self, letter: int, h: HeckeElt) -> HeckeElt:
        return HeckeElt(self, self._left_letter(letter, h._terms))

    def right_mul_letter(self, h: HeckeElt, letter: int) -> HeckeElt:
        return HeckeElt(self, self._right_letter(h._terms, letter))

    # ========== 逆与 bar 对合 ==========

    def invert_T(self, x: ExtAffElt) -> HeckeElt:
        """T_x^-1 = T_{γ^-1} T_{sk}^-1 ... T_{s1}^-1，其中 T_s^-1 = v^-2 T_s + (v^-2 - 1) T_1"""
        cached = self._inverse_cache.get(x)
        if cached is not None:
            return cached
        word = self.ext.reduced_word(x)
        terms: Dict[ExtAffElt, LaurentPoly] = {self.ext.inverse(word.gamma): ONE}
        for letter in reversed(word.letters):
            moved = self._right_letter(terms, letter)
            nxt: Dict[ExtAffElt, LaurentPoly] = {}
            for y, c in moved.items():
                _acc(nxt, y, c * V_2)
            for y, c in terms.items():
                _acc(nxt, y, c * (V_2 - 1))
            terms = nxt
        result = HeckeElt(self, terms)
        self._inverse_cache[x] = result
        return result

    def bar_involution(self, h: HeckeElt) -> HeckeElt:
        """Σ c_x T_x -> Σ bar(c_x) T_{x^-1}^-1"""
        out: Dict[ExtAffElt, LaurentPoly] = {}
        for x, c in h.items():
            cb = c.bar()
            for y, d in self.invert_T(self.ext.inverse(x)).items():
                _acc(out, y, d * cb)
        return HeckeElt(self, out)

    # ========== θ_λ ==========

    def theta_from_pair(self, mu: Weight, nu: Weight) -> HeckeElt:
        """v^{ℓ(t_ν) - ℓ(t_μ)} T_{t_μ} T_{t_ν}^-1，μ, ν 需对 S 支配"""
        s_all = self.datum.all_simple
        if not (self.datum.is_dominant_for(mu, s_all) and self.datum.is_dominant_for(nu, s_all)):
            raise HeckeInputError(f"θ 的分解 ({mu}, {nu}) 不是两个支配权")
        t_mu, t_nu = self.ext.translation(mu), self.ext.translation(nu)
        shift = self.ext.length(t_nu) - self.ext.length(t_mu)
        return self.mul(self.T(t_mu), self.invert_T(t_nu)).scale(v_power(shift))

    def theta(self, lam: Weight) -> HeckeElt:
        lam = self.datum.check_weight(lam)
        cached = self._theta_cache.get(lam)
        if cached is None:
            mu, nu = self.datum.dominant_difference(lam)
            cached = self.theta_from_pair(mu, nu)
            self._theta_cache[lam] = cached
        return cached

    def geometric_sum(self, lam: Weight, i: int) -> List[Tuple[Weight, int]]:
        """
        (θ_λ - θ_{s(λ)}) / (1 - θ_{-α}) 展开成有限和，返回 [(权, ±1)]
        d = <λ, α̌> >= 0 时为 Σ_{j<d} θ_{λ-jα}；d < 0 时为 -Σ_{j<-d} θ_{s(λ)-jα}
        """
        alpha = self.datum.simple_roots[i]
        d = self.datum.pairing(lam, i)
        if d >= 0:
            return [(sub(lam, scale(j, alpha)), 1) for j in range(d)]
        s_lam = self.datum.reflect(i, lam)
        return [(sub(s_lam, scale(j, alpha)), -1) for j in range(-d)]

    def theta_past_Ts(self, lam: Weight, i: int) -> BernsteinForm:
        """θ_λ T_s = T_s θ_{s(λ)} + (v^2 - 1) G，以 T 在左的形式返回"""
        lam = self.datum.check_weight(lam)
        s = self.weyl.simple(i)
        terms: Dict[BernsteinKey, LaurentPoly] = {(self.datum.reflect(i, lam), s): ONE}
        for mu, sign in self.geometric_sum(lam, i):
            _acc(terms, (mu, self.weyl.identity), (V2 - 1) * sign)
        return BernsteinForm(terms, theta_first=False)

    # ========== Bernstein 形式 ==========

    def from_bernstein(self, b: BernsteinForm) -> HeckeElt:
        out = self.zero()
        for (lam, w), c in b.terms.items():
            tw = self.T(self.ext.finite(w))
            th = self.theta(lam)
            prod = self.mul(th, tw) if b.theta_first else self.mul(tw, th)
            out = out + prod.scale(c)
        return out

    def _finite_product(self, y: WeylElt, u: WeylElt) -> Dict[WeylElt, LaurentPoly]:
        """有限 Hecke 代数中的 T_y T_u"""
        key = (y, u)
        cached = self._finite_products.get(key)
        if cached is not None:
            return cached
        terms: Dict[WeylElt, LaurentPoly] = {y: ONE}
        for i in u.word:
            s = self.weyl.simple(i)
            nxt: Dict[WeylElt, LaurentPoly] = {}
            for w, c in terms.items():
                ws = self.weyl.multiply(w, s)
                if ws.length > w.length:
                    _acc(nxt, ws, c)
                else:
                    _acc(nxt, ws, c * V2)
                    _acc(nxt, w, c * (V2 - 1))
            terms = nxt
        self._finite_products[key] = terms
        return terms

    def _bf_right_finite(self, terms: Mapping[BernsteinKey, LaurentPoly], u: WeylElt) -> Dict[BernsteinKey, LaurentPoly]:
        out: Dict[BernsteinKey, LaurentPoly] = {}
        for (lam, w), c in terms.items():
            for y, d in self._finite_product(w, u).items():
                _acc(out, (lam, y), c * d)
        return out

    def _t_times_theta(self, w: WeylElt, mu: Weight) -> Dict[BernsteinKey, LaurentPoly]:
        """T_w θ_μ 的 θT 形式；用 T_s θ_μ = θ_{s(μ)} T_s - (v^2 - 1) G(s(μ))"""
        key = (w, mu)
        cached = self._t_theta_cache.get(key)
        if cached is not None:
            return cached
        if w.length == 0:
            result = {(mu, self.weyl.identity): ONE}
        else:
            i = w.word[-1]
            s = self.weyl.simple(i)
            w_prefix = self.weyl.multiply(w, s)
            s_mu = self.datum.reflect(i, mu)
            result = self._bf_right_finite(self._t_times_theta(w_prefix, s_mu), s)
            for nu, sign in self.geometric_sum(s_mu, i):
                for k, c in self._t_times_theta(w_prefix, nu).items():
                    _acc(result, k, c * (V2 - 1) * (-sign))
        self._t_theta_cache[key] = result
        return result

    def bernstein_mul(self, a: Mapping[BernsteinKey, LaurentPoly], b: Mapping[BernsteinKey, LaurentPoly]) -> Dict[BernsteinKey, LaurentPoly]:
        """(θ_λ T_w)(θ_μ T_u) = θ_λ (T_w θ_μ) T_u"""
        out: Dict[BernsteinKey, LaurentPoly] = {}
        for (lam, w), c in a.items():
            for (mu, u), d in b.items():
                for (nu, y), e in self._t_times_theta(w, mu).items():
                    for z, f in self._finite_product(y, u).items():
                        _acc(out, (add(lam, nu), z), c * d * e * f)
        return out

    def _bernstein_letter(self, letter: int) -> Dict[BernsteinKey, LaurentPoly]:
        if not self.ext.is_affine_letter(letter):
            return {(self.datum.zero(), self.weyl.simple(letter)): ONE}
        # T_{s0} = v^{ℓ(t_θ)} θ_θ T_{s_θ}^-1
        g = self.ext.generator(letter)
        theta_root = g.translation
        s_theta = g.finite
        inv: Dict[WeylElt, LaurentPoly] = {self.weyl.identity: ONE}
        for i in reversed(s_theta.word):
            moved = self._bf_right_finite({(theta_root, w): c for w, c in inv.items()}, self.weyl.simple(i))
            nxt: Dict[WeylElt, LaurentPoly] = {}
            for (_, w), c in moved.items():
                _acc(nxt, w, c * V_2)
            for w, c in inv.items():
                _acc(nxt, w, c * (V_2 - 1))
            inv = nxt
        factor = v_power(self.ext.length(self.ext.translation(theta_root)))
        return {(theta_root, w): c * factor for w, c in inv.items()}

    def _bernstein_inverse_letter(self, letter: int) -> Dict[BernsteinKey, LaurentPoly]:
        out: Dict[BernsteinKey, LaurentPoly] = {}
        for k, c in self._bernstein_letter(letter).items():
            _acc(out, k, c * V_2)
        _acc(out, (self.datum.zero(), self.weyl.identity), V_2 - 1)
        return out

    def _bernstein_gamma(self, gamma: ExtAffElt) -> Dict[BernsteinKey, LaurentPoly]:
        """T_γ = T_{sk}^-1 ... T_{s1}^-1 T_{t_η}，t_η = s1 ... sk γ，η 支配且与 γ 的平移同余于根格"""
        lam = gamma.translation
        two_rho = self.datum.two_rho()
        deficit = max([-self.datum.pairing(lam, i) for i in range(self.datum.num_simple)] + [0])
        eta = add(lam, scale((deficit + 1) // 2, two_rho))
        t_eta = self.ext.translation(eta)
        word = self.ext.reduced_word(t_eta)
        if word.gamma != gamma:
            raise HeckeInternalError(f"t_{eta} 的 Γ 分量 {word.gamma!r} 与 {gamma!r} 不一致")
        result: Dict[BernsteinKey, LaurentPoly] = {(eta, self.weyl.identity): v_power(self.ext.length(t_eta))}
        for letter in word.letters:
            result = self.bernstein_mul(self._bernstein_inverse_letter(letter), result)
        return result

    def bernstein_of_T(self, x: ExtAffElt) -> Dict[BernsteinKey, LaurentPoly]:
        cached = self._bernstein_of_T.get(x)
        if cached is not None:
            return cached
        ext = self.ext
        if ext.length(x) == 0:
            if x == ext.identity:
                result = {(self.datum.zero(), self.weyl.identity): ONE}
            else:
                result = self._bernstein_gamma(x)
        else:
            s = ext.left_descent(x)
            rest = ext.multiply(ext.generator(s), x)
            result = self.bernstein_mul(self._bernstein_letter(s), self.bernstein_of_T(rest))
        self._bernstein_of_T[x] = result
        return result

    def to_bernstein(self, h: HeckeElt) -> BernsteinForm:
        out: Dict[BernsteinKey, LaurentPoly] = {}
        for x, c in h.items():
            for k, d in self.bernstein_of_T(x).items():
                _acc(out, k, c * d)
        return BernsteinForm(out, theta_first=True)

    # ========== 显示与序列化 ==========

    def render(self, h: HeckeElt) -> str:
        if h.is_zero():
            return "0"
        parts = []
        for x in reversed(h.support()):
            parts.append(f"({render(h.coefficient(x))})*T[{x.label()}]")
        return " + ".join(parts)

    def to_json(self, h: HeckeElt) -> List[Dict]:
        return [
            {"element": self.ext.to_dict(x), "coeff": render(h.coefficient(x))}
            for x in h.support()
        ]

    def from_json(self, data: List[Dict]) -> HeckeElt:
        terms: Dict[ExtAffElt, LaurentPoly] = {}
        for entry in data:
            try:
                _acc(terms, self.ext.from_dict(entry["element"]), parse_laurent(entry["coeff"]))
            except (KeyError, TypeError) as e:
                raise HeckeInputError(f"Hecke 元素条目格式错误: {entry!r}") from e
        return HeckeElt(self, terms)
