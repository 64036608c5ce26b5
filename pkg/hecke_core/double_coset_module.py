"""
双陪集模 H^{IJ} = C_{w_I} H C_{w_J}

元素以 H 中的载体保存，三组基（标准基、Bernstein 基、KL 基）的坐标都是派生视图：
  T_{λ,z}  = χ(T_{m_{λ,z}})
  θ 基      = χ(θ_λ T_z)
  C'_{λ,z} = χ(C'_{m_{λ,z}})
"""
import logging
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from hecke_core.errors import HeckeInputError, HeckeInternalError, StraighteningError
from hecke_core.ext_affine_weyl import ExtAffElt
from hecke_core.finite_weyl import WeylElt
from hecke_core.hecke_algebra import HeckeAlgebra, HeckeElt, _acc
from hecke_core.kl_basis import KazhdanLusztigBasis
from hecke_core.laurent import LaurentPoly, Scalar, v_power
from hecke_core.models import CosetIndex, SimpleSubset, Weight


logger = logging.getLogger(__name__)

V2 = v_power(2)
BASES = ("standard", "bernstein", "kl")

Coords = Dict[CosetIndex, LaurentPoly]


def c_wI(hecke: HeckeAlgebra, subset: SimpleSubset) -> HeckeElt:
    """C_{w_I} = (-v)^{ℓ(w_I)} Σ_{y∈W_I} ε_y v^{-2ℓ(y)} T_y"""
    weyl = hecke.weyl
    top = weyl.longest_element(subset).length
    sign = -1 if top % 2 else 1
    terms = {}
    for y in weyl.parabolic(subset):
        eps = -1 if y.length % 2 else 1
        terms[hecke.ext.finite(y)] = v_power(top - 2 * y.length) * (sign * eps)
    return HeckeElt(hecke, terms)


class HIJElt:
    """H^{IJ} 中的元素：载体 χ(h) 以及一个原像 h"""

    __slots__ = ("module", "carrier", "preimage")

    def __init__(self, module: "DoubleCosetModule", carrier: HeckeElt, preimage: HeckeElt):
        self.module = module
        self.carrier = carrier
        self.preimage = preimage

    @property
    def left(self) -> SimpleSubset:
        return self.module.left

    @property
    def right(self) -> SimpleSubset:
        return self.module.right

    def is_zero(self) -> bool:
        return self.carrier.is_zero()

    def _check(self, other: "HIJElt"):
        if other.module is not self.module:
            raise HeckeInputError(
                f"H^{{IJ}} 元素来自不同的模: ({self.left.label()}, {self.right.label()}) "
                f"与 ({other.left.label()}, {other.right.label()})"
            )

    def __add__(self, other: "HIJElt") -> "HIJElt":
        self._check(other)
        return HIJElt(self.module, self.carrier + other.carrier, self.preimage + other.preimage)

    def __neg__(self) -> "HIJElt":
        return HIJElt(self.module, -self.carrier, -self.preimage)

    def __sub__(self, other: "HIJElt") -> "HIJElt":
        return self + (-other)

    def scale(self, coeff: Scalar) -> "HIJElt":
        return HIJElt(self.module, self.carrier.scale(coeff), self.preimage.scale(coeff))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HIJElt):
            return NotImplemented
        return self.module is other.module and self.carrier == other.carrier

    __hash__ = None

    def __repr__(self) -> str:
        return f"HIJElt{self.left.label()}{self.right.label()}({self.module.hecke.render(self.carrier)})"


class DoubleCosetModule:
    """固定 (I, J) 的 H^{IJ}"""

    def __init__(
        self,
        kl: KazhdanLusztigBasis,
        left: SimpleSubset,
        right: SimpleSubset,
        straighten_cap: int = 10_000,
        check_invariants: bool = True,
    ):
        self.kl = kl
        self.hecke = kl.hecke
        self.ext = kl.ext
        self.weyl = self.ext.weyl
        self.datum = self.ext.datum
        self.left = self.datum.check_subset(left)
        self.right = self.datum.check_subset(right)
        self.straighten_cap = straighten_cap
        self.check_invariants = check_invariants

        self.c_left = c_wI(self.hecke, self.left)
        self.c_right = c_wI(self.hecke, self.right)
        self.reps: List[WeylElt] = self.weyl.min_double_coset_reps(self.left, self.right)
        self._intersections: Dict[WeylElt, SimpleSubset] = {
            z: self.weyl.parabolic_intersection(z, self.left, self.right) for z in self.reps
        }
        self._straighten_cache: Dict[Tuple[Weight, WeylElt], Dict[Weight, LaurentPoly]] = {}
        self._kl_standard_cache: Dict[CosetIndex, Coords] = {}
        self._r: Optional[LaurentPoly] = None
        logger.info(
            "H^{IJ} %s: I=%s J=%s, |W^{IJ}| = %d",
            self.datum.name, self.left.label(), self.right.label(), len(self.reps),
        )

    def label(self) -> str:
        return f"({self.left.label()}, {self.right.label()})"

    # ========== χ 与元素构造 ==========

    def chi(self, h: HeckeElt) -> HIJElt:
        carrier = self.hecke.mul(self.hecke.mul(self.c_left, h), self.c_right)
        return self._make(carrier, h)

    def _make(self, carrier: HeckeElt, preimage: HeckeElt) -> HIJElt:
        if self.check_invariants:
            self.check_annihilation(carrier)
        return HIJElt(self, carrier, preimage)

    def zero(self) -> HIJElt:
        z = self.hecke.zero()
        return HIJElt(self, z, z)

    def check_annihilation(self, carrier: HeckeElt):
        """T_t · e = -e（t ∈ I），e · T_s = -e（s ∈ J）"""
        for i in self.left:
            if self.hecke.left_mul_letter(i, carrier) != -carrier:
                raise HeckeInternalError(f"载体在左乘 T_s{i + 1} 下不是 -1 特征向量")
        for j in self.right:
            if self.hecke.right_mul_letter(carrier, j) != -carrier:
                raise HeckeInternalError(f"载体在右乘 T_s{j + 1} 下不是 -1 特征向量")

    def bar_hij(self, e: HIJElt) -> HIJElt:
        """bar(C_I h C_J) = C_I bar(h) C_J"""
        return HIJElt(self, self.hecke.bar_involution(e.carrier), self.hecke.bar_involution(e.preimage))

    # ========== 指标 ==========

    def intersection(self, z: WeylElt) -> SimpleSubset:
        cached = self._intersections.get(z)
        if cached is None:
            cached = self.weyl.parabolic_intersection(z, self.left, self.right)
        return cached

    def index(self, lam: Iterable[int], z: WeylElt) -> CosetIndex:
        lam = tuple(lam)
        self.ext.check_coset_index(lam, z, self.left, self.right)
        return CosetIndex(lam, z)

    def index_of(self, x: ExtAffElt) -> CosetIndex:
        """x 所在双陪集的指标"""
        lam, z = self.ext.canonical_rep(x, self.left, self.right)
        return CosetIndex(lam, z)

    def minimal_element(self, idx: CosetIndex) -> ExtAffElt:
        return self.ext.minimal_length_rep(idx.weight, idx.z, self.left, self.right)

    def coset_indices(self, weight_window: int) -> List[CosetIndex]:
        """z ∈ W^{IJ}，λ ∈ X(T)_z^+ 且坐标绝对值不超过 weight_window"""
        out = []
        for z in self.reps:
            k = self._intersections[z]
            for lam in self.datum.weights_in_box(weight_window):
                if self.datum.is_dominant_for(lam, k):
                    out.append(CosetIndex(lam, z))
        return sorted(out, key=lambda idx: (idx.z.length, idx.z.word, idx.weight))

    # ========== 三组基 ==========

    def standard_basis_elt(self, idx: CosetIndex) -> HIJElt:
        return self.chi(self.hecke.T(self.minimal_element(idx)))

    def bernstein_basis_elt(self, idx: CosetIndex) -> HIJElt:
        self.index(idx.weight, idx.z)
        return self.chi(self.hecke.mul(self.hecke.theta(idx.weight), self.hecke.T(self.ext.finite(idx.z))))

    def kl_basis_elt(self, idx: CosetIndex) -> HIJElt:
        return self.chi(self.kl.c_prime(self.minimal_element(idx)))

    def basis_elt(self, basis: str, idx: CosetIndex) -> HIJElt:
        if basis == "standard":
            return self.standard_basis_elt(idx)
        if basis == "bernstein":
            return self.bernstein_basis_elt(idx)
        if basis == "kl":
            return self.kl_basis_elt(idx)
        raise HeckeInputError(f"未知的基 {basis!r}，可选 {', '.join(BASES)}")

    def chi_cprime_vanishing(self, x: ExtAffElt) -> HIJElt:
        """χ(C'_x)；x 不是其双陪集最短元时为 0"""
        return self.chi(self.kl.c_prime(x))

    def expand(self, basis: str, coords: Mapping[CosetIndex, LaurentPoly]) -> HIJElt:
        """Σ c_idx · (basis 中的 idx 元素)"""
        out = self.zero()
        for idx, c in coords.items():
            out = out + self.basis_elt(basis, idx).scale(c)
        return out

    # ========== 拉直 ==========

    def _deficiency(self, mu: Weight, k: SimpleSubset) -> int:
        return sum(max(0, -self.datum.pairing(mu, i)) for i in k)

    def straighten(self, mu: Iterable[int], z: WeylElt) -> Dict[Weight, LaurentPoly]:
        """
        把 χ(θ_μ T_z) 写成 Σ c_λ χ(θ_λ T_z)，λ ∈ X(T)_z^+。
        对 α ∈ Π_K，K = I ∩ zJ，若 d = -<μ,α̌> > 0：
          χ(θ_μ T_z) = χ(θ_{sμ} T_z) + (v^2 - 1) Σ_{j<d} χ(θ_{sμ-jα} T_z)
        """
        mu = self.datum.check_weight(tuple(mu))
        if not self.weyl.is_minimal_double_coset_rep(z, self.left, self.right):
            raise HeckeInputError(f"{z!r} 不在 W^{{IJ}} 中")
        key = (mu, z)
        cached = self._straighten_cache.get(key)
        if cached is not None:
            return cached
        k = self.intersection(z)
        pending: Dict[Weight, LaurentPoly] = {mu: LaurentPoly.one()}
        done: Dict[Weight, LaurentPoly] = {}
        rewrites = 0
        while pending:
            # 先处理不支配程度最大的权
            lam = max(pending, key=lambda w: (self._deficiency(w, k), w))
            c = pending.pop(lam)
            bad = next((i for i in k if self.datum.pairing(lam, i) < 0), None)
            if bad is None:
                _acc(done, lam, c)
                continue
            rewrites += 1
            if rewrites > self.straighten_cap:
                raise StraighteningError(
                    f"拉直 θ_{mu} T_{z.label()} 超过 {self.straighten_cap} 次改写"
                )
            s_lam = self.datum.reflect(bad, lam)
            _acc(pending, s_lam, c)
            for nu, sign in self.hecke.geometric_sum(s_lam, bad):
                _acc(pending, nu, c * (V2 - 1) * sign)
        logger.debug("拉直 θ_%s T_%s: %d 次改写, %d 项", mu, z.label(), rewrites, len(done))
        self._straighten_cache[key] = done
        return done

    def straightening_table(self, z: WeylElt, weights: Iterable[Weight]) -> Dict[Weight, Dict[Weight, LaurentPoly]]:
        """每个对 K 不支配的 μ 的拉直系数"""
        k = self.intersection(z)
        return {
            tuple(mu): self.straighten(mu, z)
            for mu in weights
            if not self.datum.is_dominant_for(tuple(mu), k)
        }

    # ========== 坐标 ==========

    def _push_theta(
        self, mu: Weight, letters: Tuple[int, ...], z: WeylElt, memo: Dict
    ) -> Dict[Weight, LaurentPoly]:
        """
        C_I θ_μ T_{w1} T_z C_J 的拉直坐标，w1 ∈ W_I 的约化字为 letters。
        θ_μ T_s = T_s θ_{sμ} + (v^2 - 1) G(μ)，而 C_I T_s = -C_I
        """
        key = (mu, letters)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if not letters:
            result = dict(self.straighten(mu, z))
        else:
            a, rest = letters[0], letters[1:]
            result: Dict[Weight, LaurentPoly] = {}
            for lam, c in self._push_theta(self.datum.reflect(a, mu), rest, z, memo).items():
                _acc(result, lam, -c)
            for nu, sign in self.hecke.geometric_sum(mu, a):
                for lam, c in self._push_theta(nu, rest, z, memo).items():
                    _acc(result, lam, c * (V2 - 1) * sign)
        memo[key] = result
        return result

    def to_bernstein_coords(self, e: HIJElt) -> Coords:
        """e 在 Bernstein 基 {χ(θ_λ T_z)} 下的坐标"""
        bf = self.hecke.to_bernstein(e.preimage)
        memos: Dict[WeylElt, Dict] = {}
        out: Coords = {}
        for (mu, w), c in bf.terms.items():
            w1, z, w2 = self.weyl.double_coset_decompose(w, self.left, self.right)
            sign = -1 if w2.length % 2 else 1
            memo = memos.setdefault(z, {})
            for lam, d in self._push_theta(mu, w1.word, z, memo).items():
                _acc(out, CosetIndex(lam, z), c * d * sign)
        return out

    def standard_coords(self, e: HIJElt) -> Coords:
        """e 在标准基 {T_{λ,z}} 下的坐标：T_y = T_{w1} T_m T_{w2}，长度相加"""
        out: Coords = {}
        for y, c in e.preimage.items():
            w1, m, w2 = self.ext.factor_through_minimal(y, self.left, self.right)
            sign = -1 if (w1.length + w2.length) % 2 else 1
            _acc(out, self.index_of(m), c * sign)
        return out

    def kl_coords(self, e: HIJElt) -> Coords:
        """由标准基坐标做三角消去；C'_{λ,z} 在 T_{λ,z} 上的系数为 v^{-ℓ(m)}"""
        remaining = self.standard_coords(e)
        out: Coords = {}
        for _ in range(self.ext.max_iterations):
            if not remaining:
                return out
            idx = max(remaining, key=lambda i: self.ext.sort_key(self.minimal_element(i)))
            lead = remaining[idx].shift(self.ext.length(self.minimal_element(idx)))
            _acc(out, idx, lead)
            for j, c in self.kl_standard_coords(idx).items():
                _acc(remaining, j, -(c * lead))
        raise HeckeInternalError(f"KL 基坐标的三角消去超过 {self.ext.max_iterations} 步")

    def kl_standard_coords(self, idx: CosetIndex) -> Coords:
        cached = self._kl_standard_cache.get(idx)
        if cached is None:
            cached = self.standard_coords(self.kl_basis_elt(idx))
            self._kl_standard_cache[idx] = cached
        return cached

    def coords(self, basis: str, e: HIJElt) -> Coords:
        if basis == "standard":
            return self.standard_coords(e)
        if basis == "bernstein":
            return self.to_bernstein_coords(e)
        if basis == "kl":
            return self.kl_coords(e)
        raise HeckeInputError(f"未知的基 {basis!r}，可选 {', '.join(BASES)}")

    def transition_matrix(
        self, source: str, target: str, indices: Iterable[CosetIndex]
    ) -> Dict[CosetIndex, Coords]:
        """source 基中每个元素在 target 基下的坐标"""
        return {idx: self.coords(target, self.basis_elt(source, idx)) for idx in indices}

    # ========== 滤过 ==========

    def filtration_coords(self, e: HIJElt) -> Dict[WeylElt, Dict[Weight, LaurentPoly]]:
        """按 z 分组的 Bernstein 坐标，对应分次块 H^{IJ}_z"""
        groups: Dict[WeylElt, Dict[Weight, LaurentPoly]] = {}
        for idx, c in self.to_bernstein_coords(e).items():
            groups.setdefault(idx.z, {})[idx.weight] = c
        return groups

    def in_filtration(self, e: HIJElt, z: WeylElt) -> bool:
        """e ∈ H^{IJ}_{<=z}"""
        return all(self.weyl.bruhat_leq(z2, z) for z2 in self.filtration_coords(e))

    # ========== v -> 1 ==========

    def specialize_v1(self, e: HIJElt, normalized: bool = False) -> Dict[ExtAffElt, int]:
        """
        载体逐项在 v = 1 处取值。C_{w_I} 在 v = 1 处为 (-1)^{ℓ(w_I)} ε_I，
        normalized 时乘以 (-1)^{ℓ(w_I)+ℓ(w_J)}，于是 χ(h) 落到 ε_I h ε_J
        """
        sign = 1
        if normalized:
            flips = self.weyl.longest_element(self.left).length + self.weyl.longest_element(self.right).length
            sign = -1 if flips % 2 else 1
        out = {}
        for x, c in e.carrier.items():
            value = c.eval_at_one() * sign
            if value:
                out[x] = value
        return out

    # ========== r_{IJ} ==========

    def _r_for(self, subset: SimpleSubset) -> LaurentPoly:
        """C_{w_K}^2 = r_K C_{w_K}"""
        c = c_wI(self.hecke, subset)
        square = self.hecke.mul(c, c)
        top = self.ext.finite(self.weyl.longest_element(subset))
        r = square.coefficient(top).divide_by_unit(c.coefficient(top))
        if r.is_zero() or square != c.scale(r):
            raise HeckeInternalError(f"C_{{w_{subset.label()}}} 的平方不是它的非零倍数")
        return r

    def r_scalar(self) -> LaurentPoly:
        """χ∘χ = r_{IJ}·χ，r_{IJ} = r_I r_J"""
        if self._r is None:
            self._r = self._r_for(self.left) * self._r_for(self.right)
            logger.info("r_IJ %s = %s", self.label(), self._r)
        return self._r
