"""
验证套件
每项性质用 @check 注册一次；per_case 的检查对每个 (I, J) 各跑一遍。
检查函数返回 None 表示通过，返回字符串即为可复现的反例
"""
import itertools
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy import Matrix

from config import HeckeConfig
from hecke_core.double_coset_module import DoubleCosetModule, c_wI
from hecke_core.errors import HeckeError, HeckeInputError
from hecke_core.ext_affine_weyl import ExtAffElt
from hecke_core.hecke_algebra import HeckeElt
from hecke_core.kl_basis import solve_bar_invariant
from hecke_core.laurent import LaurentPoly, v_power
from hecke_core.manager import HeckeManager
from hecke_core.models import CheckRecord, CosetIndex, SimpleSubset, SuiteReport
from hecke_core.root_datum import add


logger = logging.getLogger(__name__)

V2 = v_power(2)

Case = Tuple[SimpleSubset, SimpleSubset]


@dataclass
class SuiteContext:
    manager: HeckeManager
    config: HeckeConfig
    cases: List[Case]
    rng: random.Random
    _window: Optional[List[ExtAffElt]] = field(default=None, repr=False)

    @property
    def window(self) -> List[ExtAffElt]:
        if self._window is None:
            self._window = self.manager.ext.enumerate_window(self.config.length_window)
        return self._window

    @property
    def weights(self):
        return list(self.manager.datum.weights_in_box(self.config.weight_window))


CheckFn = Callable[..., Optional[str]]


@dataclass(frozen=True)
class RegisteredCheck:
    name: str
    fn: CheckFn
    per_case: bool


_REGISTRY: Dict[str, RegisteredCheck] = {}


def check(name: str, per_case: bool = False):
    def decorator(fn: CheckFn) -> CheckFn:
        if name in _REGISTRY:
            raise ValueError(f"检查 {name} 重复注册")
        _REGISTRY[name] = RegisteredCheck(name, fn, per_case)
        return fn
    return decorator


def registered_checks() -> List[str]:
    return list(_REGISTRY)


# ========== 根数据与有限 Weyl 群 ==========

@check("root_datum.reflection_involution")
def _reflection_involution(ctx: SuiteContext) -> Optional[str]:
    datum = ctx.manager.datum
    for lam in ctx.weights:
        for i in range(datum.num_simple):
            s_lam = datum.reflect(i, lam)
            if datum.reflect(i, s_lam) != lam or datum.pairing(s_lam, i) != -datum.pairing(lam, i):
                return f"s{i + 1} 作用在 {lam} 上"
    return None


@check("root_datum.dominant_difference")
def _dominant_difference(ctx: SuiteContext) -> Optional[str]:
    datum = ctx.manager.datum
    for lam in ctx.weights:
        mu, nu = datum.dominant_difference(lam)
        ok = datum.is_dominant_for(mu, datum.all_simple) and datum.is_dominant_for(nu, datum.all_simple)
        if not ok or add(lam, nu) != mu:
            return f"λ = {lam} -> ({mu}, {nu})"
    return None


def _all_subsets(n: int) -> List[SimpleSubset]:
    return [
        SimpleSubset.of(items)
        for r in range(n + 1)
        for items in itertools.combinations(range(n), r)
    ]


@check("root_datum.dominant_representative")
def _dominant_representative(ctx: SuiteContext) -> Optional[str]:
    """μ = w(λ) 对 I 支配，w ∈ W_I，且对 μ 再求一次不动"""
    datum, weyl = ctx.manager.datum, ctx.manager.weyl
    for subset in _all_subsets(datum.num_simple):
        for lam in ctx.weights:
            mu, word = datum.dominant_representative(lam, subset)
            if not datum.is_dominant_for(mu, subset) or any(i not in subset for i in word):
                return f"λ = {lam}, I = {subset.label()} -> {mu}"
            if weyl.from_word(word).act(lam) != mu:
                return f"w(λ) ≠ μ: λ = {lam}, I = {subset.label()}"
            if datum.dominant_representative(mu, subset) != (mu, ()):
                return f"不幂等: λ = {lam}, I = {subset.label()}"
    return None


@check("root_datum.reflections_permute_roots")
def _reflections_permute_roots(ctx: SuiteContext) -> Optional[str]:
    datum = ctx.manager.datum
    roots = set(datum.positive_roots) | {tuple(-x for x in r) for r in datum.positive_roots}
    for k, beta in enumerate(datum.positive_roots):
        if datum.reflect_general(k, beta) != tuple(-x for x in beta):
            return f"s_β(β) ≠ -β, β = {beta}"
        images = {datum.reflect_general(k, r) for r in roots}
        if images != roots:
            return f"s_β 不保持根集, β = {beta}"
    return None


@check("finite_weyl.length_is_inversions")
def _length_is_inversions(ctx: SuiteContext) -> Optional[str]:
    weyl = ctx.manager.weyl
    for w in weyl.elements:
        if w.length != weyl.inversion_count(w):
            return w.label()
    return None


@check("finite_weyl.order_from_regular_orbit")
def _order_from_regular_orbit(ctx: SuiteContext) -> Optional[str]:
    """2ρ 正则，其 W 轨道（只用单反射生成）的大小即 |W|；最长元长度为正根个数"""
    datum, weyl = ctx.manager.datum, ctx.manager.weyl
    start = datum.two_rho()
    orbit, frontier = {start}, [start]
    while frontier:
        nxt = []
        for lam in frontier:
            for i in range(datum.num_simple):
                mu = datum.reflect(i, lam)
                if mu not in orbit:
                    orbit.add(mu)
                    nxt.append(mu)
        frontier = nxt
    if len(orbit) != weyl.order():
        return f"|W·2ρ| = {len(orbit)}, |W| = {weyl.order()}"
    longest = weyl.longest_element(datum.all_simple)
    if longest.length != len(datum.positive_roots):
        return f"ℓ(w_0) = {longest.length}"
    return None


@check("finite_weyl.bruhat_subword")
def _finite_bruhat_subword(ctx: SuiteContext) -> Optional[str]:
    weyl = ctx.manager.weyl
    for w in weyl.elements:
        ideal = weyl.subword_products(w.word)
        for y in weyl.elements:
            if (y in ideal) != weyl.bruhat_leq(y, w):
                return f"y = {y.label()}, w = {w.label()}"
    return None


@check("finite_weyl.double_coset_sizes", per_case=True)
def _double_coset_sizes(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    """Σ_z |W_I z W_J| = |W|，且各双陪集互不相交"""
    weyl = ctx.manager.weyl
    covered = set()
    total = 0
    for z in module.reps:
        coset = weyl.double_coset(z, module.left, module.right)
        total += len(coset)
        covered |= coset
    if total != weyl.order() or len(covered) != weyl.order():
        return f"Σ |W_I z W_J| = {total}, 并集 {len(covered)}, |W| = {weyl.order()}"
    return None


@check("finite_weyl.parabolic_intersection", per_case=True)
def _parabolic_intersection(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    """W_K 与直接求交的 W_I ∩ z W_J z^-1 相同"""
    weyl = ctx.manager.weyl
    left = set(weyl.parabolic(module.left))
    for z in module.reps:
        zinv = weyl.inverse(z)
        conj = {weyl.multiply(weyl.multiply(z, b), zinv) for b in weyl.parabolic(module.right)}
        k = weyl.parabolic_intersection(z, module.left, module.right)
        if set(weyl.parabolic(k)) != left & conj:
            return f"z = {z.label()}, K = {k.label()}"
    return None


@check("finite_weyl.double_coset_decompose", per_case=True)
def _double_coset_decompose(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    weyl = ctx.manager.weyl
    for w in weyl.elements:
        w1, z, w2 = weyl.double_coset_decompose(w, module.left, module.right)
        product = weyl.multiply(weyl.multiply(w1, z), w2)
        if product != w or w1.length + z.length + w2.length != w.length or z not in module.reps:
            return f"w = {w.label()} -> ({w1.label()}, {z.label()}, {w2.label()})"
    return None


# ========== 扩展仿射 Weyl 群 ==========

@check("ext_affine_weyl.length_vs_reduced_word")
def _length_vs_reduced_word(ctx: SuiteContext) -> Optional[str]:
    ext = ctx.manager.ext
    for x in ctx.window:
        word = ext.reduced_word(x)
        if len(word) != ext.length(x) or ext.evaluate(word) != x or ext.length(word.gamma) != 0:
            return x.label()
    return None


@check("ext_affine_weyl.length_step")
def _length_step(ctx: SuiteContext) -> Optional[str]:
    """ℓ(x s) = ℓ(x) ± 1，ℓ(s x) = ℓ(x) ± 1"""
    ext = ctx.manager.ext
    for x in ctx.window:
        lx = ext.length(x)
        for letter in ext.letters:
            g = ext.generator(letter)
            if abs(ext.length(ext.multiply(x, g)) - lx) != 1 or abs(ext.length(ext.multiply(g, x)) - lx) != 1:
                return f"x = {x.label()}, {ext.letter_name(letter)}"
    return None


@check("ext_affine_weyl.bruhat_subword")
def _affine_bruhat_subword(ctx: SuiteContext) -> Optional[str]:
    ext = ctx.manager.ext
    window = ctx.window
    for x in window:
        ideal = ext.subword_ideal(x)
        below = {y for y in window if ext.bruhat_leq(y, x)}
        if ideal != below:
            return x.label()
    return None


@check("ext_affine_weyl.gamma_length_zero")
def _gamma_length_zero(ctx: SuiteContext) -> Optional[str]:
    ext = ctx.manager.ext
    for y in ext.affine_elements(ctx.config.length_window):
        for g in ext.gammas():
            if ext.length(ext.multiply(y, g)) != ext.length(y):
                return f"y = {y.label()}, γ = {g.label()}"
    return None


@check("ext_affine_weyl.canonical_rep_partition", per_case=True)
def _canonical_rep_partition(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    ext, weyl = ctx.manager.ext, ctx.manager.weyl
    window = [ExtAffElt(lam, w) for lam in ctx.weights for w in weyl.elements]
    by_rep: Dict[CosetIndex, frozenset] = {}
    for x in window:
        idx = module.index_of(x)
        coset = frozenset(ext.double_coset_elements(x, module.left, module.right))
        seen = by_rep.setdefault(idx, coset)
        if seen != coset:
            return f"{x.label()} 的双陪集与同一指标 {idx.label()} 的其他元素不同"
        m = module.minimal_element(idx)
        if m not in coset or any(ext.length(y) <= ext.length(m) and y != m for y in coset):
            return f"{idx.label()} 的最短元 {m.label()} 不唯一或不在双陪集中"
    if len(set(by_rep.values())) != len(by_rep):
        return "不同指标给出了同一个双陪集"
    return None


# ========== Hecke 代数 ==========

@check("hecke_algebra.quadratic_relation")
def _quadratic_relation(ctx: SuiteContext) -> Optional[str]:
    hecke = ctx.manager.hecke
    for letter in ctx.manager.ext.letters:
        t = hecke.T_letter(letter)
        if hecke.mul(t, t) != hecke.one().scale(V2) + t.scale(V2 - 1):
            return ctx.manager.ext.letter_name(letter)
    return None


@check("hecke_algebra.braid_relation")
def _braid_relation(ctx: SuiteContext) -> Optional[str]:
    ext, hecke = ctx.manager.ext, ctx.manager.hecke
    for a in ext.letters:
        for b in ext.letters:
            if b <= a:
                continue
            ab = ext.multiply(ext.generator(a), ext.generator(b))
            power, m = ab, 1
            while power != ext.identity and m <= 6:
                power, m = ext.multiply(power, ab), m + 1
            if power != ext.identity:
                continue
            lhs, rhs = hecke.one(), hecke.one()
            for k in range(m):
                lhs = hecke.mul(lhs, hecke.T_letter(a if k % 2 == 0 else b))
                rhs = hecke.mul(rhs, hecke.T_letter(b if k % 2 == 0 else a))
            if lhs != rhs:
                return f"{ext.letter_name(a)}, {ext.letter_name(b)}, m = {m}"
    return None


def _random_element(ctx: SuiteContext) -> HeckeElt:
    window = ctx.window
    terms: Dict[ExtAffElt, LaurentPoly] = {}
    for _ in range(2):
        x = ctx.rng.choice(window)
        terms[x] = LaurentPoly.monomial(ctx.rng.randint(-2, 2), ctx.rng.choice([-2, -1, 1, 2]))
    return ctx.manager.hecke.from_terms(terms)


@check("hecke_algebra.associativity")
def _associativity(ctx: SuiteContext) -> Optional[str]:
    hecke = ctx.manager.hecke
    for _ in range(ctx.config.associativity_samples):
        a, b, c = (_random_element(ctx) for _ in range(3))
        if hecke.mul(hecke.mul(a, b), c) != hecke.mul(a, hecke.mul(b, c)):
            return f"a = {hecke.render(a)}; b = {hecke.render(b)}; c = {hecke.render(c)}"
    return None


@check("hecke_algebra.inverse_and_bar")
def _inverse_and_bar(ctx: SuiteContext) -> Optional[str]:
    hecke = ctx.manager.hecke
    for x in ctx.window:
        tx = hecke.T(x)
        if hecke.mul(tx, hecke.invert_T(x)) != hecke.one():
            return f"T_x T_x^-1 ≠ 1, x = {x.label()}"
        if hecke.bar_involution(hecke.bar_involution(tx)) != tx:
            return f"bar 不是对合, x = {x.label()}"
    for letter in ctx.manager.ext.letters:
        t = hecke.T_letter(letter)
        for x in ctx.window[:20]:
            lhs = hecke.bar_involution(hecke.mul(t, hecke.T(x)))
            rhs = hecke.mul(hecke.bar_involution(t), hecke.bar_involution(hecke.T(x)))
            if lhs != rhs:
                return f"bar 不是乘法的, s = {letter}, x = {x.label()}"
    return None


@check("hecke_algebra.theta_multiplicative")
def _theta_multiplicative(ctx: SuiteContext) -> Optional[str]:
    hecke = ctx.manager.hecke
    weights = ctx.weights
    for _ in range(ctx.config.theta_samples):
        lam, mu = ctx.rng.choice(weights), ctx.rng.choice(weights)
        if hecke.mul(hecke.theta(lam), hecke.theta(mu)) != hecke.theta(add(lam, mu)):
            return f"λ = {lam}, μ = {mu}"
    return None


@check("hecke_algebra.theta_choice_independence")
def _theta_choice_independence(ctx: SuiteContext) -> Optional[str]:
    """θ_λ 不依赖 λ = μ - ν 的支配分解：(μ + δ, ν + δ) 给出同一元素"""
    datum, ext, hecke = ctx.manager.datum, ctx.manager.ext, ctx.manager.hecke
    dominant = [lam for lam in ctx.weights if any(lam) and datum.is_dominant_for(lam, datum.all_simple)]
    shifts = sorted(dominant, key=lambda lam: (ext.length(ext.translation(lam)), lam))[:2]
    for lam in ctx.weights:
        mu, nu = datum.dominant_difference(lam)
        for delta in shifts:
            if hecke.theta_from_pair(add(mu, delta), add(nu, delta)) != hecke.theta(lam):
                return f"λ = {lam}, δ = {delta}"
    return None


@check("hecke_algebra.theta_past_Ts")
def _theta_past_Ts(ctx: SuiteContext) -> Optional[str]:
    hecke = ctx.manager.hecke
    for lam in ctx.weights:
        for i in range(ctx.manager.datum.num_simple):
            direct = hecke.mul(hecke.theta(lam), hecke.T_letter(i))
            if hecke.from_bernstein(hecke.theta_past_Ts(lam, i)) != direct:
                return f"λ = {lam}, s{i + 1}"
    return None


@check("hecke_algebra.orbit_sums_central")
def _orbit_sums_central(ctx: SuiteContext) -> Optional[str]:
    manager = ctx.manager
    datum, hecke = manager.datum, manager.hecke
    for lam in ctx.weights:
        if not datum.is_dominant_for(lam, datum.all_simple):
            continue
        orbit = {w.act(lam) for w in manager.weyl.elements}
        z = hecke.zero()
        for mu in orbit:
            z = z + hecke.theta(mu)
        for letter in manager.ext.letters:
            t = hecke.T_letter(letter)
            if hecke.mul(z, t) != hecke.mul(t, z):
                return f"λ = {lam}, {manager.ext.letter_name(letter)}"
    return None


@check("hecke_algebra.bernstein_roundtrip")
def _bernstein_roundtrip(ctx: SuiteContext) -> Optional[str]:
    hecke = ctx.manager.hecke
    for x in ctx.window:
        tx = hecke.T(x)
        if hecke.from_bernstein(hecke.to_bernstein(tx)) != tx:
            return x.label()
    return None


@check("hecke_algebra.dominant_triangularity")
def _dominant_triangularity(ctx: SuiteContext) -> Optional[str]:
    """λ 支配时 θ_λ = v^{-ℓ(t_λ)} T_{t_λ}，且 T_w θ_λ = v^{-ℓ(t_λ)} T_{w t_λ}"""
    manager = ctx.manager
    ext, hecke, datum = manager.ext, manager.hecke, manager.datum
    for lam in ctx.weights:
        if not datum.is_dominant_for(lam, datum.all_simple):
            continue
        t = ext.translation(lam)
        shift = v_power(-ext.length(t))
        if hecke.theta(lam) != hecke.T(t).scale(shift):
            return f"θ_{lam}"
        for w in manager.weyl.elements:
            fw = ext.finite(w)
            if hecke.mul(hecke.T(fw), hecke.theta(lam)) != hecke.T(ext.multiply(fw, t)).scale(shift):
                return f"T_{w.label()} θ_{lam}"
    return None


# ========== KL 基 ==========

@check("kl_basis.bar_invariance")
def _kl_bar_invariance(ctx: SuiteContext) -> Optional[str]:
    hecke, kl = ctx.manager.hecke, ctx.manager.kl
    for x in ctx.window:
        for name, elt in (("C'", kl.c_prime(x)), ("C", kl.c_element(x))):
            if hecke.bar_involution(elt) != elt:
                return f"{name}_{x.label()}"
    return None


@check("kl_basis.degree_bound")
def _kl_degree_bound(ctx: SuiteContext) -> Optional[str]:
    ext, kl = ctx.manager.ext, ctx.manager.kl
    for x in ctx.window:
        column = kl.column(x)
        if column.get(x) != LaurentPoly.one():
            return f"P_{{x,x}} ≠ 1, x = {x.label()}"
        for y, p in column.items():
            if y == x:
                continue
            if not ext.bruhat_leq(y, x) or p.valuation() < 0 or p.degree() > ext.length(x) - ext.length(y) - 1:
                return f"P_{{{y.label()},{x.label()}}} = {p}"
    return None


@check("kl_basis.descent_eigenvalues")
def _kl_descent(ctx: SuiteContext) -> Optional[str]:
    ext, hecke, kl = ctx.manager.ext, ctx.manager.hecke, ctx.manager.kl
    for x in ctx.window:
        c, cp = kl.c_element(x), kl.c_prime(x)
        for t in ext.left_descents(x):
            if hecke.left_mul_letter(t, c) != -c or hecke.left_mul_letter(t, cp) != cp.scale(V2):
                return f"左下降 {ext.letter_name(t)}, x = {x.label()}"
        for s in ext.right_descents(x):
            if hecke.right_mul_letter(c, s) != -c or hecke.right_mul_letter(cp, s) != cp.scale(V2):
                return f"右下降 {ext.letter_name(s)}, x = {x.label()}"
    return None


@check("kl_basis.bar_fixed_point_oracle")
def _kl_oracle(ctx: SuiteContext) -> Optional[str]:
    hecke, kl = ctx.manager.hecke, ctx.manager.kl
    for x in ctx.window:
        if solve_bar_invariant(hecke, x) != kl.c_prime(x):
            return x.label()
    return None


@check("kl_basis.gamma_compatibility")
def _kl_gamma(ctx: SuiteContext) -> Optional[str]:
    ext, hecke, kl = ctx.manager.ext, ctx.manager.hecke, ctx.manager.kl
    for x in ext.affine_elements(ctx.config.length_window):
        for g in ext.gammas():
            xg = ext.multiply(x, g)
            if kl.c_prime(xg) != hecke.mul(kl.c_prime(x), hecke.T(g)):
                return f"x = {x.label()}, γ = {g.label()}"
            for y in kl.column(x):
                if kl.kl_polynomial(ext.multiply(y, g), xg) != kl.kl_polynomial(y, x):
                    return f"P_{{yγ,xγ}}: y = {y.label()}, x = {x.label()}, γ = {g.label()}"
    return None


@check("kl_basis.dihedral_all_one")
def _kl_dihedral(ctx: SuiteContext) -> Optional[str]:
    """秩 1 时 W_af 是无限二面体群，所有 P_{y,x} = 1"""
    if ctx.manager.datum.num_simple != 1:
        return None
    for x in ctx.window:
        for y, p in ctx.manager.kl.column(x).items():
            if p != LaurentPoly.one():
                return f"P_{{{y.label()},{x.label()}}} = {p}"
    return None


# ========== 双陪集模 ==========

@check("double_coset.c_wI_matches_kl", per_case=True)
def _c_wI(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    manager = ctx.manager
    for subset in (module.left, module.right):
        longest = manager.ext.finite(manager.weyl.longest_element(subset))
        c = c_wI(manager.hecke, subset)
        if c != manager.kl.c_element(longest):
            return f"C_{{w_{subset.label()}}}"
        for i in subset:
            if manager.hecke.left_mul_letter(i, c) != -c:
                return f"T_s{i + 1} C_{{w_{subset.label()}}}"
    return None


@check("double_coset.annihilation", per_case=True)
def _annihilation(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    for x in ctx.window:
        e = module.chi(module.hecke.T(x))
        try:
            module.check_annihilation(e.carrier)
        except HeckeError as err:
            return f"χ(T_{x.label()}): {err}"
    return None


@check("double_coset.bernstein_expansion", per_case=True)
def _bernstein_expansion(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    datum = ctx.manager.datum
    for x in ctx.window:
        e = module.chi(module.hecke.T(x))
        coords = module.to_bernstein_coords(e)
        for idx in coords:
            if not datum.is_dominant_for(idx.weight, module.intersection(idx.z)):
                return f"χ(T_{x.label()}) 的坐标指标 {idx.label()} 不支配"
        if module.expand("bernstein", coords) != e:
            return f"χ(T_{x.label()})"
    return None


@check("double_coset.bernstein_basis_coords", per_case=True)
def _bernstein_basis_coords(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    one = LaurentPoly.one()
    for idx in module.coset_indices(ctx.config.weight_window):
        e = module.bernstein_basis_elt(idx)
        if module.to_bernstein_coords(e) != {idx: one}:
            return idx.label()
        if module.filtration_coords(e) != {idx.z: {idx.weight: one}}:
            return f"{idx.label()} 的滤过分组"
    return None


@check("double_coset.straighten", per_case=True)
def _straighten(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    hecke, datum = module.hecke, ctx.manager.datum
    for z in module.reps:
        tz = hecke.T(module.ext.finite(z))
        for mu in ctx.weights:
            coords = module.straighten(mu, z)
            if not all(datum.is_dominant_for(lam, module.intersection(z)) for lam in coords):
                return f"θ_{mu} T_{z.label()} 的拉直结果不支配"
            rhs = module.zero()
            for lam, c in coords.items():
                rhs = rhs + module.chi(hecke.mul(hecke.theta(lam), tz)).scale(c)
            if module.chi(hecke.mul(hecke.theta(mu), tz)) != rhs:
                return f"θ_{mu} T_{z.label()}"
    return None


@check("double_coset.standard_independence", per_case=True)
def _standard_independence(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    indices = module.coset_indices(ctx.config.weight_window)
    images = [module.specialize_v1(module.standard_basis_elt(idx), normalized=True) for idx in indices]
    columns = sorted({x for img in images for x in img}, key=module.ext.sort_key)
    if not indices:
        return None
    rank = Matrix([[img.get(x, 0) for x in columns] for img in images]).rank()
    if rank != len(indices):
        return f"秩 {rank} < {len(indices)}"
    return None


@check("double_coset.specialization", per_case=True)
def _specialization(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    """v = 1 时 χ(T_x) 规范化后等于 ε_I x ε_J"""
    ext, weyl = module.ext, module.weyl
    for x in ctx.window:
        expected: Dict[ExtAffElt, int] = {}
        for a in weyl.parabolic(module.left):
            for b in weyl.parabolic(module.right):
                y = ext.multiply(ext.multiply(ext.finite(a), x), ext.finite(b))
                expected[y] = expected.get(y, 0) + (-1) ** (a.length + b.length)
        expected = {y: c for y, c in expected.items() if c}
        if module.specialize_v1(module.chi(module.hecke.T(x)), normalized=True) != expected:
            return f"x = {x.label()}"
    return None


@check("double_coset.chi_cprime_vanishing", per_case=True)
def _chi_cprime(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    for x in ctx.window:
        e = module.chi_cprime_vanishing(x)
        idx = module.index_of(x)
        if module.minimal_element(idx) == x:
            if e != module.kl_basis_elt(idx):
                return f"最短元 {x.label()}"
        elif not e.is_zero():
            return f"非最短元 {x.label()}"
    return None


@check("double_coset.kl_bar_invariance", per_case=True)
def _kl_hij_bar(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    for idx in module.coset_indices(ctx.config.weight_window):
        e = module.kl_basis_elt(idx)
        if module.bar_hij(e) != e:
            return idx.label()
    return None


@check("double_coset.kl_unitriangular", per_case=True)
def _kl_unitriangular(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    ext = module.ext
    for idx in module.coset_indices(ctx.config.weight_window):
        m = module.minimal_element(idx)
        lm = ext.length(m)
        coords = module.standard_coords(module.kl_basis_elt(idx))
        if coords.get(idx) != v_power(-lm):
            return f"{idx.label()} 的首项"
        for other, c in coords.items():
            if other == idx:
                continue
            m2 = module.minimal_element(other)
            p = c.shift(lm)
            if not ext.bruhat_leq(m2, m) or p.valuation() < 0 or p.degree() > lm - ext.length(m2) - 1:
                return f"{idx.label()} 在 {other.label()} 上的系数 {c}"
        if module.kl_coords(module.kl_basis_elt(idx)) != {idx: LaurentPoly.one()}:
            return f"{idx.label()} 的 KL 坐标"
    return None


@check("double_coset.basis_count", per_case=True)
def _basis_count(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    bound = ctx.config.weight_window
    outcomes = set()
    for lam in ctx.weights:
        for w in module.weyl.elements:
            idx = module.index_of(ExtAffElt(lam, w))
            if max((abs(t) for t in idx.weight), default=0) <= bound:
                outcomes.add(idx)
    indices = set(module.coset_indices(bound))
    if outcomes != indices:
        return f"canonical_rep 给出 {len(outcomes)} 个指标，窗口内有 {len(indices)} 个"
    return None


@check("double_coset.r_scalar", per_case=True)
def _r_scalar(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    r = module.r_scalar()
    for x in ctx.window[:10]:
        e = module.chi(module.hecke.T(x))
        if module.chi(e.carrier) != e.scale(r):
            return f"χ(χ(T_{x.label()})) ≠ r χ(T_{x.label()})"
    return None


@check("double_coset.filtration", per_case=True)
def _filtration(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    weyl = module.weyl
    for w in weyl.elements:
        _, z, _ = weyl.double_coset_decompose(w, module.left, module.right)
        e = module.chi(module.hecke.T(module.ext.finite(w)))
        if not module.in_filtration(e, z):
            return f"χ(T_{w.label()}) 不在 H^{{IJ}}_{{<={z.label()}}} 中"
    if module.filtration_coords(module.zero()):
        return "零元素的滤过分组非空"
    return None


@check("double_coset.corner_collapse", per_case=True)
def _corner_collapse(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    """I = J = ∅ 时各运算退化为 H 中的运算；I = J = S 时指标只有 z = 1 与支配权"""
    manager = ctx.manager
    hecke, ext, datum = manager.hecke, manager.ext, manager.datum
    indices = module.coset_indices(ctx.config.weight_window)
    if not module.left and not module.right:
        for x in ctx.window:
            if module.chi(hecke.T(x)).carrier != hecke.T(x):
                return f"χ(T_{x.label()}) ≠ T_{x.label()}"
        for idx in indices:
            t = ExtAffElt(idx.weight, idx.z)
            if module.standard_basis_elt(idx).carrier != hecke.T(t):
                return f"T_{idx.label()}"
            if module.kl_basis_elt(idx).carrier != manager.kl.c_prime(t):
                return f"C'_{idx.label()}"
            expected = hecke.mul(hecke.theta(idx.weight), hecke.T(ext.finite(idx.z)))
            if module.bernstein_basis_elt(idx).carrier != expected:
                return f"θ_{idx.label()}"
    if module.left == datum.all_simple and module.right == datum.all_simple:
        expected = sorted(
            lam for lam in ctx.weights if datum.is_dominant_for(lam, datum.all_simple)
        )
        if [idx.z for idx in indices] != [manager.weyl.identity] * len(indices):
            return "I = J = S 时出现 z ≠ 1"
        if sorted(idx.weight for idx in indices) != expected:
            return "I = J = S 时指标集不是支配权"
    return None


@check("double_coset.derived_identities", per_case=True)
def _derived_identities(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    """C_s C_s = -(v + v^-1) C_s；K = S 且秩 1 时 <μ,α̌> = -1 给出 χ(θ_μ) = v^2 χ(θ_{sμ})"""
    manager = ctx.manager
    hecke, datum = manager.hecke, manager.datum
    for i in module.left:
        c = c_wI(hecke, SimpleSubset.of([i]))
        if hecke.mul(c, c) != c.scale(-(v_power(1) + v_power(-1))):
            return f"C_s{i + 1}^2"
    if datum.num_simple == 1 and module.left == datum.all_simple and module.right == datum.all_simple:
        for mu in ctx.weights:
            if datum.pairing(mu, 0) != -1:
                continue
            lhs = module.chi(hecke.theta(mu))
            rhs = module.chi(hecke.theta(datum.reflect(0, mu))).scale(V2)
            if lhs != rhs:
                return f"χ(θ_{mu}) ≠ v^2 χ(θ_{datum.reflect(0, mu)})"
    return None


@check("double_coset.transition_roundtrip", per_case=True)
def _transition_roundtrip(ctx: SuiteContext, module: DoubleCosetModule) -> Optional[str]:
    indices = module.coset_indices(min(ctx.config.weight_window, 1))
    for source in ("standard", "kl"):
        target = "kl" if source == "standard" else "standard"
        table = module.transition_matrix(source, target, indices)
        for idx, coords in table.items():
            if module.expand(target, coords) != module.basis_elt(source, idx):
                return f"{source} -> {target}: {idx.label()}"
    return None


# ========== 运行 ==========

def _case_label(case: Case) -> Dict[str, List[int]]:
    return {"I": case[0].to_list(), "J": case[1].to_list()}


def default_cases(manager: HeckeManager) -> List[Case]:
    """四个角 (∅/S, ∅/S)；秩至少为 2 时再加 ({s1}, {s2}) 与 (S, {s1})"""
    s_all = manager.datum.all_simple
    empty = SimpleSubset.empty()
    cases = [(empty, empty), (empty, s_all), (s_all, empty), (s_all, s_all)]
    if manager.datum.num_simple >= 2:
        first, second = SimpleSubset.of([0]), SimpleSubset.of([1])
        cases += [(first, second), (s_all, first)]
    return cases


def _run_check(reg: RegisteredCheck, ctx: SuiteContext, module: Optional[DoubleCosetModule]) -> CheckRecord:
    manager, config = ctx.manager, ctx.config
    params = {"type": manager.datum.name, "window": config.length_window}
    if module is not None:
        params.update(_case_label((module.left, module.right)))
    t0 = time.perf_counter()
    status, counterexample, detail = "pass", None, None
    try:
        counterexample = reg.fn(ctx, module) if module is not None else reg.fn(ctx)
        if counterexample is not None:
            status = "fail"
    except HeckeError as e:
        status, detail = "fail", f"{type(e).__name__}: {e}"
        counterexample = counterexample or str(params)
    elapsed = time.perf_counter() - t0
    logger.info("%s %s: %s (%.2fs)", reg.name, params, status, elapsed)
    return CheckRecord(
        name=reg.name,
        parameters=params,
        status=status,
        counterexample=counterexample,
        detail=detail,
        seconds=elapsed,
    )


def _run_case_in_worker(config: HeckeConfig, case: Case, names: List[str]) -> Tuple[List[CheckRecord], bool]:
    """子进程：独立构造管理器，跑一个 (I, J) 上的全部 per_case 检查；不读写缓存"""
    manager = HeckeManager(replace(config, enable_cache=False))
    ctx = SuiteContext(manager, config, [case], random.Random(config.random_seed))
    module = manager.module(*case)
    records = [_run_check(_REGISTRY[name], ctx, module) for name in names]
    return records, manager.kl.all_even


def run_suite(
    config: HeckeConfig,
    cases: Optional[Sequence[Case]] = None,
    only: Optional[Sequence[str]] = None,
    manager: Optional[HeckeManager] = None,
) -> SuiteReport:
    """
    跑全部（或 only 指定的）检查；窗口、抽样次数与进程数取自 config。
    config.workers > 1 时各 (I, J) 的 per_case 检查分到进程池，报告仍按注册顺序组装
    """
    started = time.perf_counter()
    manager = manager or HeckeManager(config)
    case_list = list(default_cases(manager))
    for case in cases or ():
        if case not in case_list:
            case_list.append(case)
    if only:
        unknown = [name for name in only if name not in _REGISTRY]
        if unknown:
            raise HeckeInputError(f"未知的检查: {', '.join(unknown)}")
    ctx = SuiteContext(manager, config, case_list, random.Random(config.random_seed))
    report = SuiteReport(
        datum=manager.datum.name,
        length_window=config.length_window,
        weight_window=config.weight_window,
    )

    selected = [reg for reg in _REGISTRY.values() if not only or reg.name in only]
    per_case_names = [reg.name for reg in selected if reg.per_case]
    by_cell: Dict[Tuple[str, int], CheckRecord] = {}
    all_even = True
    if config.workers > 1 and per_case_names:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [
                pool.submit(_run_case_in_worker, config, case, per_case_names)
                for case in case_list
            ]
            for k, future in enumerate(futures):
                records, even = future.result()
                all_even = all_even and even
                for record in records:
                    by_cell[(record.name, k)] = record

    for reg in selected:
        if not reg.per_case:
            report.checks.append(_run_check(reg, ctx, None))
            continue
        for k, case in enumerate(case_list):
            record = by_cell.get((reg.name, k))
            if record is None:
                record = _run_check(reg, ctx, manager.module(*case))
            report.checks.append(record)

    report.notes["all_even"] = all_even and manager.kl.all_even
    report.notes["r_IJ"] = {
        f"{module.left.label()}|{module.right.label()}": str(module.r_scalar())
        for module in (manager.module(*case) for case in case_list)
    }
    report.notes["pieces"] = {
        f"{module.left.label()}|{module.right.label()}": [z.label() for z in module.reps]
        for module in (manager.module(*case) for case in case_list)
    }
    report.total_seconds = time.perf_counter() - started
    manager.persist_kl_table()
    return report
