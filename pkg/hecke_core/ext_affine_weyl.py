"""
扩展仿射 Weyl 群 W_ex = X(T) ⋊ W
Iwahori-Matsumoto 长度、W_af·Γ 分解、约化字、Bruhat 序，以及双陪集代表 t_λ z 与 m_{λ,z}
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

from hecke_core.errors import HeckeInputError, HeckeInternalError
from hecke_core.finite_weyl import WeylElt, WeylGroup
from hecke_core.models import SimpleSubset, Weight
from hecke_core.root_datum import add, dot, neg


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtAffElt:
    """t_λ · w"""
    translation: Weight
    finite: WeylElt

    def label(self) -> str:
        lam = ",".join(map(str, self.translation))
        return f"t({lam}){self.finite.label()}"

    def __repr__(self) -> str:
        return f"ExtAffElt({self.label()})"


@dataclass(frozen=True)
class AffineWord:
    """x = s_{a1} ... s_{ak} γ，字母取自 S_af，γ 长度为 0"""
    letters: Tuple[int, ...]
    gamma: ExtAffElt

    def __len__(self) -> int:
        return len(self.letters)


class ExtendedAffineWeylGroup:
    """W_ex 及其上的组合运算"""

    def __init__(self, weyl: WeylGroup, gamma_window: int = 2, max_iterations: int = 10_000):
        self.weyl = weyl
        self.datum = weyl.datum
        self.gamma_window = gamma_window
        self.max_iterations = max_iterations
        self.identity = ExtAffElt(self.datum.zero(), weyl.identity)

        m = self.datum.num_simple
        self.num_finite_letters = m
        gens: List[ExtAffElt] = [ExtAffElt(self.datum.zero(), weyl.simple(i)) for i in range(m)]
        # 每个不可约分支一个仿射生成元 s0 = t_θ s_θ
        self.affine_reflections: List[WeylElt] = []
        for c in range(len(self.datum.components)):
            theta, _ = self.datum.highest_root(c)
            s_theta = self._reflection_element(self.datum.highest_roots[c])
            self.affine_reflections.append(s_theta)
            gens.append(ExtAffElt(theta, s_theta))
        self.generators: Tuple[ExtAffElt, ...] = tuple(gens)

        self._length: Dict[ExtAffElt, int] = {}
        self._words: Dict[ExtAffElt, AffineWord] = {}
        self._bruhat_memo: Dict[Tuple[ExtAffElt, ExtAffElt], bool] = {}
        self._gammas: Optional[List[ExtAffElt]] = None
        for g in self.generators:
            if self.length(g) != 1:
                raise HeckeInternalError(f"生成元 {g!r} 的长度为 {self.length(g)}，应为 1")
        logger.info("W_ex %s: S_af 共 %d 个生成元", self.datum.name, len(self.generators))

    def _reflection_element(self, k: int) -> WeylElt:
        """第 k 个正根的反射在 W 中对应的元素"""
        r = self.datum.rank
        basis = [tuple(1 if t == u else 0 for t in range(r)) for u in range(r)]
        target = tuple(zip(*[self.datum.reflect_general(k, e) for e in basis]))
        for w in self.weyl.elements:
            if w.matrix == target:
                return w
        raise HeckeInternalError(f"找不到第 {k} 个正根的反射")

    # ========== 字母 ==========

    @property
    def letters(self) -> range:
        return range(len(self.generators))

    def is_affine_letter(self, letter: int) -> bool:
        return letter >= self.num_finite_letters

    def letter_name(self, letter: int) -> str:
        if letter < self.num_finite_letters:
            return f"s{letter + 1}"
        c = letter - self.num_finite_letters
        return "s0" if len(self.affine_reflections) == 1 else f"s0_{c + 1}"

    def letter_from_name(self, name: str) -> int:
        for letter in self.letters:
            if self.letter_name(letter) == name:
                return letter
        raise HeckeInputError(f"未知的生成元名 {name!r}")

    # ========== 群运算 ==========

    def element(self, translation: Iterable[int], word: Iterable[int] = ()) -> ExtAffElt:
        lam = self.datum.check_weight(tuple(translation))
        return ExtAffElt(lam, self.weyl.from_word(word))

    def translation(self, lam: Weight) -> ExtAffElt:
        return ExtAffElt(self.datum.check_weight(lam), self.weyl.identity)

    def finite(self, w: WeylElt) -> ExtAffElt:
        return ExtAffElt(self.datum.zero(), w)

    def multiply(self, x: ExtAffElt, y: ExtAffElt) -> ExtAffElt:
        """(t_λ w)(t_μ u) = t_{λ + w(μ)} wu"""
        return ExtAffElt(
            add(x.translation, x.finite.act(y.translation)),
            self.weyl.multiply(x.finite, y.finite),
        )

    def inverse(self, x: ExtAffElt) -> ExtAffElt:
        """(t_λ w)^-1 = t_{-w^-1(λ)} w^-1"""
        winv = self.weyl.inverse(x.finite)
        return ExtAffElt(neg(winv.act(x.translation)), winv)

    def generator(self, letter: int) -> ExtAffElt:
        return self.generators[letter]

    def evaluate(self, word: AffineWord) -> ExtAffElt:
        x = self.identity
        for letter in word.letters:
            x = self.multiply(x, self.generators[letter])
        return self.multiply(x, word.gamma)

    # ========== 长度 ==========

    def length(self, x: ExtAffElt) -> int:
        """
        Iwahori-Matsumoto 公式：
        ℓ(t_λ w) = Σ_{α>0, w^-1 α>0} |<λ,α̌>| + Σ_{α>0, w^-1 α<0} |<λ,α̌> - 1|
        """
        cached = self._length.get(x)
        if cached is not None:
            return cached
        winv = self.weyl.inverse(x.finite)
        n_pos = self.weyl.num_positive
        total = 0
        for k, coroot in enumerate(self.datum.positive_coroots):
            p = dot(x.translation, coroot)
            total += abs(p) if winv.perm[k] < n_pos else abs(p - 1)
        self._length[x] = total
        return total

    def is_gamma(self, x: ExtAffElt) -> bool:
        return self.length(x) == 0

    def left_descent(self, x: ExtAffElt) -> Optional[int]:
        lx = self.length(x)
        for letter in self.letters:
            if self.length(self.multiply(self.generators[letter], x)) < lx:
                return letter
        return None

    def left_descents(self, x: ExtAffElt) -> Set[int]:
        lx = self.length(x)
        return {s for s in self.letters if self.length(self.multiply(self.generators[s], x)) < lx}

    def right_descents(self, x: ExtAffElt) -> Set[int]:
        lx = self.length(x)
        return {s for s in self.letters if self.length(self.multiply(x, self.generators[s])) < lx}

    # ========== 约化字与 Γ ==========

    def reduced_word(self, x: ExtAffElt) -> AffineWord:
        """逐个剥离左下降，剩下长度为 0 的部分即 Γ 分量"""
        cached = self._words.get(x)
        if cached is not None:
            return cached
        if self.length(x) == 0:
            word = AffineWord((), x)
        else:
            s = self.left_descent(x)
            if s is None:
                raise HeckeInternalError(f"{x!r} 长度为 {self.length(x)} 却没有左下降")
            rest = self.reduced_word(self.multiply(self.generators[s], x))
            word = AffineWord((s,) + rest.letters, rest.gamma)
        logger.debug("约化字 %s -> %s", x.label(), word.letters)
        self._words[x] = word
        return word

    def gamma_of(self, x: ExtAffElt) -> ExtAffElt:
        return self.reduced_word(x).gamma

    def waf_gamma_decompose(self, x: ExtAffElt) -> Tuple[ExtAffElt, ExtAffElt]:
        """x = y γ，y ∈ W_af，γ ∈ Γ"""
        gamma = self.gamma_of(x)
        return self.multiply(x, self.inverse(gamma)), gamma

    def gammas(self) -> List[ExtAffElt]:
        """
        Γ 的元素：由各基向量平移的 Γ 分量生成；
        Γ 无限时只保留平移坐标绝对值不超过 gamma_window 的元素
        """
        if self._gammas is not None:
            return self._gammas
        r = self.datum.rank
        gens: Set[ExtAffElt] = set()
        for u in range(r):
            e = tuple(1 if t == u else 0 for t in range(r))
            g = self.gamma_of(self.translation(e))
            gens.add(g)
            gens.add(self.inverse(g))
        found = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.multiply(x, g)
                    if y in found or max((abs(t) for t in y.translation), default=0) > self.gamma_window:
                        continue
                    found.add(y)
                    nxt.append(y)
            frontier = nxt
        self._gammas = sorted(found, key=self.sort_key)
        return self._gammas

    # ========== Bruhat 序 ==========

    def bruhat_leq(self, x: ExtAffElt, y: ExtAffElt) -> bool:
        """
        Γ 分量不同则不可比；否则在 W_af 中用左下降递推：
        若 s y < y，则 x <= y 当且仅当 min(x, s x) <= s y
        """
        lx, ly = self.length(x), self.length(y)
        if lx > ly:
            return False
        if lx == ly:
            return x == y
        key = (x, y)
        cached = self._bruhat_memo.get(key)
        if cached is not None:
            return cached
        if self.gamma_of(x) != self.gamma_of(y):
            result = False
        else:
            s = self.left_descent(y)
            g = self.generators[s]
            sy = self.multiply(g, y)
            sx = self.multiply(g, x)
            result = self.bruhat_leq(sx if self.length(sx) < lx else x, sy)
        self._bruhat_memo[key] = result
        return result

    def bruhat_ideal(self, x: ExtAffElt) -> Set[ExtAffElt]:
        """{y : y <= x}；若 s x < x，则 [1, x] = [1, sx] ∪ s[1, sx]"""
        if self.length(x) == 0:
            return {x}
        s = self.left_descent(x)
        g = self.generators[s]
        lower = self.bruhat_ideal(self.multiply(g, x))
        return lower | {self.multiply(g, y) for y in lower}

    def subword_ideal(self, x: ExtAffElt) -> Set[ExtAffElt]:
        """约化字 s_{a1}...s_{ak} γ 的全部子字之积再乘 γ，与 bruhat_ideal 应当相同"""
        word = self.reduced_word(x)
        found = {self.identity}
        for letter in word.letters:
            g = self.generators[letter]
            found |= {self.multiply(y, g) for y in found}
        return {self.multiply(y, word.gamma) for y in found}

    # ========== 枚举 ==========

    def sort_key(self, x: ExtAffElt):
        return (self.length(x), x.translation, x.finite.length, x.finite.word)

    def affine_elements(self, max_len: int) -> List[ExtAffElt]:
        """W_af 中长度不超过 max_len 的元素"""
        seen = {self.identity}
        layer = [self.identity]
        for current in range(max_len):
            nxt = []
            for x in layer:
                for g in self.generators:
                    y = self.multiply(x, g)
                    if y not in seen and self.length(y) == current + 1:
                        seen.add(y)
                        nxt.append(y)
            layer = nxt
        return sorted(seen, key=self.sort_key)

    def enumerate_window(self, max_len: int) -> List[ExtAffElt]:
        """长度不超过 max_len 的全部 y γ，γ 取遍 Γ（Γ 无限时按坐标窗口截断）"""
        if max_len < 0:
            raise HeckeInputError(f"窗口长度必须非负: {max_len}")
        out = {self.multiply(y, g) for y in self.affine_elements(max_len) for g in self.gammas()}
        return sorted(out, key=self.sort_key)

    # ========== 双陪集 ==========

    def double_coset_elements(self, x: ExtAffElt, left: SimpleSubset, right: SimpleSubset) -> Set[ExtAffElt]:
        """W_I x W_J 的全部元素"""
        return {
            self.multiply(self.multiply(self.finite(a), x), self.finite(b))
            for a in self.weyl.parabolic(left)
            for b in self.weyl.parabolic(right)
        }

    def canonical_rep(self, x: ExtAffElt, left: SimpleSubset, right: SimpleSubset) -> Tuple[Weight, WeylElt]:
        """W_I x W_J 中唯一形如 t_λ z 的代表，z ∈ W^{IJ}，λ ∈ X(T)_{I∩zJ}^+"""
        w1, z, _ = self.weyl.double_coset_decompose(x.finite, left, right)
        lam = self.weyl.inverse(w1).act(x.translation)
        k = self.weyl.parabolic_intersection(z, left, right)
        mu, _ = self.datum.dominant_representative(lam, k, self.max_iterations)
        return mu, z

    def check_coset_index(self, lam: Weight, z: WeylElt, left: SimpleSubset, right: SimpleSubset) -> SimpleSubset:
        """校验 (λ, z) 是合法指标，返回 K = I ∩ zJ"""
        lam = self.datum.check_weight(lam)
        if not self.weyl.is_minimal_double_coset_rep(z, left, right):
            raise HeckeInputError(f"{z!r} 不在 W^{{IJ}} 中 (I={left.label()}, J={right.label()})")
        k = self.weyl.parabolic_intersection(z, left, right)
        if not self.datum.is_dominant_for(lam, k):
            raise HeckeInputError(f"权 {lam} 对 {k.label()} 不支配，不是合法的指标")
        return k

    def factor_through_minimal(
        self, x: ExtAffElt, left: SimpleSubset, right: SimpleSubset
    ) -> Tuple[WeylElt, ExtAffElt, WeylElt]:
        """x = w1 m w2，w1 ∈ W_I，w2 ∈ W_J，m 为双陪集中最短元，长度相加"""
        w1, m, w2 = self.weyl.identity, x, self.weyl.identity
        for _ in range(self.max_iterations):
            lm = self.length(m)
            step = None
            for i in left:
                s = self.finite(self.weyl.simple(i))
                cand = self.multiply(s, m)
                if self.length(cand) < lm:
                    m, w1 = cand, self.weyl.multiply(w1, s.finite)
                    step = i
                    break
            if step is not None:
                continue
            for j in right:
                s = self.finite(self.weyl.simple(j))
                cand = self.multiply(m, s)
                if self.length(cand) < lm:
                    m, w2 = cand, self.weyl.multiply(s.finite, w2)
                    step = j
                    break
            if step is None:
                return w1, m, w2
        raise HeckeInternalError(f"{x!r} 的双陪集下降超过 {self.max_iterations} 步")

    def minimal_length_rep(self, lam: Weight, z: WeylElt, left: SimpleSubset, right: SimpleSubset) -> ExtAffElt:
        """m_{λ,z}：W_I t_λ z W_J 中唯一的最短元"""
        self.check_coset_index(lam, z, left, right)
        _, m, _ = self.factor_through_minimal(ExtAffElt(tuple(lam), z), left, right)
        return m

    # ========== 序列化 ==========

    def to_dict(self, x: ExtAffElt) -> Dict[str, list]:
        return {"lambda": list(x.translation), "w": [i + 1 for i in x.finite.word]}

    def from_dict(self, data: Dict[str, list]) -> ExtAffElt:
        try:
            return self.element(data["lambda"], [int(i) - 1 for i in data["w"]])
        except (KeyError, TypeError) as e:
            raise HeckeInputError(f"元素格式错误: {data!r}") from e
