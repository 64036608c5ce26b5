"""
有限 Weyl 群 W
元素以其在全体根上的置换为规范形式，附带广度优先得到的约化字与在 X(T) 上的矩阵
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from hecke_core.errors import HeckeInputError
from hecke_core.models import SimpleSubset, Weight
from hecke_core.root_datum import RootDatum


logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class WeylElt:
    """W 中的元素；相等当且仅当在根上的作用相同"""
    perm: Tuple[int, ...]
    word: Tuple[int, ...] = field(compare=False)
    matrix: Matrix = field(compare=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, lam: Weight) -> Weight:
        """w(λ)"""
        return tuple(sum(a * x for a, x in zip(row, lam)) for row in self.matrix)

    def label(self) -> str:
        return "".join(f"s{i + 1}" for i in self.word) or "1"

    def __repr__(self) -> str:
        return f"WeylElt({self.label()})"


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(b[0]) if b else 0
    return tuple(
        tuple(sum(row[k] * b[k][j] for k in range(len(b))) for j in range(n))
        for row in a
    )


class WeylGroup:
    """有限 Weyl 群及其抛物子群、双陪集组合"""

    def __init__(self, datum: RootDatum, max_order: int = 100_000):
        self.datum = datum
        n_pos = len(datum.root_coords)
        self.num_positive = n_pos
        # 根的编号：0..N-1 为正根，N..2N-1 为对应的负根
        self._roots: List[Tuple[int, ...]] = list(datum.root_coords) + [
            tuple(-x for x in r) for r in datum.root_coords
        ]
        self._root_index: Dict[Tuple[int, ...], int] = {r: k for k, r in enumerate(self._roots)}
        m = datum.num_simple
        self.simple_root_index: Tuple[int, ...] = tuple(
            self._root_index[tuple(1 if k == i else 0 for k in range(m))] for i in range(m)
        )

        self._simple_perms = [self._reflection_perm(i) for i in range(m)]
        self._simple_mats = [self._reflection_matrix(i) for i in range(m)]

        identity_mat = tuple(
            tuple(1 if r == c else 0 for c in range(datum.rank)) for r in range(datum.rank)
        )
        self.identity = WeylElt(tuple(range(2 * n_pos)), (), identity_mat)
        self.elements: List[WeylElt] = [self.identity]
        self._by_perm: Dict[Tuple[int, ...], WeylElt] = {self.identity.perm: self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(m):
                    perm = tuple(w.perm[k] for k in self._simple_perms[i])
                    if perm in self._by_perm:
                        continue
                    elt = WeylElt(perm, w.word + (i,), _mat_mul(w.matrix, self._simple_mats[i]))
                    self._by_perm[perm] = elt
                    self.elements.append(elt)
                    nxt.append(elt)
                    if len(self.elements) > max_order:
                        raise HeckeInputError(f"{datum.name}: Weyl 群阶数超过 {max_order}")
            frontier = nxt

        self._inverse: Dict[WeylElt, WeylElt] = {}
        self._bruhat_memo: Dict[Tuple[WeylElt, WeylElt], bool] = {}
        self._parabolic_cache: Dict[SimpleSubset, List[WeylElt]] = {}
        logger.info("Weyl 群 %s: |W| = %d", datum.name, len(self.elements))

    # ========== 生成元 ==========

    def _reflection_perm(self, i: int) -> Tuple[int, ...]:
        c = self.datum.cartan
        m = self.datum.num_simple
        out = []
        for beta in self._roots:
            p = sum(beta[k] * c[k][i] for k in range(m))
            image = tuple(beta[k] - (p if k == i else 0) for k in range(m))
            out.append(self._root_index[image])
        return tuple(out)

    def _reflection_matrix(self, i: int) -> Matrix:
        alpha = self.datum.simple_roots[i]
        coalpha = self.datum.simple_coroots[i]
        r = self.datum.rank
        return tuple(
            tuple((1 if t == u else 0) - alpha[t] * coalpha[u] for u in range(r))
            for t in range(r)
        )

    def simple(self, i: int) -> WeylElt:
        self.datum.check_index(i)
        return self._by_perm[self._simple_perms[i]]

    def from_word(self, word: Iterable[int]) -> WeylElt:
        w = self.identity
        for i in word:
            w = self.multiply(w, self.simple(i))
        return w

    # ========== 元素运算 ==========

    def _own(self, w: WeylElt) -> WeylElt:
        elt = self._by_perm.get(w.perm)
        if elt is None:
            raise HeckeInputError(f"元素 {w!r} 不属于 {self.datum.name} 的 Weyl 群")
        return elt

    def multiply(self, a: WeylElt, b: WeylElt) -> WeylElt:
        self._own(a)
        self._own(b)
        return self._by_perm[tuple(a.perm[k] for k in b.perm)]

    def inverse(self, w: WeylElt) -> WeylElt:
        cached = self._inverse.get(w)
        if cached is None:
            inv = [0] * len(w.perm)
            for k, image in enumerate(w.perm):
                inv[image] = k
            cached = self._by_perm[tuple(inv)]
            self._inverse[w] = cached
        return cached

    def is_positive_root(self, k: int) -> bool:
        return k < self.num_positive

    def act_on_root(self, w: WeylElt, k: int) -> int:
        """w 作用在第 k 个根上，返回像的编号"""
        return w.perm[k]

    def inversion_count(self, w: WeylElt) -> int:
        """被 w 变为负根的正根个数"""
        return sum(1 for k in range(self.num_positive) if w.perm[k] >= self.num_positive)

    def sends_positive_to_negative(self, w: WeylElt, k: int) -> bool:
        return w.perm[k] >= self.num_positive

    def left_descents(self, w: WeylElt) -> Set[int]:
        """{i : ℓ(s_i w) < ℓ(w)}，即 w^-1(α_i) < 0"""
        inv = self.inverse(w)
        return {i for i, k in enumerate(self.simple_root_index) if inv.perm[k] >= self.num_positive}

    def right_descents(self, w: WeylElt) -> Set[int]:
        """{i : ℓ(w s_i) < ℓ(w)}，即 w(α_i) < 0"""
        return {i for i, k in enumerate(self.simple_root_index) if w.perm[k] >= self.num_positive}

    def order(self) -> int:
        return len(self.elements)

    # ========== Bruhat 序 ==========

    def bruhat_leq(self, y: WeylElt, w: WeylElt) -> bool:
        """下降提升递推：若 ws < w，则 y <= w 当且仅当 min(y, ys) <= ws"""
        if y.length > w.length:
            return False
        if y == w:
            return True
        if w.length == y.length:
            return False
        key = (y, w)
        cached = self._bruhat_memo.get(key)
        if cached is not None:
            return cached
        i = min(self.right_descents(w))
        s = self.simple(i)
        ws = self.multiply(w, s)
        ys = self.multiply(y, s)
        result = self.bruhat_leq(ys if ys.length < y.length else y, ws)
        self._bruhat_memo[key] = result
        return result

    def subword_products(self, word: Iterable[int]) -> Set[WeylElt]:
        """字的全部子字之积；word 约化时即 Bruhat 区间 [1, w]"""
        found = {self.identity}
        for i in word:
            s = self.simple(i)
            found |= {self.multiply(x, s) for x in found}
        return found

    # ========== 抛物子群与双陪集 ==========

    def parabolic(self, subset: SimpleSubset) -> List[WeylElt]:
        """W_I 的全部元素，按长度排列"""
        cached = self._parabolic_cache.get(subset)
        if cached is not None:
            return cached
        self.datum.check_subset(subset)
        found = {self.identity: None}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for i in subset:
                    x = self.multiply(w, self.simple(i))
                    if x not in found:
                        found[x] = None
                        nxt.append(x)
            frontier = nxt
        out = sorted(found, key=lambda x: (x.length, x.word))
        self._parabolic_cache[subset] = out
        return out

    def longest_element(self, subset: SimpleSubset) -> WeylElt:
        """W_I 的最长元 w_I"""
        return max(self.parabolic(subset), key=lambda x: x.length)

    def is_minimal_double_coset_rep(self, w: WeylElt, left: SimpleSubset, right: SimpleSubset) -> bool:
        return not (self.left_descents(w) & set(left)) and not (self.right_descents(w) & set(right))

    def min_double_coset_reps(self, left: SimpleSubset, right: SimpleSubset) -> List[WeylElt]:
        """W^{IJ}，按 (长度, 字) 排序，这是 Bruhat 序的一个线性扩张"""
        self.datum.check_subset(left)
        self.datum.check_subset(right)
        reps = [w for w in self.elements if self.is_minimal_double_coset_rep(w, left, right)]
        return sorted(reps, key=lambda x: (x.length, x.word))

    def double_coset(self, w: WeylElt, left: SimpleSubset, right: SimpleSubset) -> Set[WeylElt]:
        """W_I w W_J 的全部元素"""
        return {
            self.multiply(self.multiply(a, w), b)
            for a in self.parabolic(left)
            for b in self.parabolic(right)
        }

    def double_coset_decompose(
        self, w: WeylElt, left: SimpleSubset, right: SimpleSubset
    ) -> Tuple[WeylElt, WeylElt, WeylElt]:
        """w = w1 z w2，w1 ∈ W_I，z ∈ W^{IJ}，w2 ∈ W_J，长度相加"""
        w1, z, w2 = self.identity, w, self.identity
        while True:
            i = next((i for i in left if i in self.left_descents(z)), None)
            if i is not None:
                s = self.simple(i)
                z = self.multiply(s, z)
                w1 = self.multiply(w1, s)
                continue
            j = next((j for j in right if j in self.right_descents(z)), None)
            if j is not None:
                s = self.simple(j)
                z = self.multiply(z, s)
                w2 = self.multiply(s, w2)
                continue
            return w1, z, w2

    def parabolic_intersection(self, z: WeylElt, left: SimpleSubset, right: SimpleSubset) -> SimpleSubset:
        """
        K ⊆ I，Π_K = Π_I ∩ z(Π_J)，于是 W_K = W_I ∩ z W_J z^-1
        """
        if not self.is_minimal_double_coset_rep(z, left, right):
            raise HeckeInputError(f"{z!r} 不是 ({left.label()}, {right.label()}) 双陪集的最短代表")
        zinv = self.inverse(z)
        targets = {self.simple_root_index[j] for j in right}
        return SimpleSubset.of(i for i in left if zinv.perm[self.simple_root_index[i]] in targets)

    def conjugate_simple(self, z: WeylElt, i: int) -> Optional[int]:
        """若 z^-1 s_i z 是单反射 s_j，返回 j"""
        k = self.inverse(z).perm[self.simple_root_index[i]]
        try:
            return self.simple_root_index.index(k)
        except ValueError:
            return None
