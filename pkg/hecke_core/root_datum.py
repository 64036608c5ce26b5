"""
根数据与权格组合
X(T) 的坐标、Cartan 配对、单反射、支配锥 X(T)_I^+ 与支配分解
"""
import hashlib
import itertools
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import sympy
from sympy.liealgebras.cartan_matrix import CartanMatrix

from hecke_core.errors import HeckeInputError, HeckeInternalError, RootDatumError
from hecke_core.models import RootDatumSpec, SimpleSubset, Weight


logger = logging.getLogger(__name__)

# 正根闭包的规模上限，超过即认为不是有限型
MAX_POSITIVE_ROOTS = 500


# ========== 权的算术 ==========

def add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def scale(k: int, a: Weight) -> Weight:
    return tuple(k * x for x in a)


def neg(a: Weight) -> Weight:
    return tuple(-x for x in a)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class RootDatum:
    """根数据：格 X(T)、单根、单余根及导出的正根系"""
    name: str
    simple_roots: Tuple[Weight, ...]
    simple_coroots: Tuple[Weight, ...]

    rank: int = field(init=False)
    cartan: Tuple[Tuple[int, ...], ...] = field(init=False)
    positive_roots: Tuple[Weight, ...] = field(init=False, repr=False)
    positive_coroots: Tuple[Weight, ...] = field(init=False, repr=False)
    # 正根在单根基下的系数
    root_coords: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False)
    simple_index_names: Tuple[str, ...] = field(init=False, repr=False)
    # Dynkin 图的连通分支
    components: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False)
    # 每个分支中余根最高的那个正根（在 positive_roots 中的下标）
    highest_roots: Tuple[int, ...] = field(init=False, repr=False)
    # 支配分解用的修正权，对第 i 个余根配对 >= 1，对其余余根配对 >= 0
    corrections: Tuple[Weight, ...] = field(init=False, repr=False)

    def __post_init__(self):
        roots = tuple(tuple(int(x) for x in r) for r in self.simple_roots)
        coroots = tuple(tuple(int(x) for x in c) for c in self.simple_coroots)
        if len(roots) != len(coroots):
            raise RootDatumError(f"{self.name}: 单根 {len(roots)} 个，单余根 {len(coroots)} 个")
        widths = {len(v) for v in roots + coroots}
        if len(widths) != 1:
            raise RootDatumError(f"{self.name}: 坐标长度不一致 {sorted(widths)}")
        object.__setattr__(self, "simple_roots", roots)
        object.__setattr__(self, "simple_coroots", coroots)
        object.__setattr__(self, "rank", widths.pop())

        product = sympy.Matrix([list(r) for r in roots]) * sympy.Matrix([list(c) for c in coroots]).T
        cartan = tuple(tuple(int(product[i, j]) for j in range(len(roots))) for i in range(len(roots)))
        object.__setattr__(self, "cartan", cartan)
        self._validate_cartan()

        object.__setattr__(self, "simple_index_names", tuple(f"s{i + 1}" for i in range(len(roots))))
        self._close_positive_roots()
        self._find_components()
        self._choose_corrections()
        logger.info(
            "根数据 %s: X(T) 秩 %d，单根 %d 个，正根 %d 个",
            self.name, self.rank, self.num_simple, len(self.positive_roots),
        )

    # ========== 构造 ==========

    @classmethod
    def from_cartan(cls, name: str, cartan: Sequence[Sequence[int]]) -> "RootDatum":
        """单连通情形：X(T) 取基本权基，α_i 的坐标为 Cartan 矩阵第 i 行"""
        n = len(cartan)
        roots = [list(row) for row in cartan]
        coroots = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(name, tuple(map(tuple, roots)), tuple(map(tuple, coroots)))

    @classmethod
    def from_spec(cls, spec: RootDatumSpec) -> "RootDatum":
        if spec.lattice == "weight":
            return cls.from_cartan(spec.name, spec.cartan)
        datum = cls(
            spec.name,
            tuple(map(tuple, spec.lattice.simple_roots)),
            tuple(map(tuple, spec.lattice.simple_coroots)),
        )
        expected = tuple(tuple(row) for row in spec.cartan)
        if datum.cartan != expected:
            raise RootDatumError(
                f"{spec.name}: 输入的 Cartan 矩阵 {expected} 与单根/单余根的配对 {datum.cartan} 不一致"
            )
        return datum

    @classmethod
    def load(cls, path: str) -> "RootDatum":
        """读取根数据 JSON 文件"""
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        try:
            spec = RootDatumSpec.model_validate(data)
        except ValueError as e:
            raise RootDatumError(f"根数据文件格式错误 {path}: {e}") from e
        return cls.from_spec(spec)

    # ========== 校验与导出数据 ==========

    def _validate_cartan(self):
        c = self.cartan
        n = len(c)
        for i in range(n):
            if c[i][i] != 2:
                raise RootDatumError(f"{self.name}: Cartan 对角元 cartan[{i}][{i}] = {c[i][i]} != 2")
            for j in range(n):
                if i == j:
                    continue
                if c[i][j] > 0:
                    raise RootDatumError(f"{self.name}: Cartan 非对角元 cartan[{i}][{j}] = {c[i][j]} > 0")
                if (c[i][j] == 0) != (c[j][i] == 0):
                    raise RootDatumError(f"{self.name}: cartan[{i}][{j}] 与 cartan[{j}][{i}] 零模式不对称")
                if c[i][j] * c[j][i] > 3:
                    raise RootDatumError(f"{self.name}: 第 {i},{j} 对单根不是有限型")

    def _close_positive_roots(self):
        """从单根出发在单反射下闭包，只保留非负组合"""
        n = self.num_simple
        c = self.cartan
        unit = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        coroot_of: Dict[Tuple[int, ...], Tuple[int, ...]] = {u: u for u in unit}
        queue = list(unit)
        while queue:
            beta = queue.pop()
            b = coroot_of[beta]
            for i in range(n):
                p = sum(beta[k] * c[k][i] for k in range(n))
                image = tuple(beta[k] - (p if k == i else 0) for k in range(n))
                if any(x < 0 for x in image) or image in coroot_of:
                    continue
                q = sum(c[i][k] * b[k] for k in range(n))
                coroot_of[image] = tuple(b[k] - (q if k == i else 0) for k in range(n))
                queue.append(image)
                if len(coroot_of) > MAX_POSITIVE_ROOTS:
                    raise RootDatumError(f"{self.name}: 正根闭包超过 {MAX_POSITIVE_ROOTS} 个，根系不是有限型")
        ordered = sorted(coroot_of, key=lambda r: (sum(r), r))
        roots = tuple(self._combine(self.simple_roots, r) for r in ordered)
        coroots = tuple(self._combine(self.simple_coroots, coroot_of[r]) for r in ordered)
        object.__setattr__(self, "root_coords", tuple(ordered))
        object.__setattr__(self, "positive_roots", roots)
        object.__setattr__(self, "positive_coroots", coroots)
        object.__setattr__(self, "_coroot_heights", tuple(sum(coroot_of[r]) for r in ordered))

    def _combine(self, basis: Tuple[Weight, ...], coeffs: Tuple[int, ...]) -> Weight:
        out = [0] * self.rank
        for k, a in enumerate(coeffs):
            if a:
                for t in range(self.rank):
                    out[t] += a * basis[k][t]
        return tuple(out)

    def _find_components(self):
        n = self.num_simple
        seen = set()
        comps: List[Tuple[int, ...]] = []
        for start in range(n):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(n):
                    if j not in seen and self.cartan[i][j] != 0:
                        seen.add(j)
                        stack.append(j)
            comps.append(tuple(sorted(comp)))
        highest = []
        for comp in comps:
            candidates = [
                k for k, coords in enumerate(self.root_coords)
                if all(coords[i] == 0 for i in range(n) if i not in comp)
            ]
            highest.append(max(candidates, key=lambda k: (self._coroot_heights[k], k)))
        object.__setattr__(self, "components", tuple(comps))
        object.__setattr__(self, "highest_roots", tuple(highest))

    def _choose_corrections(self):
        """优先取基本权；找不到时退回正根之和 2ρ"""
        two_rho = tuple(sum(r[t] for r in self.positive_roots) for t in range(self.rank))
        found: List[Weight] = []
        candidates: List[Weight] = []
        if self.rank <= 4:
            candidates = sorted(
                itertools.product(range(-2, 3), repeat=self.rank),
                key=lambda x: (sum(abs(t) for t in x), tuple(-t for t in x)),
            )
        for i in range(self.num_simple):
            target = [1 if j == i else 0 for j in range(self.num_simple)]
            for x in candidates:
                if [dot(x, c) for c in self.simple_coroots] == target:
                    found.append(tuple(x))
                    break
            else:
                found.append(two_rho)
        object.__setattr__(self, "corrections", tuple(found))

    # ========== 基本量 ==========

    @property
    def num_simple(self) -> int:
        return len(self.simple_roots)

    @property
    def all_simple(self) -> SimpleSubset:
        return SimpleSubset.of(range(self.num_simple))

    def zero(self) -> Weight:
        return (0,) * self.rank

    def check_weight(self, lam: Sequence[int]) -> Weight:
        if len(lam) != self.rank:
            raise HeckeInputError(f"{self.name}: 权 {tuple(lam)} 的坐标长度应为 {self.rank}")
        return tuple(int(x) for x in lam)

    def check_index(self, i: int) -> int:
        if not 0 <= i < self.num_simple:
            raise HeckeInputError(f"{self.name}: 单根下标 {i} 越界 (共 {self.num_simple} 个)")
        return i

    def check_subset(self, subset: SimpleSubset) -> SimpleSubset:
        for i in subset:
            self.check_index(i)
        return subset

    @property
    def fingerprint(self) -> str:
        """Cartan 矩阵与单根、单余根坐标的摘要，用作 KL 缓存键"""
        payload = json.dumps(
            {"cartan": self.cartan, "roots": self.simple_roots, "coroots": self.simple_coroots},
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def two_rho(self) -> Weight:
        return tuple(sum(r[t] for r in self.positive_roots) for t in range(self.rank))

    def highest_root(self, component: int) -> Tuple[Weight, Weight]:
        """第 component 个分支的 (θ, θ 的余根)"""
        k = self.highest_roots[component]
        return self.positive_roots[k], self.positive_coroots[k]

    def weights_in_box(self, bound: int) -> Iterator[Weight]:
        """坐标绝对值不超过 bound 的所有权"""
        yield from itertools.product(range(-bound, bound + 1), repeat=self.rank)

    # ========== 配对与反射 ==========

    def pairing(self, lam: Sequence[int], j: int) -> int:
        """<λ, α̌_j>"""
        self.check_index(j)
        return dot(lam, self.simple_coroots[j])

    def pairing_covector(self, lam: Sequence[int], covector: Sequence[int]) -> int:
        return dot(lam, covector)

    def reflect(self, i: int, lam: Weight) -> Weight:
        """s_i(λ) = λ - <λ, α̌_i> α_i"""
        p = self.pairing(lam, i)
        if not p:
            return tuple(lam)
        return tuple(x - p * a for x, a in zip(lam, self.simple_roots[i]))

    def reflect_general(self, k: int, lam: Weight) -> Weight:
        """第 k 个正根 β 的反射 s_β(λ) = λ - <λ, β̌> β"""
        beta, cobeta = self.positive_roots[k], self.positive_coroots[k]
        p = dot(lam, cobeta)
        return tuple(x - p * a for x, a in zip(lam, beta))

    # ========== 支配性 ==========

    def is_dominant_for(self, lam: Weight, subset: SimpleSubset) -> bool:
        return all(self.pairing(lam, i) >= 0 for i in subset)

    def dominant_representative(
        self, lam: Weight, subset: SimpleSubset, max_iterations: int = 10_000
    ) -> Tuple[Weight, Tuple[int, ...]]:
        """
        返回 (μ, w)，w ∈ W_I 以单反射下标的字给出（从左到右相乘），μ = w(λ) ∈ X(T)_I^+
        """
        mu = tuple(lam)
        applied: List[int] = []
        for _ in range(max_iterations):
            bad = next((i for i in subset if self.pairing(mu, i) < 0), None)
            if bad is None:
                return mu, tuple(reversed(applied))
            mu = self.reflect(bad, mu)
            applied.append(bad)
        raise HeckeInternalError(f"{self.name}: 求 {lam} 的 {subset.label()}-支配代表超过 {max_iterations} 步")

    def dominant_difference(self, lam: Weight) -> Tuple[Weight, Weight]:
        """λ = μ - ν，μ, ν 均对 S 支配"""
        nu = self.zero()
        for i in range(self.num_simple):
            deficit = -self.pairing(lam, i)
            if deficit > 0:
                nu = add(nu, scale(deficit, self.corrections[i]))
        return add(lam, nu), nu


# ========== 预设 ==========

def _adjoint(name: str, cartan: Sequence[Sequence[int]]) -> RootDatum:
    """伴随型：X(T) 为根格，α_i 为单位向量，α̌_j 取 Cartan 矩阵第 j 列"""
    n = len(cartan)
    roots = tuple(tuple(1 if k == i else 0 for k in range(n)) for i in range(n))
    coroots = tuple(tuple(cartan[k][j] for k in range(n)) for j in range(n))
    return RootDatum(name, roots, coroots)


def _cartan_of(type_name: str) -> List[List[int]]:
    if type_name == "A1":
        return [[2]]
    m = CartanMatrix(type_name)
    return [[int(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


PRESET_NAMES = ("A1", "A2", "B2", "G2", "GL2", "A1ad", "A2ad")

_ALIASES = {"A1affine": "A1"}


def preset(name: str) -> RootDatum:
    """内置根数据；其余形如 'B3' 的单连通型由 sympy 的 Cartan 矩阵给出"""
    key = _ALIASES.get(name, name)
    if key == "GL2":
        return RootDatum("GL2", ((1, -1),), ((1, -1),))
    if key.endswith("ad"):
        base = key[:-2]
        return _adjoint(key, _cartan_of(base))
    try:
        cartan = _cartan_of(key)
    except (ValueError, TypeError, IndexError, AttributeError) as e:
        raise RootDatumError(f"未知的根数据预设: {name}") from e
    return RootDatum.from_cartan(key, cartan)
