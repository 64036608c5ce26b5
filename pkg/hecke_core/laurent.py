"""
Laurent 多项式环 A = Z[v, v^-1]
稀疏存储：指数 -> 整数系数，不保存零系数
"""
import re
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

from hecke_core.errors import HeckeInputError


Scalar = Union["LaurentPoly", int]


class LaurentPoly:
    """A 中的元素，不可变"""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, int]] = None):
        self._terms: Dict[int, int] = {
            int(k): int(c) for k, c in (terms or {}).items() if c
        }
        self._hash: Optional[int] = None

    # ========== 构造 ==========

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentPoly":
        """coefficient * v^exponent"""
        return cls({exponent: coefficient})

    @classmethod
    def coerce(cls, value: Scalar) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return cls({0: value})
        raise TypeError(f"无法转换为 Laurent 多项式: {value!r}")

    # ========== 基本访问 ==========

    def terms(self) -> Iterator[Tuple[int, int]]:
        """按指数降序返回 (指数, 系数)"""
        for k in sorted(self._terms, reverse=True):
            yield k, self._terms[k]

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """最高次数；零多项式抛出 ValueError"""
        if not self._terms:
            raise ValueError("零多项式没有次数")
        return max(self._terms)

    def valuation(self) -> int:
        """最低次数"""
        if not self._terms:
            raise ValueError("零多项式没有最低次数")
        return min(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """A 中的可逆元恰为 ±v^k"""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def is_even(self) -> bool:
        """是否落在 Z[v^2, v^-2] 中"""
        return all(k % 2 == 0 for k in self._terms)

    # ========== 环运算 ==========

    def __add__(self, other: Scalar) -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Scalar) -> "LaurentPoly":
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: Scalar) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: Dict[int, int] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentPoly(out)

    def __rmul__(self, other: Scalar) -> "LaurentPoly":
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit():
                raise ValueError(f"非单位元不能取负幂: {self}")
            (k, c), = self._terms.items()
            return LaurentPoly({k * n: c ** (-n)})
        result = LaurentPoly.one()
        for _ in range(n):
            result = result * self
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """乘以 v^k"""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def divide_by_unit(self, unit: "LaurentPoly") -> "LaurentPoly":
        """精确除以 ±v^k"""
        if not unit.is_unit():
            raise ValueError(f"除数不是单位元: {unit}")
        (k, c), = unit._terms.items()
        return LaurentPoly({e - k: a * c for e, a in self._terms.items()})

    # ========== 对合与特殊化 ==========

    def bar(self) -> "LaurentPoly":
        """v -> v^-1"""
        return LaurentPoly({-k: c for k, c in self._terms.items()})

    def eval_at_one(self) -> int:
        """v -> 1"""
        return sum(self._terms.values())

    def negative_part(self) -> "LaurentPoly":
        """只保留负指数项"""
        return LaurentPoly({k: c for k, c in self._terms.items() if k < 0})

    # ========== 比较与显示 ==========

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({render(self)!r})"

    def __str__(self) -> str:
        return render(self)


V = LaurentPoly.monomial(1)
V_INV = LaurentPoly.monomial(-1)


def v_power(k: int) -> LaurentPoly:
    return LaurentPoly.monomial(k)


# ========== 文本格式 ==========

def render(p: LaurentPoly) -> str:
    """渲染为 'a_k*v^k + ...'，指数降序"""
    if p.is_zero():
        return "0"
    pieces = []
    for k, c in p.terms():
        if k == 0:
            body = str(abs(c))
        else:
            base = "v" if k == 1 else f"v^{k}"
            body = base if abs(c) == 1 else f"{abs(c)}*{base}"
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append(("- " if c < 0 else "+ ") + body)
    return " ".join(pieces)


_TERM = re.compile(r"(\d+)?(?:\*?(v)(?:\^(-?\d+))?)?")


def parse_laurent(text: str) -> LaurentPoly:
    """render 的逆；同时接受 '2v^-1'、'v^2-1' 这类紧凑写法"""
    s = text.replace(" ", "")
    if not s:
        raise HeckeInputError("空的 Laurent 多项式")
    out: Dict[int, int] = {}
    for chunk in re.split(r"(?<!\^)(?=[+-])", s):
        if not chunk:
            continue
        sign = -1 if chunk[0] == "-" else 1
        body = chunk[1:] if chunk[0] in "+-" else chunk
        m = _TERM.fullmatch(body)
        if not body or m is None or (m.group(1) is None and m.group(2) is None):
            raise HeckeInputError(f"无法解析 Laurent 项: {chunk!r} (在 {text!r} 中)")
        coeff = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            exponent = 0
        else:
            exponent = int(m.group(3)) if m.group(3) is not None else 1
        out[exponent] = out.get(exponent, 0) + sign * coeff
    return LaurentPoly(out)
