"""
元素表达式解析

  EXPR   := TERM (("+" | "-") TERM)*
  TERM   := FACTOR ("*" FACTOR)*
  FACTOR := "[" LAURENT "]" | INT | "T" WORD | "theta" WEIGHT | "Cprime" ELT
          | "chi" FACTOR | "(" EXPR ")"
  ELT    := WORD | "m(" WEIGHT "," WORD ")"
  WEIGHT := 以逗号分隔的 rank 个整数坐标，或 [-][k]omega[i]
  WORD   := 生成元名（s1 s2 ... s0 s0_2）、"1"、或 "g:" 加权坐标表示 t_λ 的 Γ 分量
"""
import re
from dataclasses import dataclass
from typing import List, Optional, Union

from hecke_core.double_coset_module import DoubleCosetModule, HIJElt
from hecke_core.errors import HeckeInputError
from hecke_core.ext_affine_weyl import ExtAffElt
from hecke_core.hecke_algebra import HeckeElt
from hecke_core.kl_basis import KazhdanLusztigBasis
from hecke_core.laurent import LaurentPoly, parse_laurent
from hecke_core.models import Weight
from hecke_core.root_datum import scale


Value = Union[LaurentPoly, HeckeElt, HIJElt]

_TOKEN = re.compile(
    r"\s*(?:(?P<laurent>\[[^\]]*\])|(?P<gamma>g:-?\d+(?:,-?\d+)*)|(?P<omega>\d*omega\d*)"
    r"|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[()*+,\-]))"
)
_LETTER = re.compile(r"s\d+(?:_\d+)?$")


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            raise HeckeInputError(f"表达式第 {pos} 个字符无法识别: {text[pos:pos + 10]!r}")
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    return tokens


class ExpressionParser:
    """在给定的 H 与 H^{IJ} 中解析表达式"""

    def __init__(self, kl: KazhdanLusztigBasis, module: Optional[DoubleCosetModule] = None):
        self.kl = kl
        self.hecke = kl.hecke
        self.ext = kl.ext
        self.datum = self.ext.datum
        self.module = module
        self._tokens: List[Token] = []
        self._pos = 0
        self._text = ""

    # ========== 入口 ==========

    def parse(self, text: str) -> Value:
        self._text = text
        self._tokens = tokenize(text)
        self._pos = 0
        if not self._tokens:
            raise HeckeInputError("表达式为空")
        value = self._expr()
        if self._peek() is not None:
            self._fail("多余的输入")
        if isinstance(value, LaurentPoly):
            value = self.hecke.one().scale(value)
        return value

    # ========== 词法辅助 ==========

    def _peek(self) -> Optional[Token]:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def _next(self) -> Token:
        tok = self._peek()
        if tok is None:
            raise HeckeInputError(f"表达式 {self._text!r} 意外结束")
        self._pos += 1
        return tok

    def _accept(self, text: str) -> bool:
        tok = self._peek()
        if tok is not None and tok.text == text:
            self._pos += 1
            return True
        return False

    def _expect(self, text: str):
        if not self._accept(text):
            self._fail(f"此处应为 {text!r}")

    def _fail(self, message: str):
        tok = self._peek()
        where = f"第 {tok.pos} 个字符 {tok.text!r}" if tok else "末尾"
        raise HeckeInputError(f"解析 {self._text!r} 失败，{where}: {message}")

    # ========== 语法 ==========

    def _expr(self) -> Value:
        value = self._term()
        while True:
            if self._accept("+"):
                value = self._add(value, self._term())
            elif self._accept("-"):
                value = self._add(value, self._neg(self._term()))
            else:
                return value

    def _term(self) -> Value:
        value = self._factor()
        while self._accept("*"):
            value = self._mul(value, self._factor())
        return value

    def _factor(self) -> Value:
        tok = self._next()
        if tok.kind == "laurent":
            return parse_laurent(tok.text[1:-1])
        if tok.kind == "int":
            return LaurentPoly.coerce(int(tok.text))
        if tok.text == "-":
            return self._neg(self._factor())
        if tok.text == "(":
            value = self._expr()
            self._expect(")")
            return value
        if tok.text == "T":
            return self.hecke.T(self._word())
        if tok.text == "theta":
            return self.hecke.theta(self._weight())
        if tok.text == "Cprime":
            return self.kl.c_prime(self._element())
        if tok.text == "chi":
            if self.module is None:
                self._fail("没有指定 (I, J)，不能使用 chi")
            inner = self._factor()
            if isinstance(inner, LaurentPoly):
                inner = self.hecke.one().scale(inner)
            if not isinstance(inner, HeckeElt):
                self._fail("chi 的参数必须是 H 中的元素")
            return self.module.chi(inner)
        self._pos -= 1
        self._fail("此处应为一个因子")

    def _word(self) -> ExtAffElt:
        x = self.ext.identity
        consumed = False
        while True:
            tok = self._peek()
            if tok is None:
                break
            if tok.text == "1" and not consumed:
                self._pos += 1
                consumed = True
            elif tok.kind == "name" and _LETTER.match(tok.text):
                self._pos += 1
                x = self.ext.multiply(x, self.ext.generator(self.ext.letter_from_name(tok.text)))
                consumed = True
            elif tok.kind == "gamma":
                self._pos += 1
                lam = tuple(int(t) for t in tok.text[2:].split(","))
                x = self.ext.multiply(x, self.ext.gamma_of(self.ext.translation(lam)))
                consumed = True
            else:
                break
        if not consumed:
            self._fail("此处应为一个字（生成元名、1 或 g:λ）")
        return x

    def _element(self) -> ExtAffElt:
        tok = self._peek()
        if tok is not None and tok.text == "m":
            if self.module is None:
                self._fail("没有指定 (I, J)，不能使用 m(λ, z)")
            self._pos += 1
            self._expect("(")
            lam = self._weight()
            self._expect(",")
            z = self._word()
            self._expect(")")
            if z.translation != self.datum.zero():
                self._fail("m(λ, z) 中的 z 必须在有限 Weyl 群中")
            return self.module.minimal_element(self.module.index(lam, z.finite))
        return self._word()

    def _weight(self) -> Weight:
        first = self._weight_item()
        if isinstance(first, tuple):
            return first
        # 整数坐标恰好 rank 个，其后的逗号留给 m(λ, z)
        items = [first]
        while len(items) < self.datum.rank:
            self._expect(",")
            item = self._weight_item()
            if isinstance(item, tuple):
                self._fail("omega 不能与整数坐标混用")
            items.append(item)
        return self.datum.check_weight(tuple(items))

    def _weight_item(self) -> Union[int, Weight]:
        sign = -1 if self._accept("-") else 1
        tok = self._next()
        if tok.kind == "int":
            return sign * int(tok.text)
        if tok.kind == "omega":
            coeff_text, _, index_text = tok.text.partition("omega")
            coeff = int(coeff_text) if coeff_text else 1
            return scale(sign * coeff, self.fundamental_weight(int(index_text) - 1 if index_text else 0))
        self._pos -= 1
        self._fail("此处应为整数或 omega")

    def fundamental_weight(self, i: int) -> Weight:
        """<ω_i, α̌_j> = δ_ij 的权；不在 X(T) 中时报错"""
        self.datum.check_index(i)
        target = tuple(1 if j == i else 0 for j in range(self.datum.num_simple))
        for cand in (self.datum.corrections[i], tuple(1 if t == i else 0 for t in range(self.datum.rank))):
            if tuple(self.datum.pairing(cand, j) for j in range(self.datum.num_simple)) == target:
                return cand
        raise HeckeInputError(f"{self.datum.name}: 基本权 ω_{i + 1} 不在 X(T) 中")

    # ========== 运算 ==========

    def _neg(self, a: Value) -> Value:
        return -a

    def _add(self, a: Value, b: Value) -> Value:
        if isinstance(a, LaurentPoly):
            a = self.hecke.one().scale(a)
        if isinstance(b, LaurentPoly):
            b = self.hecke.one().scale(b)
        if type(a) is not type(b):
            self._fail("不能把 H 中的元素与 H^{IJ} 中的元素相加")
        return a + b

    def _mul(self, a: Value, b: Value) -> Value:
        if isinstance(a, LaurentPoly):
            return a * b if isinstance(b, LaurentPoly) else b.scale(a)
        if isinstance(b, LaurentPoly):
            return a.scale(b)
        if isinstance(a, HeckeElt) and isinstance(b, HeckeElt):
            return self.hecke.mul(a, b)
        self._fail("H^{IJ} 中的元素只能乘以标量")


def parse_expression(text: str, kl: KazhdanLusztigBasis, module: Optional[DoubleCosetModule] = None) -> Value:
    return ExpressionParser(kl, module).parse(text)
