"""
元素表达式解析测试
"""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hecke_core.double_coset_module import DoubleCosetModule
from hecke_core.errors import HeckeInputError
from hecke_core.expr import parse_expression, tokenize
from hecke_core.ext_affine_weyl import ExtendedAffineWeylGroup
from hecke_core.finite_weyl import WeylGroup
from hecke_core.hecke_algebra import HeckeAlgebra
from hecke_core.kl_basis import KazhdanLusztigBasis
from hecke_core.laurent import v_power
from hecke_core.root_datum import preset


V2 = v_power(2)


def _kl(name):
    return KazhdanLusztigBasis(HeckeAlgebra(ExtendedAffineWeylGroup(WeylGroup(preset(name)))))


@pytest.fixture(scope="module")
def kl_a1():
    return _kl("A1")


@pytest.fixture(scope="module")
def kl_a2():
    return _kl("A2")


@pytest.fixture(scope="module")
def module_a1(kl_a1):
    full = kl_a1.ext.datum.all_simple
    return DoubleCosetModule(kl_a1, full, full)


class TestTokenize:
    """词法"""

    def test_kinds(self):
        """各类记号"""
        kinds = [t.kind for t in tokenize("[v^2-1] * T s1 + theta -2omega1 + T g:1,0")]
        assert kinds == [
            "laurent", "punct", "name", "name", "punct", "name", "punct", "omega",
            "punct", "name", "gamma",
        ]

    def test_bad_character(self):
        """无法识别的字符"""
        with pytest.raises(HeckeInputError):
            tokenize("T s1 @ T s0")


class TestHeckeExpressions:
    """H 中的表达式"""

    def test_generators(self, kl_a1):
        """T 字与二次关系"""
        hecke = kl_a1.hecke
        lhs = parse_expression("T s1 * T s1", kl_a1)
        rhs = parse_expression("[v^2] + [v^2-1] * T s1", kl_a1)
        assert lhs == rhs
        assert parse_expression("T s1 s0", kl_a1) == hecke.T_letter(0) * hecke.T_letter(1)
        assert parse_expression("T 1", kl_a1) == hecke.one()

    def test_scalars(self, kl_a1):
        """纯标量表达式落到 T_1 的倍数"""
        hecke = kl_a1.hecke
        assert parse_expression("3", kl_a1) == hecke.one().scale(3)
        assert parse_expression("2 * T s0 - T s0", kl_a1) == hecke.T_letter(1)
        assert parse_expression("-(T s1)", kl_a1) == -hecke.T_letter(0)

    def test_theta_weights(self, kl_a1, kl_a2):
        """权的整数坐标与 omega 写法"""
        assert parse_expression("theta omega", kl_a1) == kl_a1.hecke.theta((1,))
        assert parse_expression("theta -omega", kl_a1) == kl_a1.hecke.theta((-1,))
        assert parse_expression("theta 2omega1", kl_a1) == kl_a1.hecke.theta((2,))
        assert parse_expression("theta 1,-1", kl_a2) == kl_a2.hecke.theta((1, -1))
        assert parse_expression("theta omega2", kl_a2) == kl_a2.hecke.theta((0, 1))

    def test_gamma_word(self, kl_a1):
        """g:λ 表示 t_λ 的 Γ 分量"""
        gamma = kl_a1.ext.element((1,), [0])
        assert parse_expression("T g:1", kl_a1) == kl_a1.hecke.T(gamma)

    def test_cprime(self, kl_a1):
        """Cprime 字"""
        assert parse_expression("Cprime s1", kl_a1) == kl_a1.c_prime(kl_a1.ext.generator(0))

    @pytest.mark.parametrize("text", [
        "", "T", "T s9", "theta 1,2", "theta", "(T s1", "chi(T 1)", "T s1 +", "Cprime m(0,1)",
    ])
    def test_errors(self, kl_a1, text):
        """非法表达式都报输入错误"""
        with pytest.raises(HeckeInputError):
            parse_expression(text, kl_a1)

    def test_omega_not_in_lattice(self):
        """伴随型 A1 中 ω 不在 X(T) 里"""
        with pytest.raises(HeckeInputError):
            parse_expression("theta omega", _kl("A1ad"))


class TestModuleExpressions:
    """H^{IJ} 中的表达式"""

    def test_chi(self, kl_a1, module_a1):
        """chi 把 H 中的元素送入 H^{IJ}"""
        value = parse_expression("chi(T 1)", kl_a1, module_a1)
        assert value == module_a1.chi(kl_a1.hecke.one())
        scaled = parse_expression("[v] * chi(T s0) + chi(theta 0)", kl_a1, module_a1)
        expected = module_a1.chi(kl_a1.hecke.T_letter(1)).scale(v_power(1)) + module_a1.chi(kl_a1.hecke.one())
        assert scaled == expected

    def test_minimal_element(self, kl_a1, module_a1):
        """m(λ, z) 是双陪集中的最短元"""
        gamma = kl_a1.ext.element((1,), [0])
        assert parse_expression("Cprime m(omega, 1)", kl_a1, module_a1) == kl_a1.hecke.T(gamma)
        value = parse_expression("chi(Cprime m(2, 1))", kl_a1, module_a1)
        assert value == module_a1.kl_basis_elt(module_a1.index((2,), module_a1.weyl.identity))

    @pytest.mark.parametrize("text", [
        "T s1 + chi(T 1)",
        "chi(T 1) * chi(T 1)",
        "Cprime m(-omega, 1)",
        "Cprime m(omega, s1)",
        "chi(chi(T 1))",
    ])
    def test_errors(self, kl_a1, module_a1, text):
        """混用 H 与 H^{IJ}、非法指标"""
        with pytest.raises(HeckeInputError):
            parse_expression(text, kl_a1, module_a1)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
