"""
扩展仿射 Hecke 代数测试
"""
import itertools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hecke_core.errors import HeckeInputError
from hecke_core.ext_affine_weyl import ExtendedAffineWeylGroup
from hecke_core.finite_weyl import WeylGroup
from hecke_core.hecke_algebra import HeckeAlgebra
from hecke_core.laurent import V, V_INV, LaurentPoly, v_power
from hecke_core.root_datum import add, preset


V2 = v_power(2)


def _algebra(name):
    return HeckeAlgebra(ExtendedAffineWeylGroup(WeylGroup(preset(name))))


@pytest.fixture(scope="module")
def a1():
    return _algebra("A1")


@pytest.fixture(scope="module")
def a2():
    return _algebra("A2")


class TestRelations:
    """生成关系"""

    @pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
    def test_quadratic_relation(self, name):
        """T_s^2 = v^2 + (v^2 - 1) T_s"""
        hecke = _algebra(name)
        for s in hecke.ext.letters:
            ts = hecke.T_letter(s)
            assert ts * ts == hecke.one().scale(V2) + ts.scale(V2 - 1)

    def test_braid_relations_a2(self, a2):
        """A2 中任意两个仿射生成元满足长度 3 的辫关系"""
        for s, t in itertools.combinations(a2.ext.letters, 2):
            ts, tt = a2.T_letter(s), a2.T_letter(t)
            assert ts * tt * ts == tt * ts * tt

    def test_braid_relation_b2(self):
        """B2 有限部分的辫关系长度为 4"""
        hecke = _algebra("B2")
        t1, t2 = hecke.T_letter(0), hecke.T_letter(1)
        assert t1 * t2 * t1 * t2 == t2 * t1 * t2 * t1

    def test_gamma_conjugation_a1(self, a1):
        """A1：T_γ T_{s1} T_γ^-1 = T_{s0}"""
        gamma = a1.ext.element((1,), [0])
        tg = a1.T(gamma)
        assert tg * a1.T_letter(0) * a1.invert_T(gamma) == a1.T_letter(1)

    def test_length_additivity(self, a2):
        """ℓ(xy) = ℓ(x) + ℓ(y) 时 T_x T_y = T_{xy}"""
        ext = a2.ext
        window = ext.enumerate_window(2)
        for x in window:
            for y in window:
                xy = ext.multiply(x, y)
                if ext.length(xy) == ext.length(x) + ext.length(y):
                    assert a2.T(x) * a2.T(y) == a2.T(xy)

    def test_scalar_multiplication(self, a1):
        """标量两侧相乘"""
        ts = a1.T_letter(0)
        assert V * ts == ts * V == ts.scale(V)
        assert 2 * ts == ts + ts

    def test_parent_mismatch(self, a1, a2):
        """不同代数的元素不能相加"""
        with pytest.raises(HeckeInputError):
            a1.one() + a2.one()


class TestInverseAndBar:
    """逆与 bar 对合"""

    @pytest.mark.parametrize("name", ["A1", "A2"])
    def test_inverse(self, name):
        """T_x T_x^-1 = 1"""
        hecke = _algebra(name)
        for x in hecke.ext.enumerate_window(2):
            assert hecke.T(x) * hecke.invert_T(x) == hecke.one()

    def test_bar_of_generator(self, a1):
        """bar(T_s) = T_s^-1 = v^-2 T_s + (v^-2 - 1)"""
        s = a1.ext.generator(0)
        expected = a1.T(s).scale(v_power(-2)) + a1.one().scale(v_power(-2) - 1)
        assert a1.bar_involution(a1.T(s)) == expected

    def test_bar_is_involution(self, a2):
        """bar 的平方为恒等且 bar 是乘法同态"""
        window = a2.ext.enumerate_window(2)
        for x in window:
            h = a2.T(x).scale(V + 2)
            assert a2.bar_involution(a2.bar_involution(h)) == h
        x, y = window[3], window[-1]
        lhs = a2.bar_involution(a2.T(x) * a2.T(y))
        assert lhs == a2.bar_involution(a2.T(x)) * a2.bar_involution(a2.T(y))


class TestTheta:
    """θ_λ 与 Bernstein 形式"""

    def test_theta_a1(self, a1):
        """θ_ω = v^-1 T_{t_ω}，θ_{-ω} = v^-1 T_{t_{-ω}} + (v^-1 - v) T_γ"""
        ext = a1.ext
        assert a1.theta((1,)) == a1.T(ext.translation((1,))).scale(V_INV)
        gamma = ext.element((1,), [0])
        expected = a1.T(ext.translation((-1,))).scale(V_INV) + a1.T(gamma).scale(V_INV - V)
        assert a1.theta((-1,)) == expected

    @pytest.mark.parametrize("name", ["A1", "A2", "GL2"])
    def test_theta_multiplicative(self, name):
        """θ_λ θ_μ = θ_{λ+μ}"""
        hecke = _algebra(name)
        weights = list(hecke.datum.weights_in_box(1))
        for lam in weights:
            for mu in weights:
                total = tuple(a + b for a, b in zip(lam, mu))
                assert hecke.theta(lam) * hecke.theta(mu) == hecke.theta(total)

    def test_theta_zero_is_one(self, a2):
        """θ_0 = 1"""
        assert a2.theta((0, 0)) == a2.one()

    @pytest.mark.parametrize("name", ["A1", "A2"])
    def test_theta_independent_of_split(self, name):
        """λ = (μ + δ) - (ν + δ) 给出同一个 θ_λ"""
        hecke = _algebra(name)
        datum = hecke.datum
        shifts = [
            delta for delta in datum.weights_in_box(1)
            if any(delta) and datum.is_dominant_for(delta, datum.all_simple)
        ]
        assert shifts
        for lam in datum.weights_in_box(1):
            mu, nu = datum.dominant_difference(lam)
            for delta in shifts:
                pair = (add(mu, delta), add(nu, delta))
                assert hecke.theta_from_pair(*pair) == hecke.theta(lam)

    def test_theta_from_pair_rejects_non_dominant(self, a2):
        """非支配的分解被拒绝"""
        with pytest.raises(HeckeInputError):
            a2.theta_from_pair((-1, 0), (0, 0))

    def test_theta_past_ts(self, a2):
        """θ_λ T_s = T_s θ_{s(λ)} + (v^2 - 1) G"""
        for lam in a2.datum.weights_in_box(2):
            for i in range(2):
                form = a2.theta_past_Ts(lam, i)
                assert a2.from_bernstein(form) == a2.theta(lam) * a2.T_letter(i)

    def test_geometric_sum(self, a1):
        """A1：d = 2 与 d = -2"""
        assert a1.geometric_sum((2,), 0) == [((2,), 1), ((0,), 1)]
        assert a1.geometric_sum((-2,), 0) == [((2,), -1), ((0,), -1)]
        assert a1.geometric_sum((0,), 0) == []

    def test_bernstein_of_generators_a1(self, a1):
        """T_{s0} = θ_α T_s + (1 - v^2) θ_α，T_γ = v^-1 θ_ω T_s + (v^-1 - v) θ_ω"""
        ext, weyl = a1.ext, a1.weyl
        s, e = weyl.simple(0), weyl.identity
        form = a1.to_bernstein(a1.T_letter(1))
        assert form.terms == {((2,), s): LaurentPoly.one(), ((2,), e): 1 - V2}
        gamma = ext.element((1,), [0])
        form = a1.to_bernstein(a1.T(gamma))
        assert form.terms == {((1,), s): V_INV, ((1,), e): V_INV - V}

    @pytest.mark.parametrize("name", ["A1", "A2", "B2"])
    def test_bernstein_roundtrip(self, name):
        """from_bernstein ∘ to_bernstein = id"""
        hecke = _algebra(name)
        for x in hecke.ext.enumerate_window(2):
            h = hecke.T(x)
            assert hecke.from_bernstein(hecke.to_bernstein(h)) == h

    def test_json_roundtrip(self, a2):
        """to_json / from_json"""
        h = a2.theta((-1, 1)) + a2.T_letter(2).scale(V2 - 1)
        assert a2.from_json(a2.to_json(h)) == h
        with pytest.raises(HeckeInputError):
            a2.from_json([{"coeff": "1"}])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
