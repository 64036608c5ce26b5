"""
双陪集模 H^{IJ} 测试
"""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hecke_core.double_coset_module import DoubleCosetModule, c_wI
from hecke_core.errors import HeckeInputError, HeckeInternalError, StraighteningError
from hecke_core.ext_affine_weyl import ExtendedAffineWeylGroup
from hecke_core.finite_weyl import WeylGroup
from hecke_core.hecke_algebra import HeckeAlgebra
from hecke_core.kl_basis import KazhdanLusztigBasis
from hecke_core.laurent import V, V_INV, LaurentPoly, v_power
from hecke_core.models import CosetIndex, SimpleSubset
from hecke_core.root_datum import preset


V2 = v_power(2)
EMPTY = SimpleSubset.empty()


def _kl(name):
    return KazhdanLusztigBasis(HeckeAlgebra(ExtendedAffineWeylGroup(WeylGroup(preset(name)))))


@pytest.fixture(scope="module")
def kl_a1():
    return _kl("A1")


@pytest.fixture(scope="module")
def kl_a2():
    return _kl("A2")


@pytest.fixture(scope="module")
def a1_full(kl_a1):
    """A1，I = J = S"""
    full = kl_a1.ext.datum.all_simple
    return DoubleCosetModule(kl_a1, full, full)


@pytest.fixture(scope="module")
def a2_mixed(kl_a2):
    """A2，I = {1}，J = {2}"""
    return DoubleCosetModule(kl_a2, SimpleSubset.of([0]), SimpleSubset.of([1]))


def _cases(kl_a1, kl_a2):
    full1 = kl_a1.ext.datum.all_simple
    return [
        DoubleCosetModule(kl_a1, EMPTY, EMPTY),
        DoubleCosetModule(kl_a1, full1, full1),
        DoubleCosetModule(kl_a2, SimpleSubset.of([0]), SimpleSubset.of([1])),
        DoubleCosetModule(kl_a2, SimpleSubset.of([0, 1]), SimpleSubset.of([0])),
    ]


class TestCwI:
    """C_{w_I}"""

    def test_single_reflection(self, kl_a1):
        """C_{w_{s}} = -v T_1 + v^-1 T_s"""
        hecke = kl_a1.hecke
        c = c_wI(hecke, SimpleSubset.of([0]))
        assert c == hecke.T_letter(0).scale(V_INV) - hecke.one().scale(V)
        assert c == kl_a1.c_element(kl_a1.ext.generator(0))

    def test_empty_subset(self, kl_a1):
        """C_{w_∅} = T_1"""
        assert c_wI(kl_a1.hecke, EMPTY) == kl_a1.hecke.one()

    def test_matches_kl_element_a2(self, kl_a2):
        """C_{w_S} 等于最长元的 C 基元素"""
        full = kl_a2.ext.datum.all_simple
        w0 = kl_a2.ext.finite(kl_a2.ext.weyl.longest_element(full))
        assert c_wI(kl_a2.hecke, full) == kl_a2.c_element(w0)

    def test_square(self, kl_a1):
        """C_s^2 = -(v + v^-1) C_s"""
        hecke = kl_a1.hecke
        c = c_wI(hecke, SimpleSubset.of([0]))
        assert c * c == c.scale(-(V + V_INV))


class TestElements:
    """χ 与 H^{IJ} 元素"""

    def test_chi_of_one(self, a1_full):
        """χ(T_1) = C_s^2 = -(v + v^-1) C_s"""
        e = a1_full.chi(a1_full.hecke.one())
        assert e.carrier == a1_full.c_left.scale(-(V + V_INV))

    def test_annihilation(self, a1_full, a2_mixed):
        """T_t χ(h) = -χ(h)，χ(h) T_s = -χ(h)"""
        for module in (a1_full, a2_mixed):
            for x in module.ext.enumerate_window(2):
                e = module.chi(module.hecke.T(x))
                module.check_annihilation(e.carrier)
        with pytest.raises(HeckeInternalError):
            a1_full.check_annihilation(a1_full.hecke.one())

    def test_arithmetic(self, a1_full, a2_mixed):
        """加法、数乘与模的一致性"""
        e = a1_full.chi(a1_full.hecke.T_letter(1))
        assert e + e == e.scale(2)
        assert (e - e).is_zero()
        assert -e == e.scale(-1)
        assert e.left == a1_full.left
        with pytest.raises(HeckeInputError):
            e + a2_mixed.zero()
        with pytest.raises(TypeError):
            hash(e)

    def test_chi_cprime_vanishing(self, a1_full):
        """x 不是双陪集最短元时 χ(C'_x) = 0"""
        ext = a1_full.ext
        assert a1_full.chi_cprime_vanishing(ext.generator(0)).is_zero()
        assert not a1_full.chi_cprime_vanishing(ext.generator(1)).is_zero()

    def test_bar(self, a1_full):
        """bar 保持 H^{IJ}"""
        e = a1_full.chi(a1_full.hecke.T_letter(1).scale(V))
        barred = a1_full.bar_hij(e)
        a1_full.check_annihilation(barred.carrier)
        assert a1_full.bar_hij(barred) == e


class TestIndices:
    """指标 (λ, z)"""

    def test_reps(self, a1_full, a2_mixed):
        """W^{IJ}"""
        assert [z.label() for z in a1_full.reps] == ["1"]
        assert [z.label() for z in a2_mixed.reps] == ["1", "s2s1"]
        assert a2_mixed.intersection(a2_mixed.reps[1]) == SimpleSubset.of([0])

    def test_coset_indices(self, a1_full, a2_mixed):
        """窗口中的指标"""
        assert [idx.weight for idx in a1_full.coset_indices(2)] == [(0,), (1,), (2,)]
        indices = a2_mixed.coset_indices(1)
        assert len(indices) == 9 + 6
        assert all(idx.weight[0] >= 0 for idx in indices if idx.z.length == 2)

    def test_index_validation(self, a1_full, a2_mixed):
        """不支配的权与不在 W^{IJ} 中的 z 都被拒绝"""
        e = a1_full.weyl.identity
        with pytest.raises(HeckeInputError):
            a1_full.index((-1,), e)
        with pytest.raises(HeckeInputError):
            a2_mixed.index((0, 0), a2_mixed.weyl.simple(0))

    def test_index_of(self, a1_full):
        """t_{-3} 所在双陪集的指标为 (3, 1)"""
        e = a1_full.weyl.identity
        assert a1_full.index_of(a1_full.ext.translation((-3,))) == CosetIndex((3,), e)

    def test_standard_element_uses_minimal_rep(self, a1_full):
        """T_{ω,1} = χ(T_γ)"""
        e = a1_full.weyl.identity
        gamma = a1_full.ext.element((1,), [0])
        idx = a1_full.index((1,), e)
        assert a1_full.standard_basis_elt(idx) == a1_full.chi(a1_full.hecke.T(gamma))


class TestStraighten:
    """拉直"""

    def test_a1_examples(self, a1_full):
        """χ(θ_{-ω}) = v^2 χ(θ_ω)，χ(θ_{-2ω}) = v^2 χ(θ_{2ω}) + (v^2 - 1) χ(θ_0)"""
        e = a1_full.weyl.identity
        assert a1_full.straighten((-1,), e) == {(1,): V2}
        assert a1_full.straighten((-2,), e) == {(2,): V2, (0,): V2 - 1}
        assert a1_full.straighten((3,), e) == {(3,): LaurentPoly.one()}

    def test_matches_direct_computation(self, a1_full, a2_mixed):
        """拉直系数与 χ(θ_μ T_z) 的直接计算一致"""
        for module in (a1_full, a2_mixed):
            for z in module.reps:
                for mu in module.datum.weights_in_box(2):
                    lhs = module.chi(module.hecke.theta(mu) * module.hecke.T(module.ext.finite(z)))
                    coords = {CosetIndex(lam, z): c for lam, c in module.straighten(mu, z).items()}
                    assert module.expand("bernstein", coords) == lhs

    def test_table(self, a1_full):
        """只列出不支配的权"""
        e = a1_full.weyl.identity
        table = a1_full.straightening_table(e, a1_full.datum.weights_in_box(2))
        assert sorted(table) == [(-2,), (-1,)]

    def test_rejects_non_minimal_z(self, a2_mixed):
        """z 必须在 W^{IJ} 中"""
        with pytest.raises(HeckeInputError):
            a2_mixed.straighten((0, 0), a2_mixed.weyl.simple(1))

    def test_cap(self, kl_a1):
        """超过改写上限时报错"""
        full = kl_a1.ext.datum.all_simple
        module = DoubleCosetModule(kl_a1, full, full, straighten_cap=0)
        with pytest.raises(StraighteningError):
            module.straighten((-1,), module.weyl.identity)


class TestCoordinates:
    """三组基下的坐标"""

    def test_bernstein_coords_of_gamma(self, a1_full):
        """χ(T_γ) = -v χ(θ_ω)"""
        gamma = a1_full.ext.element((1,), [0])
        coords = a1_full.to_bernstein_coords(a1_full.chi(a1_full.hecke.T(gamma)))
        assert coords == {CosetIndex((1,), a1_full.weyl.identity): -V}

    @pytest.mark.parametrize("basis", ["standard", "bernstein", "kl"])
    def test_expansion_reconstructs(self, kl_a1, kl_a2, basis):
        """按坐标展开得回原元素"""
        for module in _cases(kl_a1, kl_a2):
            for x in module.ext.enumerate_window(2):
                e = module.chi(module.hecke.T(x).scale(V + 1))
                assert module.expand(basis, module.coords(basis, e)) == e

    @pytest.mark.parametrize("basis", ["standard", "bernstein", "kl"])
    def test_basis_elements_are_unit_vectors(self, kl_a1, kl_a2, basis):
        """基元素自身的坐标为单位向量"""
        for module in _cases(kl_a1, kl_a2):
            for idx in module.coset_indices(1):
                assert module.coords(basis, module.basis_elt(basis, idx)) == {idx: LaurentPoly.one()}

    def test_kl_leading_term(self, a1_full, a2_mixed):
        """C'_{λ,z} 在 T_{λ,z} 上的系数为 v^{-ℓ(m_{λ,z})}"""
        for module in (a1_full, a2_mixed):
            for idx in module.coset_indices(1):
                m = module.minimal_element(idx)
                coords = module.kl_standard_coords(idx)
                assert coords[idx] == v_power(-module.ext.length(m))

    def test_kl_of_s0(self, a1_full):
        """A1：χ(C'_{s0}) = v^-1 (T_{2ω,1} + T_{0,1})"""
        e = a1_full.weyl.identity
        coords = a1_full.kl_standard_coords(CosetIndex((2,), e))
        assert coords == {CosetIndex((2,), e): V_INV, CosetIndex((0,), e): V_INV}

    def test_kl_bar_invariance(self, a1_full, a2_mixed):
        """KL 基元素 bar 不变"""
        for module in (a1_full, a2_mixed):
            for idx in module.coset_indices(1):
                e = module.kl_basis_elt(idx)
                assert module.bar_hij(e) == e

    def test_unknown_basis(self, a1_full):
        """未知的基名"""
        with pytest.raises(HeckeInputError):
            a1_full.coords("monomial", a1_full.zero())

    def test_transition_matrix(self, a1_full):
        """标准基到 KL 基的过渡矩阵是三角的"""
        indices = a1_full.coset_indices(2)
        matrix = a1_full.transition_matrix("kl", "standard", indices)
        e = a1_full.weyl.identity
        assert matrix[CosetIndex((0,), e)] == {CosetIndex((0,), e): LaurentPoly.one()}
        assert matrix[CosetIndex((2,), e)][CosetIndex((2,), e)] == V_INV


class TestStructure:
    """r_{IJ}、滤过与 v = 1 特殊化"""

    def test_r_scalar(self, kl_a1, a1_full, a2_mixed):
        """r_{IJ} = r_I r_J"""
        assert a1_full.r_scalar() == (V + V_INV) ** 2
        assert a2_mixed.r_scalar() == (V + V_INV) ** 2
        assert DoubleCosetModule(kl_a1, EMPTY, EMPTY).r_scalar() == LaurentPoly.one()

    def test_chi_twice(self, a2_mixed):
        """χ(χ(h)) = r_{IJ} χ(h)"""
        hecke = a2_mixed.hecke
        h = hecke.T_letter(2) + hecke.theta((1, -1))
        once = a2_mixed.chi(h)
        twice = a2_mixed.chi(once.carrier)
        assert twice.carrier == once.carrier.scale(a2_mixed.r_scalar())

    def test_specialization(self, a1_full):
        """χ(T_1) 在 v = 1 处为 ε_S ε_S = 2 - 2s"""
        e = a1_full.chi(a1_full.hecke.one())
        s = a1_full.ext.generator(0)
        identity = a1_full.ext.identity
        assert a1_full.specialize_v1(e) == {identity: 2, s: -2}
        assert a1_full.specialize_v1(e, normalized=True) == {identity: 2, s: -2}

    def test_filtration(self, a2_mixed):
        """Bernstein 基元素落在对应的滤过层"""
        low, high = a2_mixed.reps
        e_low = a2_mixed.bernstein_basis_elt(CosetIndex((0, 0), low))
        e_high = a2_mixed.bernstein_basis_elt(CosetIndex((1, 0), high))
        assert a2_mixed.in_filtration(e_low, low)
        assert a2_mixed.in_filtration(e_high, high)
        assert not a2_mixed.in_filtration(e_high, low)
        assert set(a2_mixed.filtration_coords(e_low + e_high)) == {low, high}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
