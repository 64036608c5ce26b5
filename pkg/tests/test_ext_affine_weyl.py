"""
扩展仿射 Weyl 群测试
"""
import functools
import os
import sys

import pytest
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hecke_core.errors import HeckeInputError
from hecke_core.ext_affine_weyl import ExtendedAffineWeylGroup
from hecke_core.finite_weyl import WeylGroup
from hecke_core.models import SimpleSubset
from hecke_core.root_datum import PRESET_NAMES, preset


def _group(name, **kwargs):
    return ExtendedAffineWeylGroup(WeylGroup(preset(name)), **kwargs)


@functools.lru_cache(maxsize=None)
def _cached_group(name):
    return _group(name)


@pytest.fixture(scope="module")
def a1():
    return _group("A1")


@pytest.fixture(scope="module")
def a2():
    return _group("A2")


class TestLength:
    """Iwahori-Matsumoto 长度"""

    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_generators_have_length_one(self, name):
        """S_af 中的生成元长度为 1"""
        ext = _group(name)
        assert all(ext.length(g) == 1 for g in ext.generators)

    def test_a1_translations(self, a1):
        """A1：ℓ(t_k) = |k|，ℓ(t_k s) = |k - 1|"""
        for k in range(-3, 4):
            assert a1.length(a1.element((k,))) == abs(k)
            assert a1.length(a1.element((k,), [0])) == abs(k - 1)

    def test_a1_gamma(self, a1):
        """A1：Γ = {1, t_ω s}"""
        gamma = a1.element((1,), [0])
        assert a1.is_gamma(gamma)
        assert a1.gammas() == [a1.identity, gamma]
        assert a1.multiply(gamma, gamma) == a1.identity

    def test_gamma_counts(self):
        """Γ 的阶：A2 单连通为 3，伴随型为 1"""
        assert len(_group("A2").gammas()) == 3
        assert len(_group("A2ad").gammas()) == 1

    def test_gl2_gamma_truncated(self):
        """GL2 的 Γ 无限，按窗口截断"""
        ext = _group("GL2", gamma_window=2)
        gammas = ext.gammas()
        assert ext.translation((1, 1)) in gammas
        assert ext.translation((3, 3)) not in gammas
        assert all(ext.length(g) == 0 for g in gammas)

    def test_window_size_a1(self, a1):
        """A1：长度不超过 2 的元素共 10 个"""
        assert len(a1.enumerate_window(2)) == 10
        with pytest.raises(HeckeInputError):
            a1.enumerate_window(-1)


class TestWords:
    """约化字"""

    def test_a1_translation_word(self, a1):
        """t_ω = s0 γ"""
        word = a1.reduced_word(a1.translation((1,)))
        assert word.letters == (1,)
        assert word.gamma == a1.element((1,), [0])

    @pytest.mark.parametrize("name", ["A1", "A2", "B2"])
    def test_words_evaluate(self, name):
        """约化字的长度等于 ℓ，且乘回原元素"""
        ext = _group(name)
        for x in ext.enumerate_window(3):
            word = ext.reduced_word(x)
            assert len(word) == ext.length(x)
            assert ext.evaluate(word) == x

    def test_letter_names(self, a1):
        """字母名"""
        assert [a1.letter_name(s) for s in a1.letters] == ["s1", "s0"]
        assert a1.letter_from_name("s0") == 1
        assert a1.is_affine_letter(1)
        with pytest.raises(HeckeInputError):
            a1.letter_from_name("s7")

    def test_serialization(self, a2):
        """to_dict / from_dict"""
        x = a2.element((1, -1), [1, 0])
        assert a2.to_dict(x) == {"lambda": [1, -1], "w": [2, 1]}
        assert a2.from_dict(a2.to_dict(x)) == x
        with pytest.raises(HeckeInputError):
            a2.from_dict({"lambda": [1, 0]})


class TestBruhat:
    """Bruhat 序"""

    def test_a1_basic(self, a1):
        """1 <= s0；不同 Γ 分量不可比"""
        s0 = a1.generator(1)
        assert a1.bruhat_leq(a1.identity, s0)
        assert not a1.bruhat_leq(a1.element((1,), [0]), s0)

    @pytest.mark.parametrize("name", ["A1", "A2"])
    def test_ideal_matches_order(self, name):
        """bruhat_ideal 与 bruhat_leq 一致"""
        ext = _group(name)
        window = ext.enumerate_window(2)
        for x in window:
            ideal = ext.bruhat_ideal(x)
            assert x in ideal
            expected = {y for y in window if ext.length(y) <= ext.length(x) and ext.bruhat_leq(y, x)}
            assert ideal == expected

    @pytest.mark.parametrize("name", ["A1", "A2"])
    def test_subword_ideal(self, name):
        """约化字的子字之积给出同一个 Bruhat 区间"""
        ext = _group(name)
        window = ext.enumerate_window(2)
        for x in window:
            ideal = ext.subword_ideal(x)
            assert ideal == ext.bruhat_ideal(x)
            assert ideal == {y for y in window if ext.bruhat_leq(y, x)}


class TestLengthStep:
    """乘一个仿射单反射，长度恰好变化 1"""

    @settings(deadline=None, max_examples=80)
    @given(st.sampled_from(["A1", "A2", "B2", "GL2"]), st.data())
    def test_length_changes_by_one(self, name, data):
        """ℓ(xs) 与 ℓ(sx) 都等于 ℓ(x) ± 1"""
        ext = _cached_group(name)
        x = data.draw(st.sampled_from(ext.enumerate_window(3)))
        letter = data.draw(st.sampled_from(list(ext.letters)))
        g = ext.generator(letter)
        assert abs(ext.length(ext.multiply(x, g)) - ext.length(x)) == 1
        assert abs(ext.length(ext.multiply(g, x)) - ext.length(x)) == 1


class TestDoubleCosets:
    """双陪集代表"""

    def test_a1_minimal_reps(self, a1):
        """A1，I = J = S：m_{0,1} = 1，m_{ω,1} = γ，m_{2ω,1} = s0"""
        full = a1.datum.all_simple
        e = a1.weyl.identity
        assert a1.minimal_length_rep((0,), e, full, full) == a1.identity
        assert a1.minimal_length_rep((1,), e, full, full) == a1.element((1,), [0])
        assert a1.minimal_length_rep((2,), e, full, full) == a1.generator(1)

    def test_invalid_index(self, a1):
        """权对 K 不支配时报错"""
        full = a1.datum.all_simple
        with pytest.raises(HeckeInputError):
            a1.check_coset_index((-1,), a1.weyl.identity, full, full)

    def test_canonical_rep_a1(self, a1):
        """t_{-3} 的代表为 (3, 1)"""
        full = a1.datum.all_simple
        assert a1.canonical_rep(a1.translation((-3,)), full, full) == ((3,), a1.weyl.identity)

    def test_canonical_rep_constant_on_cosets(self, a2):
        """同一双陪集中的元素给出同一代表"""
        left, right = SimpleSubset.of([0]), SimpleSubset.of([1])
        for x in a2.enumerate_window(2):
            rep = a2.canonical_rep(x, left, right)
            for y in a2.double_coset_elements(x, left, right):
                assert a2.canonical_rep(y, left, right) == rep

    def test_factor_through_minimal(self, a2):
        """x = w1 m w2，长度相加"""
        left, right = SimpleSubset.of([0]), SimpleSubset.of([1])
        for x in a2.enumerate_window(3):
            w1, m, w2 = a2.factor_through_minimal(x, left, right)
            rebuilt = a2.multiply(a2.multiply(a2.finite(w1), m), a2.finite(w2))
            assert rebuilt == x
            assert w1.length + a2.length(m) + w2.length == a2.length(x)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
