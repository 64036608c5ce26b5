"""
根数据测试
"""
import json
import os
import shutil
import sys
import tempfile

import pytest
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hecke_core.errors import HeckeInputError, RootDatumError
from hecke_core.finite_weyl import WeylGroup
from hecke_core.models import SimpleSubset
from hecke_core.root_datum import PRESET_NAMES, RootDatum, preset, sub


@pytest.fixture
def temp_dir():
    """临时目录"""
    path = tempfile.mkdtemp()
    yield path
    shutil.rmtree(path, ignore_errors=True)


def _write_json(directory, data):
    path = os.path.join(directory, "datum.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f)
    return path


class TestPresets:
    """内置预设"""

    @pytest.mark.parametrize("name, positive", [
        ("A1", 1), ("A2", 3), ("B2", 4), ("G2", 6), ("GL2", 1), ("A1ad", 1), ("A2ad", 3),
    ])
    def test_positive_root_counts(self, name, positive):
        """正根个数"""
        assert len(preset(name).positive_roots) == positive

    def test_a2_weight_lattice(self):
        """A2 单连通：单根为 Cartan 矩阵的行"""
        datum = preset("A2")
        assert datum.cartan == ((2, -1), (-1, 2))
        assert datum.simple_roots == ((2, -1), (-1, 2))
        assert datum.two_rho() == (2, 2)
        assert datum.highest_root(0) == ((1, 1), (1, 1))

    def test_adjoint_lattice(self):
        """伴随型：单根为单位向量"""
        datum = preset("A2ad")
        assert datum.simple_roots == ((1, 0), (0, 1))
        assert datum.cartan == ((2, -1), (-1, 2))

    def test_gl2(self):
        """GL2 的格秩为 2，只有一个单根"""
        datum = preset("GL2")
        assert datum.rank == 2
        assert datum.num_simple == 1
        assert datum.pairing((1, 0), 0) == 1
        assert datum.reflect(0, (1, 0)) == (0, 1)

    def test_alias_and_unknown(self):
        """A1affine 与 A1 相同，未知名称报错"""
        assert preset("A1affine").cartan == ((2,),)
        with pytest.raises(RootDatumError):
            preset("nope")

    def test_preset_names_load(self):
        """所有预设都能构造"""
        for name in PRESET_NAMES:
            assert preset(name).num_simple >= 1


class TestValidation:
    """Cartan 矩阵校验"""

    @pytest.mark.parametrize("cartan", [
        [[2, 1], [-1, 2]],
        [[2, -1], [0, 2]],
        [[2, -2], [-2, 2]],
        [[3]],
    ])
    def test_bad_cartan(self, cartan):
        """非有限型或非 Cartan 矩阵被拒绝"""
        with pytest.raises(RootDatumError):
            RootDatum.from_cartan("bad", cartan)

    def test_root_datum_error_is_input_error(self):
        """根数据错误属于输入错误"""
        with pytest.raises(HeckeInputError):
            RootDatum.from_cartan("bad", [[2, 1], [1, 2]])

    def test_load_weight_file(self, temp_dir):
        """读取权格文件"""
        path = _write_json(temp_dir, {"name": "B2", "rank": 2, "cartan": [[2, -2], [-1, 2]]})
        datum = RootDatum.load(path)
        assert len(datum.positive_roots) == 4

    def test_load_explicit_file(self, temp_dir):
        """读取显式格文件"""
        path = _write_json(temp_dir, {
            "name": "GL2", "rank": 2, "cartan": [[2]],
            "lattice": {"simple_roots": [[1, -1]], "simple_coroots": [[1, -1]]},
        })
        assert RootDatum.load(path).rank == 2

    def test_load_inconsistent_explicit_file(self, temp_dir):
        """显式格的配对与给定 Cartan 矩阵不符"""
        path = _write_json(temp_dir, {
            "name": "GL2", "rank": 2, "cartan": [[3]],
            "lattice": {"simple_roots": [[1, -1]], "simple_coroots": [[1, -1]]},
        })
        with pytest.raises(RootDatumError):
            RootDatum.load(path)

    def test_load_corrupted_files(self, temp_dir):
        """格式错误与非 Cartan 矩阵"""
        path = _write_json(temp_dir, {"name": "X", "cartan": [[2, -1], [-1, 2]]})
        with pytest.raises(RootDatumError):
            RootDatum.load(path)
        path = _write_json(temp_dir, {"name": "X", "rank": 2, "cartan": [[2, -1], [-1, 3]]})
        with pytest.raises(RootDatumError):
            RootDatum.load(path)


class TestWeights:
    """配对、反射与支配分解"""

    @settings(deadline=None, max_examples=60)
    @given(
        st.sampled_from(["A2", "B2", "G2", "A2ad"]),
        st.integers(min_value=0, max_value=1),
        st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
    )
    def test_reflection_involution(self, name, i, lam):
        """s_i 是对合且把 α_i 变为 -α_i"""
        datum = preset(name)
        assert datum.reflect(i, datum.reflect(i, lam)) == lam
        alpha = datum.simple_roots[i]
        assert datum.reflect(i, alpha) == tuple(-x for x in alpha)

    @settings(deadline=None, max_examples=60)
    @given(
        st.sampled_from(["A2", "B2", "G2", "A2ad"]),
        st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
    )
    def test_dominant_difference(self, name, lam):
        """λ = μ - ν，μ 与 ν 都支配"""
        datum = preset(name)
        mu, nu = datum.dominant_difference(lam)
        assert sub(mu, nu) == lam
        assert datum.is_dominant_for(mu, datum.all_simple)
        assert datum.is_dominant_for(nu, datum.all_simple)

    def test_dominant_representative(self):
        """在 W_I 轨道中取 I-支配代表"""
        datum = preset("A2")
        mu, word = datum.dominant_representative((-1, 0), SimpleSubset.of([0]))
        assert mu == (1, -1)
        assert word == (0,)

    @settings(deadline=None, max_examples=80)
    @given(
        st.sampled_from(["A2", "B2", "G2", "A2ad"]),
        st.sampled_from([(), (0,), (1,), (0, 1)]),
        st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
    )
    def test_dominant_representative_properties(self, name, items, lam):
        """代表是 I-支配的、幂等，且由所给的 W_I 中的字得到"""
        datum = preset(name)
        subset = SimpleSubset.of(items)
        mu, word = datum.dominant_representative(lam, subset)
        assert datum.is_dominant_for(mu, subset)
        assert set(word) <= set(subset)
        assert WeylGroup(datum).from_word(word).act(lam) == mu
        assert datum.dominant_representative(mu, subset) == (mu, ())

    @pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2", "GL2", "A2ad", "B3"])
    def test_reflections_permute_roots(self, name):
        """每个 s_β 置换全体根并把 β 变为 -β"""
        datum = preset(name)
        roots = set(datum.positive_roots) | {tuple(-x for x in r) for r in datum.positive_roots}
        for k, beta in enumerate(datum.positive_roots):
            assert {datum.reflect_general(k, r) for r in roots} == roots
            assert datum.reflect_general(k, beta) == tuple(-x for x in beta)

    def test_check_weight(self):
        """坐标长度检查"""
        with pytest.raises(HeckeInputError):
            preset("A2").check_weight((1,))
        with pytest.raises(HeckeInputError):
            preset("A2").check_index(2)

    def test_weights_in_box(self):
        """窗口中的权个数"""
        assert len(list(preset("A2").weights_in_box(1))) == 9


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
