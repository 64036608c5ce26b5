# Hecke Core Package
from hecke_core.errors import (
    HeckeError, HeckeInputError, RootDatumError,
    HeckeInternalError, StraighteningError
)
from hecke_core.laurent import LaurentPoly, parse_laurent, render, v_power
from hecke_core.models import SimpleSubset, CosetIndex, RootDatumSpec, SuiteReport
from hecke_core.root_datum import RootDatum, preset, PRESET_NAMES
from hecke_core.finite_weyl import WeylElt, WeylGroup
from hecke_core.ext_affine_weyl import ExtAffElt, ExtendedAffineWeylGroup
from hecke_core.hecke_algebra import HeckeElt, HeckeAlgebra, BernsteinForm
from hecke_core.kl_basis import KazhdanLusztigBasis, solve_bar_invariant
from hecke_core.double_coset_module import DoubleCosetModule, HIJElt, c_wI
from hecke_core.expr import parse_expression

__all__ = [
    "HeckeError", "HeckeInputError", "RootDatumError",
    "HeckeInternalError", "StraighteningError",
    "LaurentPoly", "parse_laurent", "render", "v_power",
    "SimpleSubset", "CosetIndex", "RootDatumSpec", "SuiteReport",
    "RootDatum", "preset", "PRESET_NAMES",
    "WeylElt", "WeylGroup", "ExtAffElt", "ExtendedAffineWeylGroup",
    "HeckeElt", "HeckeAlgebra", "BernsteinForm",
    "KazhdanLusztigBasis", "solve_bar_invariant",
    "DoubleCosetModule", "HIJElt", "c_wI",
    "parse_expression"
]
