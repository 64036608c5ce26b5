"""
数据模型定义
值类型（权、单反射子集、陪集指标）用 dataclass；
外部输入与报告用 pydantic 模型做校验与序列化
"""
import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict, Iterable, Iterator, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

if TYPE_CHECKING:
    from hecke_core.finite_weyl import WeylElt


# X(T) 中的权，按所选基的整数坐标
Weight = Tuple[int, ...]


@dataclass(frozen=True)
class SimpleSubset:
    """S 的子集 I，内部用 0 起始下标、排序存储"""
    indices: Tuple[int, ...] = ()

    @classmethod
    def of(cls, items: Iterable[int]) -> "SimpleSubset":
        return cls(tuple(sorted(set(int(i) for i in items))))

    @classmethod
    def empty(cls) -> "SimpleSubset":
        return cls(())

    def __contains__(self, i: object) -> bool:
        return i in self.indices

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def label(self) -> str:
        """显示用，1 起始"""
        if not self.indices:
            return "∅"
        return "{" + ",".join(str(i + 1) for i in self.indices) + "}"

    def to_list(self) -> List[int]:
        return [i + 1 for i in self.indices]


@dataclass(frozen=True)
class CosetIndex:
    """双陪集 W_I t_λ z W_J 的指标 (λ, z)"""
    weight: Weight
    z: "WeylElt"

    def to_dict(self) -> Dict[str, Any]:
        return {"lambda": list(self.weight), "z": [i + 1 for i in self.z.word]}

    def label(self) -> str:
        word = "".join(f"s{i + 1}" for i in self.z.word) or "1"
        return f"({','.join(map(str, self.weight))}; {word})"


# ========== 根数据输入文件 ==========

class ExplicitLattice(BaseModel):
    """显式给出的格：单根与单余根的坐标"""
    simple_roots: List[List[int]]
    simple_coroots: List[List[int]]

    @model_validator(mode="after")
    def _same_shape(self) -> "ExplicitLattice":
        if len(self.simple_roots) != len(self.simple_coroots):
            raise ValueError("单根与单余根的个数不一致")
        widths = {len(r) for r in self.simple_roots + self.simple_coroots}
        if len(widths) > 1:
            raise ValueError("单根与单余根的坐标长度不一致")
        return self


class RootDatumSpec(BaseModel):
    """根数据 JSON 文件"""
    name: str
    rank: int = Field(gt=0)
    cartan: List[List[int]]
    lattice: Union[Literal["weight"], ExplicitLattice] = "weight"

    @field_validator("cartan")
    @classmethod
    def _square(cls, value: List[List[int]]) -> List[List[int]]:
        if not value or any(len(row) != len(value) for row in value):
            raise ValueError("Cartan 矩阵必须是非空方阵")
        return value

    @model_validator(mode="after")
    def _rank_matches(self) -> "RootDatumSpec":
        if self.lattice == "weight":
            if self.rank != len(self.cartan):
                raise ValueError("权格情形下 rank 必须等于 Cartan 矩阵阶数")
        else:
            if len(self.lattice.simple_roots) != len(self.cartan):
                raise ValueError("单根个数必须等于 Cartan 矩阵阶数")
            if self.lattice.simple_roots and len(self.lattice.simple_roots[0]) != self.rank:
                raise ValueError("坐标长度必须等于 rank")
        return self


# ========== 验证报告 ==========

class CheckRecord(BaseModel):
    """单项检查记录"""
    name: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    status: Literal["pass", "fail"]
    counterexample: Optional[str] = None
    detail: Optional[str] = None
    seconds: float = 0.0


class SuiteReport(BaseModel):
    """整套验证的报告"""
    datum: str
    length_window: int
    weight_window: int
    checks: List[CheckRecord] = Field(default_factory=list)
    notes: Dict[str, Any] = Field(default_factory=dict)
    total_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    @property
    def failures(self) -> List[CheckRecord]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self, drop_timing: bool = False) -> str:
        exclude: Dict[str, Any] = {}
        if drop_timing:
            exclude = {"checks": {"__all__": {"seconds"}}, "total_seconds": True}
        data = self.model_dump(exclude=exclude)
        data["passed"] = self.passed
        return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True)


# ========== 基展开 ==========

class ExpansionTerm(BaseModel):
    """展开式中的一项"""
    element: Dict[str, Any]
    coeff: str


class ExpansionReport(BaseModel):
    """H^{IJ} 元素在某组基下的展开"""
    I: List[int]
    J: List[int]
    basis: Literal["standard", "bernstein", "kl"]
    index: Optional[Dict[str, Any]] = None
    expansion: List[ExpansionTerm] = Field(default_factory=list)
    carrier: List[ExpansionTerm] = Field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(), ensure_ascii=False, indent=2)
