"""
数据模型定义

所有领域类型都是不可变的 pydantic 模型（值语义，可在线程间自由共享）。
能级标签 1..4 是结构性的（ψ1 单态、ψ2 三重态零分量、ψ3/ψ4 位于
span{|11>, |00>}），不是按能量排序的。
"""
import math
from enum import Enum
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .exceptions import BathOrderError, InvalidParameterError, LmgError, NumericalError

# 判定 W = 0 的数值零点
TOL_ZERO = 1e-12


class Regime(str, Enum):
    """循环工作状态"""
    ENGINE = "engine"  # 热机
    NULL = "null"  # 零功
    NON_ENGINE = "non-engine"  # 非热机（制冷机/加热器不再细分）


class Axis(str, Enum):
    """能级扫描轴"""
    FIELD = "field"  # 横向磁场 h
    COUPLING = "coupling"  # 耦合强度 J

    @property
    def parameter(self) -> str:
        return "h" if self is Axis.FIELD else "J"


class Objective(str, Enum):
    """最大化目标"""
    WORK = "work"
    EFFICIENCY = "efficiency"


def _first_error(exc: ValidationError) -> str:
    err = exc.errors()[0]
    loc = ".".join(str(part) for part in err.get("loc", ())) or "value"
    return f"{loc}: {err.get('msg', 'invalid')}"


class DomainModel(BaseModel):
    """领域模型基类：不可变、拒绝 NaN/∞、拒绝未知字段"""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra="forbid")

    @classmethod
    def create(cls, **values):
        """
        构造并校验模型

        pydantic 的 ValidationError 被转换为 InvalidParameterError；
        校验器内部抛出的 LmgError 原样抛出。
        """
        try:
            return cls(**values)
        except ValidationError as exc:
            for err in exc.errors():
                original = (err.get("ctx") or {}).get("error")
                if isinstance(original, LmgError):
                    raise original from exc
            raise InvalidParameterError(f"{cls.__name__} {_first_error(exc)}") from exc

    def replace(self, **changes):
        """返回修改了部分字段的新实例（重新校验）"""
        return type(self).create(**{**self.model_dump(), **changes})


# ==================== spectrum ====================

class LmgParams(DomainModel):
    """N=2 LMG 模型的控制参数 (J, γ, h)，ħ = k_B = 1"""
    J: float
    gamma: float = Field(ge=-1.0, le=1.0)
    h: float = Field(ge=0.0)


class Spectrum(DomainModel):
    """带结构标签的本征系统"""
    params: LmgParams
    energies: tuple[float, float, float, float]
    vectors: tuple[
        tuple[float, float, float, float],
        tuple[float, float, float, float],
        tuple[float, float, float, float],
        tuple[float, float, float, float],
    ]
    kappa: float = Field(ge=0.0)
    a_minus: Optional[float] = None
    a_plus: Optional[float] = None

    @model_validator(mode="after")
    def _check_ordering(self) -> "Spectrum":
        if self.energies[2] > self.energies[3]:
            raise ValueError("E3 must not exceed E4")
        return self

    @property
    def energy_array(self) -> np.ndarray:
        return np.array(self.energies)

    @property
    def vector_matrix(self) -> np.ndarray:
        """列向量为 ψ1..ψ4 的 4x4 矩阵"""
        return np.array(self.vectors).T

    def energy(self, label: int) -> float:
        return self.energies[label - 1]

    def vector(self, label: int) -> np.ndarray:
        return np.array(self.vectors[label - 1])


class CrossingReport(DomainModel):
    """能级交叉位置"""
    pair: tuple[int, int]
    axis: Axis
    location: float
    bracket: tuple[float, float]
    gap: float  # |E_m - E_n| 在 location 处的值


class LevelRow(DomainModel):
    """能级表的一行"""
    x: float
    energies: tuple[float, float, float, float]


# ==================== thermo ====================

class BathPair(DomainModel):
    """热库温度对 (k_B = 1)"""
    t_hot: float
    t_cold: float

    @model_validator(mode="after")
    def _check_order(self) -> "BathPair":
        if not self.t_cold > 0.0:
            raise BathOrderError(f"冷库温度必须为正: T2={self.t_cold}")
        if not self.t_hot > self.t_cold:
            raise BathOrderError(f"要求 T1 > T2: T1={self.t_hot}, T2={self.t_cold}")
        return self


class ThermalState(DomainModel):
    """Gibbs 态：按标签对齐的占据概率"""
    populations: tuple[float, ...]
    partition: float = Field(gt=0.0)  # 平移后能量的配分函数
    shift: float  # 指数化前减去的最低能量
    temperature: float = Field(gt=0.0)

    @field_validator("populations")
    @classmethod
    def _check_normalized(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if any(p < 0.0 or p > 1.0 for p in value):
            raise ValueError("populations must lie in [0, 1]")
        if abs(math.fsum(value) - 1.0) > 1e-12:
            raise ValueError("populations must sum to 1")
        return value

    @property
    def log_partition(self) -> float:
        """未平移能量的 ln Z"""
        return math.log(self.partition) - self.shift / self.temperature


class CycleResult(DomainModel):
    """一次 Otto 循环的能量学结果"""
    q_hot: float  # Q1
    q_cold: float  # Q2
    work: float  # W
    efficiency: Optional[float] = None  # 仅在 regime = engine 时存在
    carnot: float
    regime: Regime

    @model_validator(mode="after")
    def _check_first_law(self) -> "CycleResult":
        scale = max(1.0, abs(self.q_hot) + abs(self.q_cold))
        if abs(self.work - (self.q_hot + self.q_cold)) > 1e-12 * scale:
            raise NumericalError(f"第一定律不闭合: W={self.work!r}, Q1+Q2={self.q_hot + self.q_cold!r}")
        if (self.efficiency is not None) != (self.regime is Regime.ENGINE):
            raise ValueError("efficiency is defined only for engine cycles")
        return self


# ==================== protocols ====================

class FieldSweep(DomainModel):
    """情形 (i)：只改变磁场 h1 -> h2，耦合 J 固定"""
    kind: Literal["field"] = "field"
    J: float
    gamma: float = Field(ge=-1.0, le=1.0)
    h1: float = Field(ge=0.0)
    h2: float = Field(ge=0.0)

    def endpoints(self) -> tuple[LmgParams, LmgParams]:
        return (
            LmgParams.create(J=self.J, gamma=self.gamma, h=self.h1),
            LmgParams.create(J=self.J, gamma=self.gamma, h=self.h2),
        )


class CouplingSweep(DomainModel):
    """情形 (ii)：只改变耦合 J1 -> J2，磁场 h 固定"""
    kind: Literal["coupling"] = "coupling"
    h: float = Field(ge=0.0)
    gamma: float = Field(ge=-1.0, le=1.0)
    J1: float
    J2: float

    def endpoints(self) -> tuple[LmgParams, LmgParams]:
        return (
            LmgParams.create(J=self.J1, gamma=self.gamma, h=self.h),
            LmgParams.create(J=self.J2, gamma=self.gamma, h=self.h),
        )


class Proportional(DomainModel):
    """情形 (iii)：J 与 h 同比例变化，J_i = r·h_i"""
    kind: Literal["proportional"] = "proportional"
    r: float
    gamma: float = Field(ge=-1.0, le=1.0)
    h1: float = Field(ge=0.0)
    h2: float = Field(ge=0.0)

    @property
    def J1(self) -> float:
        return self.r * self.h1

    @property
    def J2(self) -> float:
        return self.r * self.h2

    def endpoints(self) -> tuple[LmgParams, LmgParams]:
        return (
            LmgParams.create(J=self.J1, gamma=self.gamma, h=self.h1),
            LmgParams.create(J=self.J2, gamma=self.gamma, h=self.h2),
        )


AdiabaticProtocol = Annotated[
    Union[FieldSweep, CouplingSweep, Proportional],
    Field(discriminator="kind"),
]

PROTOCOL_TYPES = {
    "field": FieldSweep,
    "coupling": CouplingSweep,
    "proportional": Proportional,
}


class GapRatio(DomainModel):
    """情形 (iii) 的能隙比例常数"""
    alpha: float
    max_deviation: float = Field(ge=0.0)


class PwcCounterexample(DomainModel):
    """违反 Kieu 正功条件却仍作为热机工作的一个循环"""
    protocol: Proportional
    baths: BathPair
    work: float


class PwcAudit(DomainModel):
    """情形 (iii) 正功条件猜想的数值审计"""
    checked: int
    engine_cycles: int
    counterexamples: tuple[PwcCounterexample, ...] = ()

    @property
    def holds(self) -> bool:
        return not self.counterexamples


# ==================== sweep ====================

class SweepSpec(DomainModel):
    """一维参数扫描：协议模板 + 自由轴 + 网格 + 热库"""
    protocol: AdiabaticProtocol
    axis: str
    axis_range: tuple[float, float]
    steps: int = Field(ge=2)
    baths: BathPair

    @model_validator(mode="after")
    def _check_axis(self) -> "SweepSpec":
        lo, hi = self.axis_range
        if not lo < hi:
            raise ValueError(f"axis range must satisfy min < max, got {lo}:{hi}")
        free = set(type(self.protocol).model_fields) - {"kind"}
        if self.axis not in free:
            raise ValueError(
                f"axis '{self.axis}' is not a parameter of {type(self.protocol).__name__} "
                f"(choose from {sorted(free)})"
            )
        return self

    @property
    def grid(self) -> np.ndarray:
        lo, hi = self.axis_range
        return np.linspace(lo, hi, self.steps)

    def protocol_at(self, x: float):
        """自由轴取值为 x 的协议"""
        return self.protocol.replace(**{self.axis: float(x)})

    def with_protocol(self, **changes) -> "SweepSpec":
        """修改模板协议中的其它参数（例如 γ）"""
        return self.replace(protocol=self.protocol.replace(**changes))


class SweepRow(DomainModel):
    """扫描结果的一行；error 非空表示该点求值失败"""
    x: float
    work: Optional[float] = None
    q_hot: Optional[float] = None
    q_cold: Optional[float] = None
    efficiency: Optional[float] = None
    carnot: Optional[float] = None
    regime: Optional[Regime] = None
    error: Optional[str] = None

    @property
    def is_engine(self) -> bool:
        return self.regime is Regime.ENGINE


class SweepResult(DomainModel):
    """按自由轴升序排列的扫描结果"""
    axis: str
    rows: tuple[SweepRow, ...]

    @property
    def xs(self) -> np.ndarray:
        return np.array([row.x for row in self.rows])

    @property
    def engine_rows(self) -> list[SweepRow]:
        return [row for row in self.rows if row.is_engine]


class MaxReport(DomainModel):
    """最大功 W_m 或最大效率 η_m"""
    objective: Objective
    arg: float
    value: float
    refined: bool
    on_boundary: bool = False  # 最大值落在扫描区间端点


class Window(DomainModel):
    """热机工作窗口：互不相交、升序的区间"""
    intervals: tuple[tuple[float, float], ...] = ()

    @field_validator("intervals")
    @classmethod
    def _check_disjoint(cls, value):
        for lo, hi in value:
            if lo > hi:
                raise ValueError("interval must satisfy lo <= hi")
        for (_, prev_hi), (lo, _) in zip(value, value[1:]):
            if lo <= prev_hi:
                raise ValueError("intervals must be disjoint and ordered")
        return value

    @property
    def is_empty(self) -> bool:
        return not self.intervals


class ProfileRow(DomainModel):
    """γ 依赖表的一行；无热机工作点时为空"""
    gamma: float
    w_max: Optional[float] = None
    eta_max: Optional[float] = None


# ==================== selftest ====================

class CheckResult(DomainModel):
    """一项自检的结果"""
    suite: str
    name: str
    passed: bool
    detail: str = ""


# ==================== presets ====================

class LevelPanel(DomainModel):
    """能级图的一个面板：除扫描轴以外的参数"""
    panel: str
    params: LmgParams


class FigurePreset(DomainModel):
    """
    一张图的参数预设

    cycle 预设：对每个 γ 曲线做一次循环扫描，可选 γ 依赖表插图；
    levels 预设：对每个面板输出沿 h 或 J 的四条能级。
    """
    name: str
    source_label: str
    title: str
    kind: Literal["cycle", "levels"]
    axis: str
    axis_range: tuple[float, float]
    steps: int = Field(default=401, ge=2)
    protocol: Optional[AdiabaticProtocol] = None
    baths: Optional[BathPair] = None
    curve_gammas: tuple[float, ...] = ()
    inset_panels: tuple[str, ...] = ()
    inset_range: Optional[tuple[float, float]] = None
    work_ratio: bool = False
    level_panels: tuple[LevelPanel, ...] = ()

    @model_validator(mode="after")
    def _check_kind(self) -> "FigurePreset":
        if self.kind == "cycle":
            if self.protocol is None or self.baths is None:
                raise ValueError("cycle presets need a protocol and baths")
            if not self.curve_gammas:
                raise ValueError("cycle presets need at least one gamma curve")
            if self.work_ratio and not isinstance(self.protocol, Proportional):
                raise ValueError("work_ratio is only defined for proportional presets")
        else:
            if self.axis not in {"h", "J"}:
                raise ValueError("level presets sweep h or J")
            if not self.level_panels:
                raise ValueError("level presets need at least one panel")
        return self

    @property
    def level_axis(self) -> Axis:
        return Axis.FIELD if self.axis == "h" else Axis.COUPLING


class ManifestEntry(DomainModel):
    """预设运行写出的一个文件"""
    path: str  # 相对输出目录
    role: Literal["curve", "ratio", "inset", "ratio_inset", "levels"]
    panel: str = ""
    label: str = ""
    columns: tuple[str, ...]


class Manifest(DomainModel):
    """预设运行清单：参数、扫描区间与文件列表"""
    preset: str
    source_label: str = ""
    title: str = ""
    axis: str = ""
    axis_range: Optional[tuple[float, float]] = None
    inset_range: Optional[tuple[float, float]] = None
    steps: int = 0
    parameters: dict[str, float] = Field(default_factory=dict)
    files: tuple[ManifestEntry, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.files

    def entries(self, role: str) -> list[ManifestEntry]:
        return [entry for entry in self.files if entry.role == role]
