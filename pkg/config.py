"""
配置管理模块
"""
import copy
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Literal, Optional, Union

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from core.exceptions import InvalidParameterError
from core.models import BathPair, CouplingSweep, FieldSweep, LmgParams, Proportional, SweepSpec

load_dotenv()


@dataclass
class SweepConfig:
    """扫描配置"""
    default_steps: int = 401  # 每次扫描的网格点数
    workers: int = 1  # >1 时用线程池并发求值
    golden_tol: float = 1e-8
    bisect_tol: float = 1e-8
    gamma_points: int = 21  # γ 依赖表的点数


@dataclass
class LogConfig:
    """日志配置"""
    log_dir: str = "logs"
    log_level: str = "DEBUG"
    save_manifest: bool = True


@dataclass
class OutputConfig:
    """输出配置"""
    out_dir: str = "results"
    significant_digits: int = 12


@dataclass
class Config:
    """全局配置"""
    sweep: SweepConfig = field(default_factory=SweepConfig)
    log: LogConfig = field(default_factory=LogConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        # 从环境变量加载配置（只覆盖已设置的变量）
        env = {
            "LMG_SWEEP_STEPS": (self.sweep, "default_steps", int),
            "LMG_SWEEP_WORKERS": (self.sweep, "workers", int),
            "LMG_GAMMA_POINTS": (self.sweep, "gamma_points", int),
            "LMG_LOG_DIR": (self.log, "log_dir", str),
            "LMG_LOG_LEVEL": (self.log, "log_level", str),
            "LMG_OUT_DIR": (self.output, "out_dir", str),
        }
        for name, (section, attr, cast) in env.items():
            value = os.getenv(name)
            if value is None or value == "":
                continue
            try:
                setattr(section, attr, cast(value))
            except ValueError as e:
                raise InvalidParameterError(f"环境变量 {name}={value!r} 非法: {e}") from e

    def with_overrides(self, **changes) -> "Config":
        """返回修改了若干字段的副本，字段名在各分节中查找"""
        updated = copy.deepcopy(self)
        sections = (updated.sweep, updated.log, updated.output)
        for key, value in changes.items():
            for section in sections:
                if key in {f.name for f in fields(section)}:
                    setattr(section, key, value)
                    break
            else:
                raise InvalidParameterError(f"未知的配置项: {key}")
        return updated


# 各情形必需的参数
CASE_PARAMETERS = {
    "i": ("J", "h1", "h2"),
    "ii": ("h", "J1", "J2"),
    "iii": ("r", "h1", "h2"),
}

CASE_PROTOCOLS = {
    "i": FieldSweep,
    "ii": CouplingSweep,
    "iii": Proportional,
}


class RunConfig(BaseModel):
    """
    一次命令行运行的请求

    可由 key=value 文件与命令行参数合并而来，命令行优先；
    未知键直接拒绝。
    """
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, frozen=True)

    case: Optional[Literal["i", "ii", "iii"]] = None
    J: Optional[float] = None
    J1: Optional[float] = None
    J2: Optional[float] = None
    h: Optional[float] = None
    h1: Optional[float] = None
    h2: Optional[float] = None
    gamma: float = 0.0
    r: Optional[float] = None
    T1: Optional[float] = None
    T2: Optional[float] = None
    axis: Optional[str] = None
    range: Optional[tuple[float, float]] = None
    steps: Optional[int] = Field(default=None, ge=2)
    out: Optional[str] = None

    @field_validator("range", mode="before")
    @classmethod
    def _parse_range(cls, value):
        if isinstance(value, str):
            lo, sep, hi = value.partition(":")
            if not sep:
                raise ValueError("range must look like min:max")
            return (lo.strip(), hi.strip())
        return value

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None, **flags) -> "RunConfig":
        """
        合并配置文件与命令行参数

        Raises:
            FileNotFoundError: 配置文件不存在
            InvalidParameterError: 未知键或非法取值（消息中给出键名）
        """
        values: dict = {}
        if path is not None:
            path = Path(path)
            if not path.is_file():
                raise FileNotFoundError(f"配置文件不存在: {path}")
            values.update({k: v for k, v in dotenv_values(path).items() if v is not None})
        values.update({k: v for k, v in flags.items() if v is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            err = e.errors()[0]
            key = ".".join(str(part) for part in err.get("loc", ())) or "?"
            raise InvalidParameterError(f"配置项 {key}: {err.get('msg', 'invalid')}") from e

    def _require(self, *keys: str) -> None:
        missing = [k for k in keys if getattr(self, k) is None]
        if missing:
            raise InvalidParameterError(f"缺少参数: {', '.join(missing)}")

    def params(self) -> LmgParams:
        """spectrum 命令的 (J, γ, h)"""
        self._require("J", "h")
        return LmgParams.create(J=self.J, gamma=self.gamma, h=self.h)

    def baths(self) -> BathPair:
        self._require("T1", "T2")
        return BathPair.create(t_hot=self.T1, t_cold=self.T2)

    def protocol(self):
        """按 case 构造绝热协议；扫描轴上未给出的参数取区间下端"""
        if self.case is None:
            raise InvalidParameterError("缺少参数: case")
        values = {"gamma": self.gamma}
        for key in CASE_PARAMETERS[self.case]:
            value = getattr(self, key)
            if value is None and key == self.axis and self.range is not None:
                value = self.range[0]
            if value is None:
                raise InvalidParameterError(f"case={self.case} 缺少参数: {key}")
            values[key] = value
        return CASE_PROTOCOLS[self.case].create(**values)

    def sweep_spec(self, default_steps: int) -> SweepSpec:
        self._require("axis", "range")
        return SweepSpec.create(
            protocol=self.protocol(),
            axis=self.axis,
            axis_range=self.range,
            steps=self.steps or default_steps,
            baths=self.baths(),
        )


# 全局配置实例
config = Config()
