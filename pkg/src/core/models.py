"""Data models for the ffheat simulator."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import NUMERICS_DEFAULTS


class ScheduleShape(str, Enum):
    """Profile of the magnification factor alpha(t)."""
    COSINE = "cosine"
    CONSTANT = "constant"


class Clock(str, Enum):
    """Which clock drives the wall."""
    STANDARD = "standard"
    FAST_FORWARD = "fast_forward"


class DecayModel(str, Enum):
    """How the mode decay factor treats a time-varying box width."""
    LITERAL = "literal"
    INTEGRATED = "integrated"


class ThetaExponent(str, Enum):
    """Prefactor multiplying theta in the regularization factor."""
    EPSILON = "epsilon"
    VELOCITY = "velocity"


class BasisNormalization(str, Enum):
    """Normalization of the box eigenmodes fed to the theta equation."""
    NORMALIZED = "normalized"
    RAW = "raw"


class RunMode(str, Enum):
    STANDARD = "standard"
    FAST_FORWARD = "fast_forward"
    BOTH = "both"


class SolverChoice(str, Enum):
    SERIES = "series"
    GRID = "grid"
    BOTH = "both"


class FluxSource(str, Enum):
    SERIES_STANDARD = "series_standard"
    SERIES_FF = "series_ff"
    GRID = "grid"


class ScheduleConfig(BaseModel):
    """Time-rescaling apparatus: wall law and magnification schedule."""
    model_config = ConfigDict(frozen=True, extra="forbid", title="ScheduleConfig")

    L0: float = 10.0
    epsilon: float = 0.04
    alpha_bar: float = 100.0
    T_standard: float = 100.0
    shape: ScheduleShape = ScheduleShape.COSINE

    @field_validator("L0")
    def validate_L0(cls, v):
        """Initial box width must be positive."""
        if not v > 0:
            raise ValueError("L0 > 0")
        return v

    @field_validator("epsilon")
    def validate_epsilon(cls, v):
        if not v >= 0:
            raise ValueError("epsilon ≥ 0")
        return v

    @field_validator("alpha_bar")
    def validate_alpha_bar(cls, v):
        """Deceleration schedules are not supported."""
        if not v >= 1:
            raise ValueError("alpha_bar ≥ 1")
        return v

    @field_validator("T_standard")
    def validate_T_standard(cls, v):
        if not v > 0:
            raise ValueError("T_standard > 0")
        return v

    @property
    def T_FF(self) -> float:
        """Fast-forward duration, always derived from T_standard / alpha_bar."""
        return self.T_standard / self.alpha_bar


class GaussianProfile(BaseModel):
    """Initial temperature profile f(x) = exp(-(x-x0)^2/sigma^2) / (sqrt(2 pi) sigma)."""
    model_config = ConfigDict(frozen=True, extra="forbid", title="GaussianProfile")

    x0: float
    sigma: float
    domain_length: Optional[float] = None

    @field_validator("sigma")
    def validate_sigma(cls, v):
        if not v > 0:
            raise ValueError("sigma > 0")
        return v

    @model_validator(mode="after")
    def validate_center(self):
        """The center has to sit strictly inside the stated domain."""
        if self.domain_length is not None and not 0 < self.x0 < self.domain_length:
            raise ValueError(f"x0 must lie in (0, {self.domain_length})")
        return self

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        norm = 1.0 / (math.sqrt(2.0 * math.pi) * self.sigma)
        return norm * np.exp(-((x - self.x0) ** 2) / self.sigma ** 2)


class ModalDecomposition(BaseModel):
    """Truncated sine-series coefficients C_1..C_N on a reference box."""
    model_config = ConfigDict(frozen=True, extra="forbid", title="ModalDecomposition")

    coeffs: Tuple[float, ...]
    n_max: int
    L_ref: float
    kappa: float
    tail_bound: float = 0.0  # max(|C_{N-1}|, |C_N|) / max_n |C_n| at projection

    @field_validator("coeffs")
    def validate_coeffs(cls, v):
        if not all(math.isfinite(c) for c in v):
            raise ValueError("coefficients must be finite")
        return v

    @field_validator("L_ref", "kappa")
    def validate_positive(cls, v, info):
        if not v > 0:
            raise ValueError(f"{info.field_name} > 0")
        return v

    @model_validator(mode="after")
    def validate_length(self):
        if self.n_max < 1:
            raise ValueError("n_max ≥ 1")
        if len(self.coeffs) != self.n_max:
            raise ValueError(f"expected {self.n_max} coefficients, got {len(self.coeffs)}")
        return self

    @classmethod
    def from_coefficients(cls, coeffs, L_ref: float, kappa: float) -> "ModalDecomposition":
        """Build a decomposition directly from a coefficient sequence."""
        values = tuple(float(c) for c in coeffs)
        return cls(coeffs=values, n_max=len(values), L_ref=L_ref, kappa=kappa)

    @property
    def coefficients(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    @property
    def modes(self) -> np.ndarray:
        return np.arange(1, self.n_max + 1, dtype=float)


@dataclass
class GridField:
    """Temperature samples on the mapped grid xi in [0, 1], x = xi * L."""
    values: np.ndarray
    L: float
    t: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size < 17:
            raise ValueError("GridField needs M >= 16 (at least 17 nodes)")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("GridField values must be finite")
        if self.values[0] != 0.0 or self.values[-1] != 0.0:
            raise ValueError("GridField values must vanish at both walls")

    @property
    def M(self) -> int:
        return self.values.size - 1

    @property
    def xi(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.M + 1)

    @property
    def positions(self) -> np.ndarray:
        return self.xi * self.L


@dataclass
class FluxField:
    """Heat flux J = -kappa^2 du/dx sampled at one time."""
    positions: np.ndarray
    flux_values: np.ndarray
    t: float
    source: FluxSource

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        self.flux_values = np.asarray(self.flux_values, dtype=float)
        if self.positions.shape != self.flux_values.shape:
            raise ValueError("positions and flux_values differ in cardinality")
        if self.positions.size > 1 and not np.all(np.diff(self.positions) > 0):
            raise ValueError("positions must be strictly increasing")


@dataclass
class FieldSamples:
    """Field values on an explicit x-grid, as compared by compare_fields."""
    positions: np.ndarray
    values: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.positions.shape != self.values.shape:
            raise ValueError("positions and values differ in cardinality")


class ErrorReport(BaseModel):
    """Norms of the difference between two sampled fields."""
    model_config = ConfigDict(frozen=True, title="ErrorReport")

    l2: float
    linf: float
    relative_l2: float
    n_points: int
    spacing: float
    metadata: Dict[str, Any] = Field(default_factory=dict)


class PhysicsBlock(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kappa: float = 0.5

    @field_validator("kappa")
    def validate_kappa(cls, v):
        if not v > 0:
            raise ValueError("kappa > 0")
        return v


class ProfileBlock(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    x0: Optional[float] = None  # None resolves to L0 / 2
    sigma: float = 1.0

    @field_validator("sigma")
    def validate_sigma(cls, v):
        if not v > 0:
            raise ValueError("sigma > 0")
        return v


class NumericsBlock(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_max: int = NUMERICS_DEFAULTS["n_max"]
    quad_points: int = NUMERICS_DEFAULTS["quad_points"]
    M: int = NUMERICS_DEFAULTS["M"]
    dt: Optional[float] = None  # None resolves to T_FF / steps_per_T_FF
    tail_tol: float = NUMERICS_DEFAULTS["tail_tol"]
    decay_model: DecayModel = DecayModel.LITERAL
    theta_exponent: ThetaExponent = ThetaExponent.EPSILON
    basis_normalization: BasisNormalization = BasisNormalization.NORMALIZED

    @field_validator("n_max")
    def validate_n_max(cls, v):
        if v < 1:
            raise ValueError("n_max ≥ 1")
        return v

    @field_validator("M")
    def validate_M(cls, v):
        if v < 16:
            raise ValueError("M ≥ 16")
        return v

    @field_validator("dt")
    def validate_dt(cls, v):
        if v is not None and not v > 0:
            raise ValueError("dt > 0")
        return v

    @field_validator("tail_tol")
    def validate_tail_tol(cls, v):
        if not v > 0:
            raise ValueError("tail_tol > 0")
        return v


class OutputBlock(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    sample_times: Optional[Tuple[float, ...]] = None  # None resolves to 5 times over [0, T_FF]
    x_resolution: int = NUMERICS_DEFAULTS["x_resolution"]
    flux_times: int = NUMERICS_DEFAULTS["flux_times"]
    output_dir: Optional[str] = None

    @field_validator("x_resolution", "flux_times")
    def validate_counts(cls, v, info):
        if v < 2:
            raise ValueError(f"{info.field_name} ≥ 2")
        return v


class RunConfig(BaseModel):
    """Fully validated experiment configuration."""
    model_config = ConfigDict(frozen=True, extra="forbid", title="RunConfig")

    schedule: ScheduleConfig = Field(default_factory=ScheduleConfig)
    physics: PhysicsBlock = Field(default_factory=PhysicsBlock)
    profile: ProfileBlock = Field(default_factory=ProfileBlock)
    numerics: NumericsBlock = Field(default_factory=NumericsBlock)
    output: OutputBlock = Field(default_factory=OutputBlock)
    mode: RunMode = RunMode.BOTH
    solver: SolverChoice = SolverChoice.BOTH

    @model_validator(mode="after")
    def validate_cross_block(self):
        """Re-check the module invariants that span several blocks."""
        L0 = self.schedule.L0
        T_FF = self.schedule.T_FF
        if self.profile.x0 is not None and not 0 < self.profile.x0 < L0:
            raise ValueError(f"profile.x0 must lie in (0, L0={L0})")
        if self.numerics.quad_points < 10 * self.numerics.n_max:
            raise ValueError("numerics.quad_points ≥ 10·n_max")
        if self.numerics.dt is not None and self.numerics.dt > T_FF:
            raise ValueError(f"numerics.dt must not exceed T_FF={T_FF}")
        if self.output.sample_times is not None:
            if not self.output.sample_times:
                raise ValueError("output.sample_times must not be empty")
            for t in self.output.sample_times:
                if not 0 <= t <= T_FF:
                    raise ValueError(f"output.sample_times must lie in [0, T_FF={T_FF}]")
        return self

    def resolved(self) -> "RunConfig":
        """Return a copy with every derived default written out explicitly."""
        T_FF = self.schedule.T_FF
        profile = self.profile
        if profile.x0 is None:
            profile = profile.model_copy(update={"x0": self.schedule.L0 / 2.0})
        numerics = self.numerics
        if numerics.dt is None:
            numerics = numerics.model_copy(update={"dt": T_FF / NUMERICS_DEFAULTS["steps_per_T_FF"]})
        output = self.output
        if output.sample_times is None:
            times = tuple(float(t) for t in np.linspace(0.0, T_FF, 5))
            output = output.model_copy(update={"sample_times": times})
        return self.model_copy(update={"profile": profile, "numerics": numerics, "output": output})

    @property
    def modes(self) -> Tuple[Clock, ...]:
        if self.mode is RunMode.BOTH:
            return (Clock.STANDARD, Clock.FAST_FORWARD)
        return (Clock(self.mode.value),)

    @property
    def solvers(self) -> Tuple[str, ...]:
        if self.solver is SolverChoice.BOTH:
            return ("series", "grid")
        return (self.solver.value,)

    def to_flat_dict(self) -> Dict[str, str]:
        """Flatten into dotted key=value strings in declaration order."""
        flat: Dict[str, str] = {}
        for block_name in ("schedule", "physics", "profile", "numerics", "output"):
            block = getattr(self, block_name)
            for name in type(block).model_fields:
                flat[f"{block_name}.{name}"] = _format_value(getattr(block, name))
        flat["mode"] = self.mode.value
        flat["solver"] = self.solver.value
        return flat


def _format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(_format_value(v) for v in value)
    return str(value)
