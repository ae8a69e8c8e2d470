"""Type definitions for evaluations, walk outcomes and estimates."""
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .environment import PotentialWindow


class DensityEval(BaseModel):
    """Type definition for one evaluation of the limit density."""

    model_config = ConfigDict(frozen=True)

    x: float
    value: float
    terms_used: int
    error_bound: float


class CapExceeded(BaseModel):
    """Type definition for a censored hitting time."""

    model_config = ConfigDict(frozen=True)

    cap: int
    position: int


class WalkResult(BaseModel):
    """Type definition for one simulated trajectory."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    endpoint: int
    window: PotentialWindow
    first_hits: dict[int, int] = {}
    path: Optional[np.ndarray] = None


class CouplingRecord(BaseModel):
    """Type definition for one realization of the coupling of S and its reflected copy."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tau_meet: Optional[int]
    tau_exit: Optional[int]
    S_endpoint: int
    Shat_endpoint: int
    horizon: int
    start: int
    Shat_start: int
    M_minus: int
    M_plus: int
    S_path: Optional[np.ndarray] = None
    Shat_path: Optional[np.ndarray] = None


class ConditionedPath(BaseModel):
    """Type definition for a potential path accepted by rejection sampling."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    path: np.ndarray
    attempts: int

    @property
    def hitting_length(self) -> int:
        return int(self.path.size - 1)


class EstimateResult(BaseModel):
    """Type definition for a Monte Carlo point estimate."""

    model_config = ConfigDict(frozen=True)

    name: str
    estimate: float
    stderr: float
    N: int
    seed: int
    params: dict[str, Any] = {}


class EventParams(BaseModel):
    """Type definition for the constants of the environment events."""

    model_config = ConfigDict(frozen=True)

    c1: float = 21.0
    c2: float = 10.0
    delta1: float = 0.5
    slope_radius: int = 10
    extrema_radius: int = 12
    strict: bool = True

    @model_validator(mode="after")
    def _check_ranges(self):
        if self.strict:
            if not (self.c1 > 20 and self.c2 > 9 and 0 < self.delta1 < 2 / 3):
                raise ValueError("strict event parameters need C1 > 20, C2 > 9 and 0 < delta1 < 2/3")
            if self.slope_radius != 10 or self.extrema_radius != 12:
                raise ValueError("strict event parameters use slope radius 10 and extrema radius 12")
        if self.c1 < 0 or self.c2 < 0 or not 0 < self.delta1 < 2 / 3:
            raise ValueError("event constants must be non-negative and delta1 in (0, 2/3)")
        if self.slope_radius < 1 or self.extrema_radius < 3:
            raise ValueError("slope radius must be >= 1 and extrema radius >= 3")
        return self

    @classmethod
    def desk(cls) -> "EventParams":
        """Relaxed constants that keep the events non-trivial for n up to about 2**20."""
        return cls(c1=0.5, c2=0.5, delta1=0.5, slope_radius=2, extrema_radius=3, strict=False)


class EventProfile(BaseModel):
    """Type definition for the environment events at time n around site z."""

    model_config = ConfigDict(frozen=True)

    n: int
    z: int
    params: EventParams
    h_n: float
    h_tilde: float
    gamma_n: int
    b: Optional[int]
    M_minus: Optional[int]
    M_plus: Optional[int]
    E_minus: bool
    E_plus: bool
    E3: bool
    E4: bool
    E5: bool
    E6: bool
    E7: bool
    E_C: bool


class EnvironmentSurvey(BaseModel):
    """Type definition for the z-independent part of the environment events at time n."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    params: EventParams
    h_n: float
    h_tilde: float
    gamma_n: int
    certified: bool
    window: PotentialWindow
    b: Optional[int] = None
    M_minus: Optional[int] = None
    M_plus: Optional[int] = None
    x0_value: Optional[float] = None
    x1_value: Optional[float] = None
    valley_max: Optional[float] = None
    E3: bool = False
    E5: bool = False
    E6: bool = False

    @property
    def E_minus(self) -> bool:
        return self.b is not None and self.b <= 0

    @property
    def E_plus(self) -> bool:
        return self.b is not None and self.b > 0
