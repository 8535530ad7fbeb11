"""Case configuration schema and loading."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Annotated, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, ValidationError, model_validator

from .errors import ConfigError
from .geometry import Mode
from .rational import RationalMap

CHECKS = ("geometry", "vortex", "flatness", "winding", "lift", "dirac")


def _parse_complex(v):
    if isinstance(v, complex):
        return v
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, str):
        return complex(v.replace(" ", "").replace("i", "j"))
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"cannot read {v!r} as a complex coefficient")


Coefficient = Annotated[
    complex,
    BeforeValidator(_parse_complex),
    PlainSerializer(lambda c: [c.real, c.imag], return_type=list),
]


class GridConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["disk", "two_chart_sphere"] = "disk"
    resolution: int = Field(64, ge=2, le=1024)
    # None selects 0.9 (hyperbolic source) or 3, divided by sqrt(n) when normalised
    radius: Optional[float] = Field(None, gt=0)
    # base resolution and fibre angles for the group sweeps
    lift_resolution: int = Field(12, ge=2, le=256)
    fibre_angles: int = Field(4, ge=1, le=64)


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    analytic: float = Field(1e-9, gt=0)
    decomposition: float = Field(1e-10, gt=0)
    fibre_fd: float = Field(1e-7, gt=0)
    quadrature: float = Field(1e-3, gt=0)


class CaseConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "case"
    C0: int
    C2n: int
    n: float = Field(gt=0)
    mode: Mode = Mode.FIXED
    f1_coeffs: list[Coefficient] = Field(min_length=1)
    f2_coeffs: list[Coefficient] = Field(min_length=1)
    grid: GridConfig = GridConfig()
    exclusion_radius: float = Field(1e-2, gt=0)
    tolerances: Tolerances = Tolerances()
    checks: list[Literal["geometry", "vortex", "flatness", "winding", "lift", "dirac"]] = list(CHECKS)

    @model_validator(mode="after")
    def _consistent(self) -> CaseConfig:
        for c in (self.C0, self.C2n):
            if c not in (-1, 0, 1):
                raise ValueError(f"curvature constants must be -1, 0 or 1, got {c}")
        if self.C0 > self.C2n:
            raise ValueError(f"inadmissible pair C0={self.C0} > C2n={self.C2n}")
        if "dirac" in self.checks and self.C0 == 0:
            raise ValueError("the dirac check needs C0 = +-1")
        if self.grid.kind == "two_chart_sphere" and self.C0 != 1:
            raise ValueError("two_chart_sphere grids need a spherical source (C0 = 1)")
        if len(set(self.checks)) != len(self.checks):
            raise ValueError("duplicate entries in checks")
        return self

    def rational_map(self) -> RationalMap:
        return RationalMap.from_coeffs(self.f1_coeffs, self.f2_coeffs)

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def parse_config(data: dict) -> CaseConfig:
    try:
        cfg = CaseConfig.model_validate(data)
        cfg.rational_map()
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    except ValueError as exc:
        raise ConfigError(f"invalid rational map: {exc}") from exc
    return cfg


def load_config(path: str | Path) -> CaseConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)
