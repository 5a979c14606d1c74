"""Job configuration for the command-line frontend.

Configs are YAML documents validated against the models below; unknown keys
are rejected.
"""
from __future__ import annotations

import hashlib
from pathlib import Path
from typing import List, Literal, Optional, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, ValidationError, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FunctionSpec(_Strict):
    kind: Literal["random", "legendre", "coeffs", "constant", "cap"] = "random"
    degree: int = Field(2, ge=0)
    coeffs: Optional[List[float]] = None
    value: float = 1.0
    width: PositiveFloat = 0.3
    seed: Optional[int] = None
    decay: float = 1.0

    @model_validator(mode="after")
    def _coeffs_present(self):
        if self.kind == "coeffs" and not self.coeffs:
            raise ValueError("function.coeffs required when kind is 'coeffs'")
        return self


class CoefficientSpec(_Strict):
    a0: float = Field(1.0, ge=0)
    a1: float = Field(0.0, ge=0)
    m0: float = 1.0
    m1: float = 0.0
    killing: float = Field(0.0, ge=0)
    drift: Optional[Tuple[float, float]] = None
    diffusion_matrix: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None

    @model_validator(mode="after")
    def _multiplier_nonnegative(self):
        if self.m0 < abs(self.m1):
            raise ValueError("coefficients.m0 must be at least |m1| so that m(s) >= 0")
        return self


class MeasureSpec(_Strict):
    atoms: List[Tuple[float, float]] = []
    density_scale: float = Field(0.0, ge=0)
    density_alpha: Optional[float] = None


class SymbolSpec(_Strict):
    L: int = Field(64, ge=0)
    n_colatitudes: int = Field(17, ge=1)
    growth_window: Optional[Tuple[int, int]] = None


class SimulationSpec(_Strict):
    t: List[PositiveFloat] = [0.1, 1.0]
    dt: PositiveFloat = 1e-3
    paths: int = Field(100_000, ge=1)
    l_max: int = Field(5, ge=1)
    min_fraction: float = Field(0.9, ge=0, le=1)


class VerifySpec(_Strict):
    checks: List[Literal["pmp", "invariance", "bounds", "zeta"]] = ["pmp", "invariance", "bounds", "zeta"]
    pmp_trials: int = Field(100, ge=1)
    invariance_samples: int = Field(200, ge=1)
    zeta_s: float = 1.0
    zeta_cutoff: int = Field(1_000_000, ge=1)


class Tolerances(_Strict):
    round_trip: PositiveFloat = 1e-10
    apply: PositiveFloat = 1e-6
    pmp: PositiveFloat = 1e-6
    invariance: PositiveFloat = 1e-8
    growth_slope: PositiveFloat = 0.05
    zeta: PositiveFloat = 1e-6
    z_max: PositiveFloat = 3.0


class JobConfig(_Strict):
    band_limit: int = Field(32, ge=0)
    colatitudes: Optional[List[float]] = None
    seed: int = 0
    out: str = "out"
    function: FunctionSpec = FunctionSpec()
    coefficients: CoefficientSpec = CoefficientSpec()
    measure: MeasureSpec = MeasureSpec()
    symbol: SymbolSpec = SymbolSpec()
    simulation: SimulationSpec = SimulationSpec()
    verify: VerifySpec = VerifySpec()
    tolerances: Tolerances = Tolerances()

    def evaluation_points(self) -> np.ndarray:
        if self.colatitudes is not None:
            return np.asarray(self.colatitudes, dtype=float)
        return np.linspace(0.1, np.pi - 0.1, 9)


class ConfigError(Exception):
    pass


def _describe(err: ValidationError) -> str:
    parts = []
    for e in err.errors():
        key = ".".join(str(p) for p in e["loc"]) or "<root>"
        parts.append(f"{key}: {e['msg']}")
    return "; ".join(parts)


def load_config(path) -> tuple[JobConfig, str]:
    """Parse and validate a YAML job file; return the config and its SHA-256."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(raw) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping at the top level")
    try:
        cfg = JobConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_describe(exc)) from exc
    return cfg, hashlib.sha256(raw).hexdigest()
