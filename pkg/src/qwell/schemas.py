"""Request and response models shared by the CLI, the pipelines, and the
HTTP service.

RunConfig is the single source of truth for a run: every JSON result embeds
the fully resolved copy, so any output file can be replayed byte for byte
(minus the timestamp) by feeding the echoed config back in.
"""

from __future__ import annotations

import math
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import grid as _grid
from .errors import ConfigurationError
from .evolution import EvolutionParams

STATE_CHOICES = ("ground", "excited", "exact-ground", "exact-excited", "custom")

_STATE_KIND_MAP = {
    "ground": "trial_ground",
    "excited": "trial_excited",
    "exact-ground": "exact_ground",
    "exact-excited": "exact_excited",
}


class RunConfig(BaseModel):
    """Fully resolved simulation parameters; defaults match the reference
    spectroscopy run (4+4 qubits, box half-width 1/2, well 100 deep)."""

    model_config = ConfigDict(extra="forbid")

    n_sim: int = Field(default=4, ge=1, le=20)
    n_work: int = Field(default=4, ge=1, le=20)
    d: float = 0.5
    a: float = 0.25
    v0: float = 100.0
    t: float = 0.06
    steps: int = Field(default=50, ge=1)
    dt: Optional[float] = None
    state: Literal[
        "ground", "excited", "exact-ground", "exact-excited", "custom"
    ] = "ground"
    state_table: Optional[list[list[float]]] = None
    shots: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    repetitions: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_times(self) -> "RunConfig":
        if self.t <= 0 or not math.isfinite(self.t):
            raise ValueError(f"total time must be positive, got {self.t}")
        if self.dt is None:
            object.__setattr__(self, "dt", self.t / self.steps)
        elif abs(self.t - self.steps * self.dt) > 1e-12:
            raise ValueError(
                f"t = {self.t} does not equal steps * dt = {self.steps * self.dt}"
            )
        if self.state == "custom" and self.state_table is None:
            raise ValueError("state 'custom' needs state_table rows [re, im]")
        if self.state != "custom" and self.state_table is not None:
            raise ValueError("state_table is only meaningful with state 'custom'")
        return self

    def grid_spec(self) -> _grid.GridSpec:
        return _grid.make_grid(self.n_sim, self.d)

    def well_spec(self) -> _grid.WellSpec:
        return _grid.WellSpec(self.v0, self.a)

    def evolution_params(self) -> EvolutionParams:
        return EvolutionParams(self.grid_spec(), self.well_spec(), self.dt, self.steps)

    def initial_amplitudes(self) -> np.ndarray:
        g = self.grid_spec()
        if self.state == "custom":
            table = np.asarray(
                [complex(row[0], row[1]) for row in self.state_table],
                dtype=np.complex128,
            )
            spec = _grid.WaveFunctionSpec("custom", table)
            return _grid.prepare_amplitudes(spec, g)
        spec = _grid.WaveFunctionSpec(_STATE_KIND_MAP[self.state])
        return _grid.prepare_amplitudes(spec, g, self.well_spec())


class EigenpairReport(BaseModel):
    index: int
    parity: str
    energy: float
    q: float
    alpha: float


class SolveExactResult(BaseModel):
    config: RunConfig
    generated_at: str
    bound_states: list[EigenpairReport]


class BinRow(BaseModel):
    bin: int
    theta: float
    energy: float
    probability: float


class QpeResult(BaseModel):
    config: RunConfig
    generated_at: str
    theta: float
    energy: float
    argmax_bin: int
    distribution: list[BinRow]


class IpeResult(BaseModel):
    config: RunConfig
    generated_at: str
    cos_est: float
    sin_est: float
    theta: float
    energy: float
    effective_time: float


class DumpResult(BaseModel):
    config: RunConfig
    generated_at: str
    gate_count: int
    circuit_text: str
    verified: Optional[bool] = None
    verification_gap: Optional[float] = None


class CompareOracleResult(BaseModel):
    """Circuit-vs-dense-propagator error report.

    Step errors compare one assembled step against the dense
    ``exp(-iH dt)``; total errors compare the m-step product against
    ``exp(-iH t)``.  Both are per reference eigenvector, in radians.
    """

    config: RunConfig
    generated_at: str
    step_eigenphase_errors: list[float]
    max_step_eigenphase_error: float
    total_eigenphase_errors: list[float]
    max_total_eigenphase_error: float
    operator_norm_error: float
    qpe_linf_gap: float


class HealthReport(BaseModel):
    status: str
    package: str
    version: str


def config_from_mapping(pairs: dict[str, str]) -> dict[str, object]:
    """Coerce flat key=value strings (config file or query params) to the
    typed fields RunConfig expects.  Unknown keys raise immediately so a
    typo cannot silently fall back to a default."""
    parsed: dict[str, object] = {}
    fields = RunConfig.model_fields
    for raw_key, raw in pairs.items():
        key = raw_key.strip().replace("-", "_")
        if key not in fields:
            raise ConfigurationError(f"unknown config key {raw_key!r}")
        if key in ("state",):
            parsed[key] = raw.strip()
        elif key in ("n_sim", "n_work", "steps", "seed", "shots", "repetitions"):
            if key == "shots" and raw.strip() == "exact":
                parsed[key] = None
            else:
                parsed[key] = int(raw)
        elif key == "state_table":
            raise ConfigurationError("state_table cannot be set from a config file")
        else:
            parsed[key] = float(raw)
    return parsed
