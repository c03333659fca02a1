"""Position and momentum grids, potential sampling, state preparation.

The box [-d, d] is split into N = 2**n bins of width dx = 2d/N and each
bin is represented by its midpoint, x_k = -d + 2d (k + 1/2) / N.  The
midpoints are symmetric about the origin.  For the momentum register the
conjugate points are p_j = (pi/d) (j + 1/2 - N/2), also symmetric, with
cutoff q = 2 pi N / (4 d).

A wavefunction enters the register with amplitude
    amp_k = sign(psi(x_k)) * sqrt(P_k),
P_k the probability mass of bin k.  Carrying the midpoint sign keeps the
nodal structure of odd states instead of collapsing them onto their
absolute value; the vector is renormalized over the grid afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, InvalidStateError, NumericalError, ShapeError

MAX_GRID_QUBITS = 24


@dataclass(frozen=True)
class GridSpec:
    n_qubits: int
    half_width: float
    x_points: np.ndarray = field(repr=False)
    p_points: np.ndarray = field(repr=False)

    @property
    def n_points(self) -> int:
        return 1 << self.n_qubits

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def momentum_cutoff(self) -> float:
        return 2.0 * math.pi * self.n_points / (4.0 * self.half_width)


def make_grid(n_qubits: int, half_width: float) -> GridSpec:
    if not 1 <= n_qubits <= MAX_GRID_QUBITS:
        raise ConfigurationError(f"grid qubit count {n_qubits} outside [1, {MAX_GRID_QUBITS}]")
    if not (half_width > 0.0 and math.isfinite(half_width)):
        raise ConfigurationError(f"half width must be positive, got {half_width!r}")
    n = 1 << n_qubits
    k = np.arange(n)
    x = -half_width + 2.0 * half_width * (k + 0.5) / n
    p = (math.pi / half_width) * (k + 0.5 - n / 2.0)
    return GridSpec(n_qubits, half_width, x, p)


@dataclass(frozen=True)
class WellSpec:
    """Square well of depth v0 (v0 >= 0) and half-aperture a > 0."""

    v0: float
    a: float

    def __post_init__(self) -> None:
        if not (self.v0 >= 0.0 and math.isfinite(self.v0)):
            raise ConfigurationError(f"well depth must be non-negative, got {self.v0!r}")
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise ConfigurationError(f"well half-aperture must be positive, got {self.a!r}")


def potential_on_grid(grid: GridSpec, well: WellSpec) -> np.ndarray:
    """V(x_k): -v0 strictly inside |x| < a, zero outside.  Any a is allowed."""
    return np.where(np.abs(grid.x_points) < well.a, -well.v0, 0.0)


# ---------------------------------------------------------------------------
# Trial wavefunctions (unnormalized; preparation renormalizes anyway).


def trial_ground_psi(x: float) -> float:
    return math.exp(-10.0 * x * x)


def trial_excited_psi(x: float) -> float:
    return x * math.exp(-10.0 * x * x)


# ---------------------------------------------------------------------------
# Quadrature: adaptive Simpson with absolute tolerance per call.


def _simpson_slice(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 48,
) -> float:
    """Integrate f over [a, b] to absolute tolerance tol."""
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson_slice(f, a, fa, b, fb)
    return _adaptive_step(f, a, fa, m, fm, b, fb, whole, tol, max_depth)


def _adaptive_step(f, a, fa, m, fm, b, fb, whole, tol, depth):
    lm, flm, left = _simpson_slice(f, a, fa, m, fm)
    rm, frm, right = _simpson_slice(f, m, fm, b, fb)
    if abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    if depth <= 0:
        raise NumericalError(f"quadrature failed to reach tol={tol} on [{a}, {b}]")
    return _adaptive_step(
        f, a, fa, lm, flm, m, fm, left, tol / 2.0, depth - 1
    ) + _adaptive_step(f, m, fm, rm, frm, b, fb, right, tol / 2.0, depth - 1)


def bin_probability(psi: Callable[[float], float], grid: GridSpec, k: int) -> float:
    """Integral of |psi|^2 over the width-dx bin centered on x_k."""
    if not 0 <= k < grid.n_points:
        raise ShapeError(f"bin index {k} outside grid of {grid.n_points}")
    x = grid.x_points[k]
    half = 0.5 * grid.dx
    return adaptive_simpson(lambda t: psi(t) ** 2, x - half, x + half, tol=1e-10)


# ---------------------------------------------------------------------------
# State preparation.

STATE_KINDS = (
    "trial_ground",
    "trial_excited",
    "exact_ground",
    "exact_excited",
    "custom",
)


@dataclass(frozen=True)
class WaveFunctionSpec:
    """Which initial state to load; custom kinds carry an amplitude table."""

    kind: str
    table: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in STATE_KINDS:
            raise ConfigurationError(
                f"unknown state kind {self.kind!r}; expected one of {STATE_KINDS}"
            )
        if (self.kind == "custom") != (self.table is not None):
            raise ConfigurationError("a custom state needs a table and only then")


def amplitudes_from_callable(
    psi: Callable[[float], float], grid: GridSpec
) -> np.ndarray:
    """Bin-integrated, sign-carrying, unit-norm amplitude vector for real psi."""
    amps = np.empty(grid.n_points, dtype=np.complex128)
    for k in range(grid.n_points):
        mass = bin_probability(psi, grid, k)
        sign = 1.0 if psi(float(grid.x_points[k])) >= 0.0 else -1.0
        amps[k] = sign * math.sqrt(max(mass, 0.0))
    norm = np.linalg.norm(amps)
    if norm < 1e-15:
        raise InvalidStateError("wavefunction carries no probability mass on the grid")
    return amps / norm


def prepare_amplitudes(
    psi: WaveFunctionSpec, grid: GridSpec, well: WellSpec | None = None
) -> np.ndarray:
    """Resolve a state spec to a normalized amplitude vector on the grid.

    Exact eigenstate kinds need the well to solve; trial kinds do not.
    """
    if psi.kind == "custom":
        table = np.asarray(psi.table, dtype=np.complex128)
        if table.shape != (grid.n_points,):
            raise ShapeError(
                f"custom table has {table.shape}, expected ({grid.n_points},)"
            )
        norm = np.linalg.norm(table)
        if norm < 1e-15:
            raise InvalidStateError("custom amplitude table has zero norm")
        return table / norm
    if psi.kind == "trial_ground":
        return amplitudes_from_callable(trial_ground_psi, grid)
    if psi.kind == "trial_excited":
        return amplitudes_from_callable(trial_excited_psi, grid)
    # Exact eigenstates of the well itself.
    if well is None:
        raise ConfigurationError(f"state kind {psi.kind!r} needs a well")
    from . import oracle  # function-local: oracle imports this module at top level

    states = oracle.solve_well(well)
    wanted = 0 if psi.kind == "exact_ground" else 1
    if len(states) <= wanted:
        raise ConfigurationError(
            f"well supports only {len(states)} bound state(s); {psi.kind!r} unavailable"
        )
    return amplitudes_from_callable(oracle.eigenfunction(states[wanted]), grid)


def load_custom_table(text: str, grid: GridSpec) -> np.ndarray:
    """Parse a two-column state file: x_k then amplitude, one bin per row.

    The x column must reproduce the grid midpoints in order.  Amplitudes
    are floats, or complex in Python literal form (e.g. 0.1+0.2j).
    """
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if len(rows) != grid.n_points:
        raise ShapeError(f"state file has {len(rows)} rows, expected {grid.n_points}")
    amps = np.empty(grid.n_points, dtype=np.complex128)
    for k, row in enumerate(rows):
        if len(row) != 2:
            raise ShapeError(f"state file row {k} has {len(row)} columns, expected 2")
        try:
            x = float(row[0])
            amps[k] = complex(row[1])
        except ValueError as exc:
            raise InvalidStateError(f"state file row {k}: {exc}") from exc
        if abs(x - grid.x_points[k]) > 1e-9:
            raise InvalidStateError(
                f"state file row {k}: x = {x} does not match grid point {grid.x_points[k]}"
            )
    return amps
