"""Classical references the circuit pipeline is checked against.

Everything here is built from dense linear algebra and closed-form
analysis, never from the gate kernels' structure, so agreement between
the two routes is meaningful evidence.  (assemble_unitary is the bridge:
it turns a gate list into its dense matrix by column-wise application.)

Units: hbar = m = 1 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import evolution as _evolution
from .errors import ConfigurationError, ShapeError
from .grid import GridSpec, WellSpec
from .statevec import GateOp, StateVector, apply_gates

MAX_ASSEMBLY_QUBITS = 12


# ---------------------------------------------------------------------------
# Exact bound states of the finite square well V(x) = -v0 for |x| < a.


@dataclass(frozen=True)
class WellEigenpair:
    """One bound state, energy-ordered (index 0 is the ground state).

    The normalized eigenfunction is
        even:  inside_amp * cos(q x)        for |x| <= a,
               outside_amp * exp(-alpha |x|) outside,
        odd:   inside_amp * sin(q x)        for |x| <= a,
               sign(x) * outside_amp * exp(-alpha |x|) outside,
    with q = sqrt(2 (v0 - |E|)) and alpha = sqrt(2 |E|), so that
    q^2 + alpha^2 = 2 v0.
    """

    index: int
    parity: str
    energy: float
    q: float
    alpha: float
    a: float
    inside_amp: float
    outside_amp: float


def bound_state_count(v0: float, a: float) -> int:
    """Closed-form count of bound states for v0 > 0."""
    return 1 + math.floor(2.0 * a * math.sqrt(2.0 * v0) / math.pi)


def _even_condition(s: float, v0: float, a: float) -> float:
    # q tan(qa) = alpha, written pole-free as q sin(qa) - alpha cos(qa).
    q = math.sqrt(2.0 * (v0 - s))
    alpha = math.sqrt(2.0 * s)
    return q * math.sin(q * a) - alpha * math.cos(q * a)


def _odd_condition(s: float, v0: float, a: float) -> float:
    # q cot(qa) = -alpha, written pole-free as q cos(qa) + alpha sin(qa).
    q = math.sqrt(2.0 * (v0 - s))
    alpha = math.sqrt(2.0 * s)
    return q * math.cos(q * a) + alpha * math.sin(q * a)


def _bisect(f, lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (flo < 0.0) != (fmid < 0.0):
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _scan_roots(f, v0: float, points: int, tol: float) -> list[float]:
    s = [v0 * (i + 0.5) / points for i in range(points)]
    vals = [f(si) for si in s]
    roots = []
    for i in range(points - 1):
        if vals[i] == 0.0:
            roots.append(s[i])
        elif (vals[i] < 0.0) != (vals[i + 1] < 0.0):
            roots.append(_bisect(f, s[i], s[i + 1], tol))
    return roots


def solve_well(well: WellSpec, tol: float = 1e-10) -> list[WellEigenpair]:
    """All bound states, sorted ascending in energy (deepest binding first).

    A zero-depth well yields an empty list.
    """
    v0, a = well.v0, well.a
    if not (v0 >= 0.0 and math.isfinite(v0)):
        raise ConfigurationError(f"well depth must be non-negative, got {v0!r}")
    if not (a > 0.0 and math.isfinite(a)):
        raise ConfigurationError(f"well half-aperture must be positive, got {a!r}")
    if v0 == 0.0:
        return []
    found: list[tuple[float, str]] = []
    for parity, f in (("even", _even_condition), ("odd", _odd_condition)):
        for s in _scan_roots(lambda t, g=f: g(t, v0, a), v0, 10_000, tol):
            found.append((s, parity))
    # Deepest binding energy first: larger s means lower E = -s.
    found.sort(key=lambda item: -item[0])
    pairs = []
    for idx, (s, parity) in enumerate(found):
        q = math.sqrt(2.0 * (v0 - s))
        alpha = math.sqrt(2.0 * s)
        decay_mass = math.exp(-2.0 * alpha * a) / alpha
        if parity == "even":
            inside = math.cos(q * a)
            inside_mass = a + math.sin(2.0 * q * a) / (2.0 * q)
        else:
            inside = math.sin(q * a)
            inside_mass = a - math.sin(2.0 * q * a) / (2.0 * q)
        # Continuity at x = a with outside amplitude 1, then normalize.
        amp_in = math.exp(-alpha * a) / inside
        norm = math.sqrt(amp_in * amp_in * inside_mass + decay_mass)
        pairs.append(
            WellEigenpair(
                index=idx,
                parity=parity,
                energy=-s,
                q=q,
                alpha=alpha,
                a=a,
                inside_amp=amp_in / norm,
                outside_amp=1.0 / norm,
            )
        )
    return pairs


def eigenfunction(pair: WellEigenpair) -> Callable[[float], float]:
    """Normalized real eigenfunction as a plain callable."""
    if pair.parity == "even":

        def psi(x: float, p=pair) -> float:
            if abs(x) <= p.a:
                return p.inside_amp * math.cos(p.q * x)
            return p.outside_amp * math.exp(-p.alpha * abs(x))

    else:

        def psi(x: float, p=pair) -> float:
            if abs(x) <= p.a:
                return p.inside_amp * math.sin(p.q * x)
            s = 1.0 if x >= 0.0 else -1.0
            return s * p.outside_amp * math.exp(-p.alpha * abs(x))

    return psi


# ---------------------------------------------------------------------------
# Dense assembly and reference propagators.


def assemble_unitary(gates: Sequence[GateOp], n_qubits: int) -> np.ndarray:
    """Dense matrix of a gate list via column-by-column application."""
    if not 1 <= n_qubits <= MAX_ASSEMBLY_QUBITS:
        raise ConfigurationError(
            f"assembly supports 1..{MAX_ASSEMBLY_QUBITS} qubits, got {n_qubits}"
        )
    dim = 1 << n_qubits
    out = np.empty((dim, dim), dtype=np.complex128)
    for j in range(dim):
        basis = np.zeros(dim, dtype=np.complex128)
        basis[j] = 1.0
        out[:, j] = apply_gates(StateVector(n_qubits, basis), gates).amplitudes
    return out


def corrected_transform_matrix(grid: GridSpec) -> np.ndarray:
    """Exact matrix U[k, j] = exp(i p_j x_k) / sqrt(N), constant phase included."""
    phase = np.outer(grid.x_points, grid.p_points)
    return np.exp(1j * phase) / math.sqrt(grid.n_points)


def approximate_momenta(grid: GridSpec) -> np.ndarray:
    """Momenta with the half-step offset dropped, matching the gate diagonal."""
    n = grid.n_points
    j = np.arange(n)
    return (math.pi / grid.half_width) * (j - n / 2.0)


def hamiltonian_matrix(
    params: "_evolution.EvolutionParams", exact_momentum: bool = False
) -> np.ndarray:
    """Dense discretized Hamiltonian H' = U diag(p^2/2) U^dagger + diag(V)."""
    grid = params.grid
    u = corrected_transform_matrix(grid)
    p = grid.p_points if exact_momentum else approximate_momenta(grid)
    kin = (u * (0.5 * p * p)) @ u.conj().T
    ham = kin + np.diag(params.potential_values())
    return 0.5 * (ham + ham.conj().T)


def reference_propagator(
    params: "_evolution.EvolutionParams",
    total_time: float | None = None,
    exact_momentum: bool = False,
) -> np.ndarray:
    """exp(-i H' t) from the dense Hamiltonian's eigendecomposition."""
    if params.grid.n_qubits > 10:
        raise ConfigurationError("reference propagator supports up to 10 qubits")
    t = params.t if total_time is None else total_time
    ham = hamiltonian_matrix(params, exact_momentum=exact_momentum)
    w, q = np.linalg.eigh(ham)
    return (q * np.exp(-1j * w * t)) @ q.conj().T


def eigenphase_errors(
    params: "_evolution.EvolutionParams",
    circuit_unitary: np.ndarray,
    total_time: float | None = None,
) -> np.ndarray:
    """Circular gap between each reference eigenphase and the circuit's.

    Uses Rayleigh quotients through the reference eigenvectors, which
    stays well-defined when nearby eigenvalues would make bare
    eigenvalue matching ambiguous.
    """
    t = params.t if total_time is None else total_time
    ham = hamiltonian_matrix(params)
    w, q = np.linalg.eigh(ham)
    gaps = np.empty(w.shape[0])
    for i in range(w.shape[0]):
        v = q[:, i]
        rayleigh = np.vdot(v, circuit_unitary @ v)
        gaps[i] = abs(np.angle(rayleigh * np.exp(1j * w[i] * t)))
    return gaps


def unitary_eigensystem(u: np.ndarray, cluster_tol: float = 1e-8):
    """Eigenphases and an orthonormal eigenbasis of a unitary matrix.

    numpy's general eigensolver can return skewed bases inside (near-)
    degenerate eigenspaces; re-orthonormalizing per cluster fixes that.
    """
    vals, vecs = np.linalg.eig(u)
    order = np.argsort(np.angle(vals))
    vals, vecs = vals[order], vecs[:, order]
    i = 0
    n = vals.shape[0]
    while i < n:
        j = i + 1
        while j < n and abs(vals[j] - vals[j - 1]) < cluster_tol:
            j += 1
        if j - i > 1:
            qmat, _ = np.linalg.qr(vecs[:, i:j])
            vecs[:, i:j] = qmat
        else:
            vecs[:, i] /= np.linalg.norm(vecs[:, i])
        i = j
    return np.angle(vals), vecs


def _kernel_histogram(thetas: np.ndarray, weights: np.ndarray, n_work: int) -> np.ndarray:
    m = 1 << n_work
    k = np.arange(m)
    dist = np.zeros(m)
    for wgt, theta in zip(weights, thetas):
        if wgt < 1e-300:
            continue
        seq = np.exp(2j * math.pi * theta * k)
        dist += wgt * np.abs(np.fft.fft(seq)) ** 2 / (m * m)
    return dist


def predict_qpe_distribution_from_unitary(
    u: np.ndarray, n_work: int, initial_amps: np.ndarray
) -> np.ndarray:
    """Analytic phase-estimation histogram for one application of `u`.

    Each eigenphase theta of `u` contributes kernel weights
    |sum_k exp(2 pi i k (theta - x / M))|^2 / M^2 scaled by the squared
    overlap of the initial state with its eigenvector.
    """
    if n_work > 8:
        raise ConfigurationError("prediction supports at most 8 work qubits")
    amps = np.asarray(initial_amps, dtype=np.complex128)
    if amps.shape != (u.shape[0],):
        raise ShapeError(f"initial state has shape {amps.shape}, expected ({u.shape[0]},)")
    phases, vecs = unitary_eigensystem(u)
    weights = np.abs(vecs.conj().T @ amps) ** 2
    thetas = (phases / (2.0 * math.pi)) % 1.0
    return _kernel_histogram(thetas, weights, n_work)


def predict_qpe_distribution(
    params: "_evolution.EvolutionParams",
    n_work: int,
    initial_amps: np.ndarray,
) -> np.ndarray:
    """Histogram prediction for the full Trotterized evolution.

    Decomposes the initial state over eigenvectors of the assembled step
    unitary; the per-step eigenphases are scaled by the step count rather
    than taking a matrix power.
    """
    n = params.grid.n_qubits
    if n > 8 or n_work > 8:
        raise ConfigurationError("prediction supports at most 8 qubits per register")
    amps = np.asarray(initial_amps, dtype=np.complex128)
    if amps.shape != (1 << n,):
        raise ShapeError(f"initial state has shape {amps.shape}, expected ({1 << n},)")
    step = assemble_unitary(_evolution.trotter_step_gates(params), n)
    phases, vecs = unitary_eigensystem(step)
    weights = np.abs(vecs.conj().T @ amps) ** 2
    thetas = (params.steps * phases / (2.0 * math.pi)) % 1.0
    return _kernel_histogram(thetas, weights, n_work)
