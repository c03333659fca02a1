"""Phase estimation readouts for the evolution circuit.

Two flavors.  qpe attaches a work register, runs the controlled evolution
2^j times against work qubit j, applies an inverse Fourier readout and
returns the full bin distribution.  ipe uses a single work qubit and two
interferometer circuits (one reading the cosine of the phase, one with an
extra S gate reading the sine) and reconstructs the phase with atan2,
which keeps the full circle rather than a half-period.

Phases are reported as theta in [0, 1) with the circuit eigenvalue
exp(2 pi i theta), so an energy E maps to theta = (-E t / 2 pi) mod 1 and
every estimate lands in the principal window (-2 pi / t, 0].  Energies
outside that window alias into it; alias_energy applies the same fold to
a known energy for comparison against estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import qft
from .errors import ConfigurationError, IndeterminatePhaseError
from .evolution import EvolutionParams, controlled_evolution_gates
from .statevec import (
    MAX_QUBITS,
    GateOp,
    StateVector,
    apply_gates,
    cu1,
    h,
    new_zero_state,
    probabilities,
    s,
    sample,
    set_amplitudes,
    x,
)

# A callable producing the gates for U^(repetitions) conditioned on one
# work qubit.  The default wires in controlled_evolution_gates; tests can
# substitute synthetic providers with exactly grid-aligned phases.
ControlledBlock = Callable[[int, int], "list[GateOp]"]


@dataclass(frozen=True)
class PhaseEstimate:
    """A phase readout and the energy it decodes to.

    distribution is present for the work-register flavor only; cos_est
    and sin_est for the interferometer flavor only.
    """

    theta: float
    energy: float
    distribution: np.ndarray | None = None
    cos_est: float | None = None
    sin_est: float | None = None


def energy_from_theta(theta: float, total_time: float) -> float:
    """Decode exp(-i E t) = exp(2 pi i theta) into the principal window."""
    if total_time <= 0.0:
        raise ConfigurationError(f"total time must be positive, got {total_time}")
    return -2.0 * math.pi * (theta % 1.0) / total_time


def alias_energy(energy: float, total_time: float) -> float:
    """Fold an arbitrary energy into the (-2 pi / t, 0] window estimates use."""
    theta = (-energy * total_time / (2.0 * math.pi)) % 1.0
    return energy_from_theta(theta, total_time)


def _decoded_energy(theta: float, total_time: float) -> float:
    # Zero-time evolution has no energy scale; only theta = 0 decodes.
    if total_time > 0.0:
        return energy_from_theta(theta, total_time)
    return 0.0 if theta == 0.0 else math.nan


def _embedded_state(
    initial_amps: Sequence[complex], n_sim: int, n_work: int
) -> StateVector:
    amps = np.asarray(initial_amps, dtype=np.complex128)
    if amps.shape != (1 << n_sim,):
        raise ConfigurationError(
            f"initial state needs {1 << n_sim} amplitudes, got {amps.shape}"
        )
    full = np.zeros(1 << (n_sim + n_work), dtype=np.complex128)
    full[: 1 << n_sim] = amps
    return set_amplitudes(new_zero_state(n_sim + n_work), full)


def _qpe_distribution(
    initial_amps: Sequence[complex],
    n_sim: int,
    n_work: int,
    block: ControlledBlock,
) -> np.ndarray:
    """Exact work-register distribution, in natural bin order."""
    state = _embedded_state(initial_amps, n_sim, n_work)
    gates: list[GateOp] = [h(n_sim + j) for j in range(n_work)]
    for j in range(n_work):
        gates.extend(block(n_sim + j, 1 << j))
    # The swap-free inverse transform on reversed work wires assembles to
    # (bit reversal) o (inverse DFT); undo the reversal on the marginal.
    work_plan = qft.QftPlan(tuple(reversed(range(n_sim, n_sim + n_work))))
    gates.extend(qft.qft_inverse_gates(work_plan))
    state = apply_gates(state, gates)
    raw = probabilities(state, tuple(range(n_sim, n_sim + n_work)))
    return raw[qft.bit_reversal_permutation(n_work)]


def qpe(
    params: EvolutionParams,
    n_work: int,
    initial_amps: Sequence[complex],
    shots: int | None = None,
    seed: int | None = None,
    controlled_block: ControlledBlock | None = None,
) -> PhaseEstimate:
    """Work-register phase estimation of the full evolution circuit.

    With shots=None the attached distribution is the exact one; otherwise
    it holds sampled frequencies and theta follows the sampled argmax.
    Exact ties go to the lowest bin.
    """
    n_sim = params.grid.n_qubits
    if n_work < 1:
        raise ConfigurationError(f"need at least one work qubit, got {n_work}")
    if n_sim + n_work > MAX_QUBITS:
        raise ConfigurationError(
            f"register of {n_sim}+{n_work} qubits exceeds the kernel bound {MAX_QUBITS}"
        )
    if controlled_block is None:
        def controlled_block(work, reps):
            return controlled_evolution_gates(params, work, reps)
    dist = _qpe_distribution(initial_amps, n_sim, n_work, controlled_block)
    if shots is not None:
        counts = np.random.default_rng(seed).multinomial(shots, dist / dist.sum())
        dist = counts / shots
    theta = int(np.argmax(dist)) / (1 << n_work)
    return PhaseEstimate(theta, _decoded_energy(theta, params.t), distribution=dist)


def _interferometer_p0(
    initial_amps: Sequence[complex],
    n_sim: int,
    block: ControlledBlock,
    repetitions: int,
    quarter_turn: bool,
    shots: int | None,
    seed: int | None,
) -> float:
    work = n_sim
    state = _embedded_state(initial_amps, n_sim, 1)
    gates: list[GateOp] = [h(work)]
    gates.extend(block(work, repetitions))
    if quarter_turn:
        gates.append(s(work))
    gates.append(h(work))
    state = apply_gates(state, gates)
    if shots is None:
        return float(probabilities(state, (work,))[0])
    counts = sample(state, (work,), shots, seed)
    return counts[0] / shots


def _ipe_estimate(
    initial_amps: Sequence[complex],
    n_sim: int,
    block: ControlledBlock,
    repetitions: int,
    effective_time: float,
    shots: int | None,
    seed: int | None,
) -> PhaseEstimate:
    half = None if shots is None else max(shots // 2, 1)
    seed_b = None if seed is None else seed + 1
    p0_cos = _interferometer_p0(
        initial_amps, n_sim, block, repetitions, False, half, seed
    )
    p0_sin = _interferometer_p0(
        initial_amps, n_sim, block, repetitions, True, half, seed_b
    )
    cos_est = 2.0 * p0_cos - 1.0
    sin_est = 1.0 - 2.0 * p0_sin
    if math.hypot(cos_est, sin_est) < 1e-12:
        raise IndeterminatePhaseError(
            "both interferometer contrasts vanished; the phase is undetermined"
        )
    theta = (math.atan2(sin_est, cos_est) / (2.0 * math.pi)) % 1.0
    return PhaseEstimate(
        theta, _decoded_energy(theta, effective_time), cos_est=cos_est, sin_est=sin_est
    )


def ipe(
    params: EvolutionParams,
    initial_amps: Sequence[complex],
    shots: int | None = None,
    seed: int | None = None,
    repetitions: int = 1,
    controlled_block: ControlledBlock | None = None,
) -> PhaseEstimate:
    """Single-work-qubit phase readout of U(t)^repetitions.

    Meaningful when the input is a (near-)eigenstate; a genuine
    superposition mixes incompatible phases into one atan2 readout.
    repetitions > 1 stretches the effective time to repetitions * t and
    shrinks the principal energy window by the same factor.  Shots, when
    given, are split between the two interferometer circuits.
    """
    if repetitions < 1:
        raise ConfigurationError(f"repetitions must be >= 1, got {repetitions}")
    if controlled_block is None:
        def controlled_block(work, reps):
            return controlled_evolution_gates(params, work, reps)
    return _ipe_estimate(
        initial_amps,
        params.grid.n_qubits,
        controlled_block,
        repetitions,
        repetitions * params.t,
        shots,
        seed,
    )


def ipe_single_qubit(
    theta_in: float,
    shots: int | None = None,
    seed: int | None = None,
    total_time: float = 1.0,
) -> PhaseEstimate:
    """Round-trip check: read back a known phase from a one-qubit target.

    The target sits in the +1-bit state and the controlled unitary is a
    bare controlled phase of 2 pi theta_in, so with exact probabilities
    the readout returns theta_in itself.  total_time only scales the
    reported energy (a unit time reports E = -2 pi theta).
    """
    if not math.isfinite(theta_in):
        raise ConfigurationError(f"theta must be finite, got {theta_in!r}")

    def block(work: int, reps: int) -> list[GateOp]:
        return [cu1(2.0 * math.pi * theta_in * reps, work, 0)]

    prep = apply_gates(new_zero_state(1), [x(0)])
    return _ipe_estimate(prep.amplitudes, 1, block, 1, total_time, shots, seed)
