"""Fourier-transform gate builders, plain and boundary-corrected.

Bit ordering follows the register convention: bit m of a transform index
lives on the plan's m-th wire.  The circuits are swap-free, which makes
the raw forward circuit compute the transform with its OUTPUT index
bit-reversed; no permutation gates are emitted.  Instead:

* ``qft_gates``/``qft_inverse_gates`` document the relabeling and
  ``bit_reversal_permutation`` exposes it, so standalone assembly can
  undo it by indexing.
* ``udft_gates``/``udft_inverse_gates`` (the corrected transform used by
  the evolution builders) are emitted as a matched pair: the forward
  block assembles to (corrected transform) o (bit reversal) and the
  inverse block to (bit reversal) o (corrected transform)^dagger, so a
  diagonal section sandwiched between them sees the exact transform and
  the reversals cancel gate-for-gate.

The corrected transform is the plain one conjugated by per-qubit
boundary phases exp(-i 2 pi k (1/2 - 1/(2N))); a residual constant
global phase is dropped from the gate list because it always cancels
against the inverse block.  ``constant_phase_correction`` reports the
dropped value (in turns) for diagnostic use.  Only half-width d = 1/2 is
supported: other widths change the boundary phases in a way this
decomposition does not cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, UnsupportedParameterError
from .statevec import GateOp, cu1, h, u1


@dataclass(frozen=True)
class QftPlan:
    """Ordered wire list; qubits[m] carries bit m of the transform input."""

    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.qubits) == 0:
            raise ShapeError("QftPlan needs at least one qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise ShapeError(f"repeated qubit in plan {self.qubits!r}")

    @property
    def n(self) -> int:
        return len(self.qubits)

    def reversed(self) -> "QftPlan":
        return QftPlan(tuple(reversed(self.qubits)))


def plan_over(n: int) -> QftPlan:
    """Standard plan on wires 0..n-1."""
    return QftPlan(tuple(range(n)))


def bit_reversal_permutation(n: int) -> np.ndarray:
    """perm[j] = j with its n-bit binary representation reversed."""
    perm = np.zeros(1 << n, dtype=np.int64)
    for j in range(1 << n):
        r = 0
        for b in range(n):
            r |= ((j >> b) & 1) << (n - 1 - b)
        perm[j] = r
    return perm


def qft_gates(plan: QftPlan) -> list[GateOp]:
    """Swap-free forward transform: n Hadamards, n(n-1)/2 controlled phases.

    Reading input bit m from plan.qubits[m], the output index appears with
    bit m on plan.qubits[n-1-m].  Equivalently the assembled matrix equals
    P R, where R[k, j] = exp(i 2 pi j k / N) / sqrt(N) and P is the
    bit-reversal permutation of the wires.
    """
    ws = plan.qubits
    gates: list[GateOp] = []
    for i in reversed(range(len(ws))):
        gates.append(h(ws[i]))
        for l in reversed(range(i)):
            gates.append(cu1(math.pi / (1 << (i - l)), ws[l], ws[i]))
    return gates


def qft_inverse_gates(plan: QftPlan) -> list[GateOp]:
    """Exact inverse of qft_gates on the same plan (reversed, conjugated)."""
    ws = plan.qubits
    gates: list[GateOp] = []
    for i in range(len(ws)):
        for l in range(i):
            gates.append(cu1(-math.pi / (1 << (i - l)), ws[l], ws[i]))
        gates.append(h(ws[i]))
    return gates


def boundary_phase(n: int) -> float:
    """Per-unit boundary correction angle: -2 pi (1/2 - 1/(2N))."""
    big_n = 1 << n
    return -2.0 * math.pi * (0.5 - 0.5 / big_n)


def _correction_layer(plan: QftPlan, sign: float) -> list[GateOp]:
    base = boundary_phase(plan.n)
    return [u1(sign * base * (1 << m), plan.qubits[m]) for m in range(plan.n)]


def _require_half_unit(half_width: float) -> None:
    if abs(half_width - 0.5) > 1e-12:
        raise UnsupportedParameterError(
            "corrected transform is only derived for half-width d = 1/2; "
            f"got d = {half_width!r} (boundary phases would need re-derivation)"
        )


def udft_gates(plan: QftPlan, half_width: float = 0.5) -> list[GateOp]:
    """Corrected-transform block: assembles to (transform) o (bit reversal).

    Sandwich partner of udft_inverse_gates; see the module docstring for
    the relabeling contract.
    """
    _require_half_unit(half_width)
    rev = plan.reversed()
    return _correction_layer(rev, 1.0) + qft_gates(rev) + _correction_layer(plan, 1.0)


def udft_inverse_gates(plan: QftPlan, half_width: float = 0.5) -> list[GateOp]:
    """Exact gate-wise inverse of udft_gates: (bit reversal) o (transform)^dagger."""
    _require_half_unit(half_width)
    rev = plan.reversed()
    return (
        _correction_layer(plan, -1.0)
        + qft_inverse_gates(rev)
        + _correction_layer(rev, -1.0)
    )


def constant_phase_correction(n: int, half_width: float = 0.5) -> float:
    """Constant global phase (in turns) dropped from the corrected transform.

    The full transform matrix carries exp(i 2 pi C) relative to the gate
    blocks emitted here; it cancels whenever forward and inverse blocks are
    used in pairs, which is the only way the evolution builders use them.
    """
    big_n = 1 << n
    d = half_width
    return (big_n * d / 2.0 - d / 2.0 - 0.25 + 1.0 / (4.0 * big_n)) / (2.0 * d)
