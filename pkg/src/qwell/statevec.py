"""Dense state-vector simulator for a small gate set.

A register of n qubits is a vector of 2**n complex amplitudes.  Qubit 0 is
the least significant bit of the basis index, so basis state |j> has
j = sum_m j_m 2**m with j_m the value of qubit m.  Writing a ket left to
right, the left-most position is the most significant qubit.

The gate set is deliberately small: Hadamard, X, S, single/double/triple
diagonal phase gates, and a register-wide constant phase.  The constant
phase is tracked rather than dropped so that controlled versions of a
circuit can reproduce it faithfully.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidStateError, ShapeError

H = "H"
X = "X"
S = "S"
U1 = "U1"
CU1 = "CU1"
CCU1 = "CCU1"
CONST_PHASE = "CONST_PHASE"

GATE_KINDS = frozenset({H, X, S, U1, CU1, CCU1, CONST_PHASE})

# Number of qubit operands each kind takes.
_ARITY = {H: 1, X: 1, S: 1, U1: 1, CU1: 2, CCU1: 3, CONST_PHASE: 0}

# Kinds whose matrix is diagonal in the computational basis.
DIAGONAL_KINDS = frozenset({U1, CU1, CCU1, S, CONST_PHASE})

MAX_QUBITS = 24

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class GateOp:
    """One primitive operation.

    phase is in radians and is meaningful for U1/CU1/CCU1/CONST_PHASE; it is
    carried as 0.0 for H, X and S (the S phase of pi/2 is implied by the kind).
    """

    kind: str
    qubits: tuple[int, ...] = ()
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ShapeError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != _ARITY[self.kind]:
            raise ShapeError(
                f"{self.kind} takes {_ARITY[self.kind]} qubit(s), got {self.qubits!r}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ShapeError(f"repeated qubit in {self.kind} {self.qubits!r}")
        if any(q < 0 for q in self.qubits):
            raise ShapeError(f"negative qubit index in {self.qubits!r}")
        if not math.isfinite(self.phase):
            raise ShapeError(f"non-finite phase {self.phase!r}")


def h(q: int) -> GateOp:
    return GateOp(H, (q,))


def x(q: int) -> GateOp:
    return GateOp(X, (q,))


def s(q: int) -> GateOp:
    return GateOp(S, (q,))


def u1(phase: float, q: int) -> GateOp:
    return GateOp(U1, (q,), phase)


def cu1(phase: float, qa: int, qb: int) -> GateOp:
    return GateOp(CU1, (qa, qb), phase)


def ccu1(phase: float, qa: int, qb: int, qc: int) -> GateOp:
    return GateOp(CCU1, (qa, qb, qc), phase)


def const_phase(phase: float) -> GateOp:
    return GateOp(CONST_PHASE, (), phase)


@dataclass(frozen=True)
class StateVector:
    """Immutable register snapshot.  Treat .amplitudes as read-only."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


def new_zero_state(n_qubits: int) -> StateVector:
    """All-|0> register of n_qubits (1 <= n_qubits <= 24)."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ShapeError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def set_amplitudes(state: StateVector, amps: Sequence[complex]) -> StateVector:
    """Replace the register contents, normalizing to unit norm."""
    arr = np.asarray(amps, dtype=np.complex128)
    if arr.shape != (state.dim,):
        raise ShapeError(f"expected {state.dim} amplitudes, got shape {arr.shape}")
    norm = np.linalg.norm(arr)
    if norm < 1e-12:
        raise InvalidStateError("amplitude vector has (near-)zero norm")
    return StateVector(state.n_qubits, arr / norm)


def _check_targets(gate: GateOp, n_qubits: int) -> None:
    for q in gate.qubits:
        if q >= n_qubits:
            raise ShapeError(f"gate {gate.kind} targets qubit {q} on {n_qubits}-qubit register")


def _diag_phase_inplace(arr: np.ndarray, qubits: tuple[int, ...], phase: float) -> None:
    # Multiply amplitudes whose listed qubits are all 1 by exp(i*phase).
    # Reshape into alternating (block, 2, block, ...) axes so the all-ones
    # slice is a plain view.
    qs = sorted(qubits)
    shape = []
    index: list[object] = []
    prev = -1
    for q in qs:
        shape.append(1 << (q - prev - 1))
        index.append(slice(None))
        shape.append(2)
        index.append(1)
        prev = q
    shape.append(arr.size >> (prev + 1))
    index.append(slice(None))
    # numpy's C order puts the fastest axis last; qubit 0 is the fastest bit.
    view = arr.reshape(tuple(reversed(shape)))
    view[tuple(reversed(index))] *= complex(math.cos(phase), math.sin(phase))


def _apply_inplace(arr: np.ndarray, gate: GateOp) -> None:
    kind = gate.kind
    if kind == U1:
        _diag_phase_inplace(arr, gate.qubits, gate.phase)
    elif kind == CU1 or kind == CCU1:
        _diag_phase_inplace(arr, gate.qubits, gate.phase)
    elif kind == S:
        _diag_phase_inplace(arr, gate.qubits, math.pi / 2.0)
    elif kind == CONST_PHASE:
        arr *= complex(math.cos(gate.phase), math.sin(gate.phase))
    elif kind == H:
        q = gate.qubits[0]
        view = arr.reshape(-1, 2, 1 << q)
        a = view[:, 0, :].copy()
        b = view[:, 1, :].copy()
        view[:, 0, :] = (a + b) * _INV_SQRT2
        view[:, 1, :] = (a - b) * _INV_SQRT2
    elif kind == X:
        q = gate.qubits[0]
        view = arr.reshape(-1, 2, 1 << q)
        a = view[:, 0, :].copy()
        view[:, 0, :] = view[:, 1, :]
        view[:, 1, :] = a
    else:  # pragma: no cover - GateOp validation makes this unreachable
        raise ShapeError(f"unknown gate kind {kind!r}")


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Apply one gate, returning a new state."""
    _check_targets(gate, state.n_qubits)
    arr = state.amplitudes.copy()
    _apply_inplace(arr, gate)
    return StateVector(state.n_qubits, arr)


def apply_gates(state: StateVector, gates: Iterable[GateOp]) -> StateVector:
    """Apply a gate sequence in list order (first element acts first)."""
    arr = state.amplitudes.copy()
    for gate in gates:
        _check_targets(gate, state.n_qubits)
        _apply_inplace(arr, gate)
    return StateVector(state.n_qubits, arr)


def probabilities(state: StateVector, qubit_subset: Sequence[int]) -> np.ndarray:
    """Marginal distribution over the listed qubits.

    Bit i of the returned pattern index is the value of qubit_subset[i], so
    the subset order fixes the significance of the readout bits.
    """
    subset = tuple(qubit_subset)
    if len(subset) == 0:
        raise ShapeError("qubit subset must not be empty")
    if len(set(subset)) != len(subset):
        raise ShapeError(f"repeated qubit in subset {subset!r}")
    for q in subset:
        if not 0 <= q < state.n_qubits:
            raise ShapeError(f"subset qubit {q} outside register of {state.n_qubits}")
    weights = np.abs(state.amplitudes) ** 2
    basis = np.arange(state.dim)
    keys = np.zeros(state.dim, dtype=np.int64)
    for i, q in enumerate(subset):
        keys |= ((basis >> q) & 1) << i
    return np.bincount(keys, weights=weights, minlength=1 << len(subset))


def sample(
    state: StateVector, qubit_subset: Sequence[int], shots: int, seed: int | None
) -> np.ndarray:
    """Multinomial counts over the subset's patterns; deterministic given seed."""
    if shots <= 0:
        raise ShapeError(f"shots must be positive, got {shots}")
    probs = probabilities(state, qubit_subset)
    # Guard against tiny negative rounding before normalizing.
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    return rng.multinomial(shots, probs)


# ---------------------------------------------------------------------------
# Text dump of a circuit: one gate per line,
#   KIND q<i> [q<j> [q<k>]] <phase>
# with the phase printed to 17 significant digits so parsing round-trips the
# exact float.  The phase token is always present (0 for H/X/S).


def format_gate(gate: GateOp) -> str:
    parts = [gate.kind]
    parts.extend(f"q{q}" for q in gate.qubits)
    parts.append(f"{gate.phase:.17g}")
    return " ".join(parts)


def parse_gate(line: str) -> GateOp:
    tokens = line.split()
    if len(tokens) < 2:
        raise ShapeError(f"unparseable gate line {line!r}")
    kind = tokens[0]
    if kind not in GATE_KINDS:
        raise ShapeError(f"unknown gate kind in line {line!r}")
    qubit_tokens = tokens[1:-1]
    qubits = []
    for tok in qubit_tokens:
        if not tok.startswith("q"):
            raise ShapeError(f"bad qubit token {tok!r} in line {line!r}")
        qubits.append(int(tok[1:]))
    return GateOp(kind, tuple(qubits), float(tokens[-1]))


def format_circuit(gates: Iterable[GateOp]) -> str:
    return "\n".join(format_gate(g) for g in gates) + "\n"


def parse_circuit(text: str) -> list[GateOp]:
    gates = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            gates.append(parse_gate(line))
    return gates
