"""Orchestration layer: one function per user-facing operation.

Each pipeline takes a RunConfig, drives the core modules, and returns a
pydantic result carrying the config echo plus a UTC timestamp.  Nothing
here touches the filesystem; serialization concerns stay in the CLI and
the HTTP layer.
"""

from __future__ import annotations

import datetime as _dt

import numpy as np

from . import evolution, grid, oracle, phaseest, statevec
from .schemas import (
    BinRow,
    CompareOracleResult,
    DumpResult,
    EigenpairReport,
    IpeResult,
    QpeResult,
    RunConfig,
    SolveExactResult,
)


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def run_solve_exact(cfg: RunConfig) -> SolveExactResult:
    pairs = oracle.solve_well(cfg.well_spec())
    reports = [
        EigenpairReport(
            index=p.index, parity=p.parity, energy=p.energy, q=p.q, alpha=p.alpha
        )
        for p in pairs
    ]
    return SolveExactResult(config=cfg, generated_at=_now(), bound_states=reports)


def _distribution_rows(dist: np.ndarray, n_work: int, total_time: float) -> list[BinRow]:
    rows = []
    for b, p in enumerate(dist):
        theta = b / (1 << n_work)
        energy = -2.0 * np.pi * theta / total_time
        rows.append(
            BinRow(bin=b, theta=theta, energy=float(energy), probability=float(p))
        )
    return rows


def run_qpe(cfg: RunConfig) -> QpeResult:
    params = cfg.evolution_params()
    amps = cfg.initial_amplitudes()
    est = phaseest.qpe(params, cfg.n_work, amps, shots=cfg.shots, seed=cfg.seed)
    rows = _distribution_rows(est.distribution, cfg.n_work, params.t)
    argmax = int(round(est.theta * (1 << cfg.n_work)))
    return QpeResult(
        config=cfg,
        generated_at=_now(),
        theta=est.theta,
        energy=est.energy,
        argmax_bin=argmax,
        distribution=rows,
    )


def run_ipe(cfg: RunConfig, inject_theta: float | None = None) -> IpeResult:
    if inject_theta is not None:
        est = phaseest.ipe_single_qubit(
            inject_theta, shots=cfg.shots, seed=cfg.seed, total_time=cfg.t
        )
        effective = cfg.t
    else:
        params = cfg.evolution_params()
        amps = cfg.initial_amplitudes()
        est = phaseest.ipe(
            params, amps, shots=cfg.shots, seed=cfg.seed, repetitions=cfg.repetitions
        )
        effective = cfg.repetitions * params.t
    return IpeResult(
        config=cfg,
        generated_at=_now(),
        cos_est=est.cos_est,
        sin_est=est.sin_est,
        theta=est.theta,
        energy=est.energy,
        effective_time=effective,
    )


def evolution_gate_list(cfg: RunConfig) -> list[statevec.GateOp]:
    """The uncontrolled circuit for the full time span: steps repetitions
    of the split-step block."""
    params = cfg.evolution_params()
    step = evolution.trotter_step_gates(params)
    return [g for _ in range(cfg.steps) for g in step]


def run_dump_circuit(cfg: RunConfig, verify: bool = False) -> DumpResult:
    gates = evolution_gate_list(cfg)
    text = statevec.format_circuit(gates)
    verified = None
    gap = None
    if verify:
        parsed = statevec.parse_circuit(text)
        amps = cfg.initial_amplitudes()
        state = statevec.StateVector(cfg.n_sim, amps.copy())
        from_dump = statevec.apply_gates(state, parsed).amplitudes
        direct = statevec.apply_gates(
            statevec.StateVector(cfg.n_sim, amps.copy()), gates
        ).amplitudes
        gap = float(np.abs(from_dump - direct).max())
        verified = gap < 1e-10
    return DumpResult(
        config=cfg,
        generated_at=_now(),
        gate_count=len(gates),
        circuit_text=text,
        verified=verified,
        verification_gap=gap,
    )


def run_compare_oracle(cfg: RunConfig) -> CompareOracleResult:
    params = cfg.evolution_params()
    step = oracle.assemble_unitary(
        evolution.trotter_step_gates(params), cfg.n_sim
    )
    circuit = np.linalg.matrix_power(step, cfg.steps)
    reference = oracle.reference_propagator(params, total_time=params.t)
    step_errs = oracle.eigenphase_errors(params, step, total_time=params.dt)
    total_errs = oracle.eigenphase_errors(params, circuit, total_time=params.t)
    op_norm = float(np.linalg.norm(circuit - reference, ord=2))
    amps = cfg.initial_amplitudes()
    predicted = oracle.predict_qpe_distribution(params, cfg.n_work, amps)
    simulated = phaseest.qpe(params, cfg.n_work, amps).distribution
    return CompareOracleResult(
        config=cfg,
        generated_at=_now(),
        step_eigenphase_errors=[float(e) for e in step_errs],
        max_step_eigenphase_error=float(step_errs.max()),
        total_eigenphase_errors=[float(e) for e in total_errs],
        max_total_eigenphase_error=float(total_errs.max()),
        operator_norm_error=op_norm,
        qpe_linf_gap=float(np.abs(predicted - simulated).max()),
    )
