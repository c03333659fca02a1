"""Acceptance gate for the full pipeline.

Each criterion prints exactly one PASS/FAIL line (bypassing capture) and
then asserts, so a summary survives in the terminal even when a later
criterion aborts the run.  Targets and tolerances are frozen here on
purpose; nothing below recomputes an expected value from the code under
test.
"""

import time

import numpy as np
import pytest

from qwell import evolution, oracle, phaseest, pipelines, qft, statevec
from qwell.grid import WellSpec
from qwell.schemas import RunConfig


def _report(capsys, num: int, label: str, ok: bool) -> None:
    with capsys.disabled():
        print(f"\n[criterion {num}] {label}: {'PASS' if ok else 'FAIL'}")


def _circular_gap(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def test_criterion_1_exact_bound_state_energies(capsys):
    start = time.perf_counter()
    pairs = oracle.solve_well(WellSpec(100.0, 0.25))
    elapsed = time.perf_counter() - start

    energies = [p.energy for p in pairs]
    checks = {
        "ground": abs(energies[0] - (-88.12)) <= 0.01,
        "first_excited": abs(energies[1] - (-54.05)) <= 0.01,
        "runtime": elapsed < 1.0,
    }
    ok = all(checks.values())
    _report(capsys, 1, "exact bound-state energies", ok)
    assert ok, f"failed={[k for k, v in checks.items() if not v]} energies={energies} elapsed={elapsed:.3f}s"


def test_criterion_2_qpe_peak_reproduction(capsys):
    start = time.perf_counter()
    ground = pipelines.run_qpe(RunConfig(state="ground"))
    excited = pipelines.run_qpe(RunConfig(state="excited"))
    elapsed = time.perf_counter() - start

    half_bin = 3.28
    targets = sorted([-72.00, -65.44])
    measured = sorted([ground.energy, excited.energy])
    set_ok = all(
        abs(m - t) <= half_bin for m, t in zip(measured, targets)
    )

    # secondary local maximum of the ground-trial distribution at the bin
    # nearest -39.27
    bump_bin = round(-(-39.27) * 0.06 / (2 * np.pi) * 16) % 16
    probs = [row.probability for row in ground.distribution]
    bump_ok = (
        probs[bump_bin] > probs[(bump_bin - 1) % 16]
        and probs[bump_bin] > probs[(bump_bin + 1) % 16]
    )

    # peak assignment agrees with the spectral prediction for both trials
    cross_ok = True
    for cfg, res in ((RunConfig(state="ground"), ground),
                     (RunConfig(state="excited"), excited)):
        predicted = oracle.predict_qpe_distribution(
            cfg.evolution_params(), cfg.n_work, cfg.initial_amplitudes()
        )
        cross_ok = cross_ok and int(np.argmax(predicted)) == res.argmax_bin

    checks = {
        "argmax_energy_set": set_ok,
        "ground_secondary_bump": bump_ok,
        "prediction_cross_check": cross_ok,
        "runtime": elapsed < 60.0,
    }
    ok = all(checks.values())
    _report(capsys, 2, "qpe peak energies vs targets", ok)
    assert ok, (
        f"failed={[k for k, v in checks.items() if not v]} "
        f"measured={[round(m, 2) for m in measured]} targets={targets} "
        f"bump_bin={bump_bin} probs={[round(p, 4) for p in probs]} "
        f"elapsed={elapsed:.1f}s"
    )


def test_criterion_3_ipe_energy_reproduction(capsys):
    start = time.perf_counter()
    ground = pipelines.run_ipe(RunConfig(state="ground"))
    excited = pipelines.run_ipe(RunConfig(state="excited"))
    elapsed = time.perf_counter() - start

    checks = {
        "ground_energy": abs(ground.energy - (-72.56)) <= 1.0,
        "excited_energy": abs(excited.energy - (-65.85)) <= 1.0,
        "runtime": elapsed < 10.0,
    }
    ok = all(checks.values())
    _report(capsys, 3, "ipe energies vs targets", ok)
    assert ok, (
        f"failed={[k for k, v in checks.items() if not v]} "
        f"ground={ground.energy:.4f} excited={excited.energy:.4f} "
        f"elapsed={elapsed:.1f}s"
    )


def test_criterion_4_ipe_round_trip(capsys):
    t = 0.06
    window = 2 * np.pi / t
    energies = [-0.95 * window, -91.63, -72.56, -65.85, -39.27, -8.0, -0.4]

    exact_ok = True
    shot_ok = True
    for k, energy in enumerate(energies):
        theta = (-energy * t / (2 * np.pi)) % 1.0
        exact = phaseest.ipe_single_qubit(theta, total_time=t)
        exact_ok = exact_ok and _circular_gap(exact.theta, theta) <= 1e-12
        sampled = phaseest.ipe_single_qubit(
            theta, shots=8192, seed=100 + k, total_time=t
        )
        shot_ok = shot_ok and _circular_gap(sampled.theta, theta) <= 0.02

    checks = {"exact_recovery": exact_ok, "sampled_recovery": shot_ok}
    ok = all(checks.values())
    _report(capsys, 4, "ipe round-trip phase readback", ok)
    assert ok, f"failed={[k for k, v in checks.items() if not v]}"


def test_criterion_5_oracle_equivalence(capsys):
    coarse = pipelines.run_compare_oracle(RunConfig())
    fine = pipelines.run_compare_oracle(RunConfig(steps=100))
    ratio = coarse.max_total_eigenphase_error / fine.max_total_eigenphase_error

    params = RunConfig().evolution_params()
    n = 16

    kin = oracle.assemble_unitary(evolution.kinetic_gates(params), 4)
    j = np.arange(n)
    expected_kin = np.exp(1j * params.alpha * (j / n - 0.5) ** 2)
    kin_diag_ok = bool(np.abs(np.diag(kin) - expected_kin).max() < 1e-12)
    kin_shape_ok = bool(np.abs(kin - np.diag(np.diag(kin))).max() < 1e-12)

    pot = oracle.assemble_unitary(evolution.potential_gates(params), 4)
    expected_pot = np.exp(-1j * params.potential_values() * params.dt / 2)
    pot_ok = bool(np.abs(np.diag(pot) - expected_pot).max() < 1e-14)

    checks = {
        "per_step_error": coarse.max_step_eigenphase_error < 2e-3,
        "second_order_ratio": 3.0 <= ratio <= 5.0,
        "kinetic_diagonal": kin_diag_ok and kin_shape_ok,
        "potential_case_table": pot_ok,
    }
    ok = all(checks.values())
    _report(capsys, 5, "circuit vs dense propagator", ok)
    assert ok, (
        f"failed={[k for k, v in checks.items() if not v]} "
        f"step_err={coarse.max_step_eigenphase_error:.3e} ratio={ratio:.3f}"
    )


def test_criterion_6_invariant_suites(capsys):
    cfg = RunConfig()
    params = cfg.evolution_params()
    trial = cfg.initial_amplitudes()

    # 400 controlled steps on a superposed control keep the norm
    gates = evolution.controlled_evolution_gates(params, 4, repetitions=8)
    full = np.concatenate([trial, trial]) / np.sqrt(2)
    state = statevec.set_amplitudes(statevec.new_zero_state(5), full)
    state = statevec.apply_gates(state, gates)
    norm_ok = abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-10

    # transform composed with its inverse is the identity
    qft_ok = True
    for n in range(1, 6):
        plan = qft.plan_over(n)
        u = oracle.assemble_unitary(
            qft.qft_gates(plan) + qft.qft_inverse_gates(plan), n
        )
        qft_ok = qft_ok and bool(
            np.abs(u - np.eye(2**n)).max() < 1e-10
        )

    # control off leaves an arbitrary register state untouched
    rng = np.random.default_rng(11)
    amps = rng.normal(size=16) + 1j * rng.normal(size=16)
    amps /= np.linalg.norm(amps)
    off = np.concatenate([amps, np.zeros(16)])
    out = statevec.apply_gates(
        statevec.set_amplitudes(statevec.new_zero_state(5), off),
        evolution.controlled_evolution_gates(params, 4),
    )
    control_off_ok = bool(np.abs(out.amplitudes - off).max() < 1e-10)

    # a grid-aligned eigenphase concentrates into one work bin, and a
    # generic one still wins its nearest bin with probability >= 4/pi^2
    toy = _one_qubit_params()
    aligned = phaseest.qpe(
        toy, 4, np.array([0.0, 1.0]),
        controlled_block=_phase_block(7 / 16),
    )
    conc_ok = float(aligned.distribution[7]) > 0.999
    generic_theta = 0.3139
    generic = phaseest.qpe(
        toy, 4, np.array([0.0, 1.0]),
        controlled_block=_phase_block(generic_theta),
    )
    nearest = round(generic_theta * 16) % 16
    argmax_ok = (
        int(np.argmax(generic.distribution)) == nearest
        and float(generic.distribution[nearest]) >= 4 / np.pi**2
    )

    # mixture distribution equals the weighted sum over eigenvectors
    step = oracle.assemble_unitary(evolution.trotter_step_gates(params), 4)
    circuit = np.linalg.matrix_power(step, cfg.steps)
    _, vecs = oracle.unitary_eigensystem(circuit)
    mixture = phaseest.qpe(params, 4, trial).distribution
    combo = np.zeros(16)
    for i in range(16):
        weight = abs(np.vdot(vecs[:, i], trial)) ** 2
        if weight > 1e-14:
            combo += weight * phaseest.qpe(params, 4, vecs[:, i]).distribution
    spectral_ok = bool(np.abs(mixture - combo).max() < 1e-6)

    checks = {
        "controlled_norm_400_steps": norm_ok,
        "qft_inverse_identity": qft_ok,
        "control_off_identity": control_off_ok,
        "aligned_concentration": conc_ok,
        "generic_argmax_floor": argmax_ok,
        "spectral_decomposition": spectral_ok,
    }
    ok = all(checks.values())
    _report(capsys, 6, "invariant suites", ok)
    assert ok, f"failed={[k for k, v in checks.items() if not v]}"


def _one_qubit_params() -> evolution.EvolutionParams:
    from qwell.grid import make_grid

    return evolution.EvolutionParams(
        grid=make_grid(1, 0.5), well=WellSpec(0.0, 0.25), dt=1.0, steps=1
    )


def _phase_block(theta: float):
    def block(work: int, reps: int) -> list[statevec.GateOp]:
        return [statevec.cu1(2 * np.pi * theta * reps, work, 0)]

    return block
