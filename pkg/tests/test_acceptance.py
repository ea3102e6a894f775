"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Run with ``pytest tests/test_acceptance.py -v -s``.

Criterion 4's strict inequality is asserted from the second measurement on:
at the first stage end the quenched run has not yet been quenched, so its
survival equals free decay identically and strict inequality is impossible
there (asserted as equality instead).
"""

import dataclasses
import math

import numpy as np
import pytest

from oracles import rk4_evolve_checkpoints, wootters_concurrence
from zenoquench import (
    StateVector,
    SystemParams,
    assemble_hamiltonian,
    bound_state_analysis,
    concurrence_qubit_site0,
    propagate,
    protocol_segments,
    run_free_decay,
    run_periodic_quench,
    survival_probability,
)

TWO_PI = 2.0 * math.pi


def check(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def qze_run(resonant_params):
    return run_periodic_quench(resonant_params, 1.0, 13.0, 5, 0.01)


def test_criterion_01_zeno_time(resonant_free_70):
    fit = resonant_free_70.zeno_fit
    perturbative = 1.0 / (TWO_PI * 0.05)
    ok = abs(fit.tau_z_ns - 3.33) <= 0.1 * 3.33 and abs(fit.tau_z_ns - perturbative) <= 0.1 * perturbative
    check(
        "criterion 1 zeno-time reproduction",
        ok,
        f"tau_z = {fit.tau_z_ns:.4f} ns vs 3.33 ns (10%) and 1/g0 = {perturbative:.4f} ns (10%)",
    )


def test_criterion_02_slow_hopping_zeno_time():
    params = SystemParams(8.74, 8.74, 0.01, 0.01, 61)
    fit = run_free_decay(params, 5.0, 0.01).zeno_fit
    ok = abs(fit.tau_z_ns - 15.0) <= 0.15 * 15.0
    check("criterion 2 slow-hopping zeno time", ok, f"tau_z = {fit.tau_z_ns:.4f} ns vs 15 ns (15%)")


def test_criterion_03_free_decay_completeness(resonant_free_70):
    final = resonant_free_70.survival[-1]
    check("criterion 3 free-decay completeness", final < 0.02, f"P(70 ns) = {final:.3e} < 0.02")


def test_criterion_04_qze_inequality(qze_run):
    ends = qze_run.stage_end_indices
    p_q, p_f, p_i = qze_run.p_quench[ends], qze_run.p_free[ends], qze_run.p_ideal[ends]
    # first stage end: identical runs by construction (no quench yet)
    first_equal = abs(p_q[0] - p_f[0]) <= 1e-12
    later_strict = bool(np.all(p_q[1:] > p_f[1:]))
    deviation = float(np.max(np.abs(p_q - p_i)))
    ok = first_equal and later_strict and deviation <= 0.05 and qze_run.verdict == "QZE"
    check(
        "criterion 4 QZE inequality",
        ok,
        f"p_quench > p_free at stage ends 2..6 ({later_strict}), equality at first end "
        f"({first_equal}), max |p_quench - p_ideal| = {deviation:.4f} <= 0.05, verdict {qze_run.verdict}",
    )


def test_criterion_05_aze_inequality(detuned_params):
    run = run_periodic_quench(detuned_params, 2.0, 14.0, 5, 0.01)
    ok = run.p_quench[-1] < run.p_free[-1] and run.verdict == "AZE"
    check(
        "criterion 5 AZE inequality",
        ok,
        f"p_quench(T_on) = {run.p_quench[-1]:.4f} < p_free(T_on) = {run.p_free[-1]:.4f}, verdict {run.verdict}",
    )


def test_criterion_06_measurement_limit_trend(resonant_params, qze_run):
    run3 = run_periodic_quench(resonant_params, 1.0, 3.0, 5, 0.01)

    def deviation(run):
        ends = run.stage_end_indices
        return float(np.max(np.abs(run.p_quench[ends] - run.p_ideal[ends])))

    d13, d3 = deviation(qze_run), deviation(run3)
    check(
        "criterion 6 measurement-limit trend",
        d13 < d3,
        f"deviation(delta=13) = {d13:.4f} < deviation(delta=3) = {d3:.4f}",
    )


def test_criterion_07_quench_freeze(qze_run):
    traj = qze_run.trajectory
    _, p = survival_probability(traj)
    worst = 0.0
    for j, (_, g) in enumerate(traj.protocol.segments):
        if g > 0:
            continue
        inside = traj.segment_index == j
        # include the closing boundary of the off segment (right-continuous
        # convention assigns it to the next segment)
        last = np.flatnonzero(inside)[-1]
        values = np.concatenate((p[inside], p[last + 1 : last + 2]))
        worst = max(worst, float(np.max(values) - np.min(values)))
    check("criterion 7 quench-freeze exactness", worst <= 1e-12, f"max off-segment |P variation| = {worst:.3e}")


def test_criterion_08_oracle_equivalence():
    worst = 0.0
    for n_sites in (3, 5, 7):
        params = SystemParams(8.74, 8.74, 0.05, 0.05, n_sites)
        initial = StateVector.emitter_excited(n_sites)
        protocol = protocol_segments("free", total_ns=10.0, g0_ghz=0.05)
        traj = propagate(params, protocol, 0.01, initial)
        h = assemble_hamiltonian(params, 0.05)
        checkpoints = [2.5, 5.0, 7.5, 10.0]
        references = rk4_evolve_checkpoints(h, initial.as_array(), checkpoints, dt_ns=1e-4)
        for t, reference in zip(checkpoints, references):
            state = traj.amplitudes[traj.times_ns == t][0]
            worst = max(worst, float(np.max(np.abs(state - reference))))
    check("criterion 8 oracle equivalence", worst <= 1e-6, f"max amplitude deviation from RK4 = {worst:.3e}")


def test_criterion_09_rabi_closed_form():
    params = SystemParams(8.74, 8.74, 0.0, 0.05, 1)
    result = run_free_decay(params, 20.0, 0.01)
    g = TWO_PI * 0.05
    worst = float(np.max(np.abs(result.survival - np.cos(g * result.times_ns) ** 2)))
    check("criterion 9 Rabi closed form", worst <= 1e-9, f"max |P - cos^2(g t)| = {worst:.3e}")


def test_criterion_10_rate_identity(resonant_params):
    errors = []
    for dt in (0.02, 0.01, 0.005):
        result = run_free_decay(resonant_params, 10.0, dt)
        integral = np.trapezoid(result.rates.gamma, result.times_ns)
        errors.append(abs(math.exp(-2.0 * integral) - result.survival[-1]))
    ok = errors[1] <= 1e-4 and errors[2] < errors[0]
    check(
        "criterion 10 rate identity",
        ok,
        f"|exp(-2 int Gamma) - P(10)| = {errors[1]:.3e} <= 1e-4 at dt=0.01; refines {errors[0]:.1e} -> {errors[2]:.1e}",
    )


def test_criterion_11_concurrence_oracle(resonant_params):
    protocol = protocol_segments("single_quench", tau_ns=1.0, delta_ns=13.0, g0_ghz=0.05)
    traj = propagate(resonant_params, protocol, 0.01, StateVector.emitter_excited(61))
    _, c = concurrence_qubit_site0(traj)
    rng = np.random.default_rng(11)
    indices = rng.choice(len(traj.times_ns), size=100, replace=False)
    center_col = 1 + resonant_params.central_site
    worst = 0.0
    for i in indices:
        amplitudes = traj.amplitudes[i]
        rest = float(np.sum(np.abs(amplitudes[1:]) ** 2) - abs(amplitudes[center_col]) ** 2)
        reference = wootters_concurrence(amplitudes[0], amplitudes[center_col], rest)
        worst = max(worst, abs(float(c[i]) - reference))
    check("criterion 11 concurrence oracle", worst <= 1e-10, f"max |2|c0 a0| - Wootters| = {worst:.3e} over 100 points")


def test_criterion_12_trapping_prediction(resonant_params, detuned_params):
    details = []
    ok = True
    for label, params in (("resonant", resonant_params), ("detuned", detuned_params)):
        report = bound_state_analysis(params)
        protocol = protocol_segments("free", total_ns=400.0, g0_ghz=params.g0_ghz)
        traj = propagate(params, protocol, 0.02, StateVector.emitter_excited(61))
        times, p = survival_probability(traj)
        empirical = float(np.mean(p[times >= 200.0]))
        gap = abs(report.trapped_population_prediction - empirical)
        ok = ok and gap <= 0.02
        details.append(f"{label}: predicted {report.trapped_population_prediction:.4f} vs empirical {empirical:.4f}")
        if label == "detuned":
            ok = ok and report.trapped_population_prediction > 0.1
    check("criterion 12 trapping prediction", ok, "; ".join(details))


def test_criterion_13_invariant_suite(resonant_params, resonant_free_70, qze_run):
    details = []

    drift = max(resonant_free_70.trajectory.norm_drift(), qze_run.trajectory.norm_drift())
    ok = drift <= 1e-10
    details.append(f"norm drift {drift:.2e}")

    lab_params = dataclasses.replace(resonant_params, frame="lab")
    rot = run_periodic_quench(resonant_params, 1.0, 13.0, 2, 0.02)
    lab = run_periodic_quench(lab_params, 1.0, 13.0, 2, 0.02)
    frame_p = float(np.max(np.abs(rot.p_quench - lab.p_quench)))
    frame_c = float(np.max(np.abs(rot.concurrence_full - lab.concurrence_full)))
    ok = ok and frame_p <= 1e-9 and frame_c <= 1e-9
    details.append(f"frame invariance P {frame_p:.2e}, C {frame_c:.2e}")

    pops = resonant_free_70.site_populations
    center = resonant_params.central_site
    mirror = float(np.max(np.abs(pops[:, :center] - pops[:, center + 1 :][:, ::-1])))
    ok = ok and mirror <= 1e-10
    details.append(f"mirror symmetry {mirror:.2e}")

    ring_params = dataclasses.replace(resonant_params, boundary="periodic")
    ring = run_free_decay(ring_params, 70.0, 0.01)
    boundary_gap = float(np.max(np.abs(ring.survival - resonant_free_70.survival)))
    ok = ok and boundary_gap <= 1e-3
    details.append(f"boundary sensitivity {boundary_gap:.2e}")

    check("criterion 13 invariant suite", ok, "; ".join(details))
