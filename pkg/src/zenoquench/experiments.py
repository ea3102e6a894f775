"""Orchestration of the three run kinds (free decay, single quench, periodic
quench) plus the Zeno/anti-Zeno classification and parameter sweeps."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, InvalidValueError
from .model import QuenchProtocol, StateVector, SystemParams, assemble_hamiltonian, protocol_segments
from .observables import (
    RateSeries,
    ZenoFit,
    concurrence_qubit_site0,
    decay_rates,
    fit_zeno_time,
    site_populations,
    survival_probability,
)
from .propagator import Trajectory, _segment_offsets, amplitudes_at, eig_sym, propagate

VERDICT_QZE = "QZE"
VERDICT_AZE = "AZE"
VERDICT_NEUTRAL = "neutral"


@dataclass
class FreeDecayResult:
    trajectory: Trajectory
    times_ns: np.ndarray
    survival: np.ndarray
    site_populations: np.ndarray
    rates: RateSeries
    zeno_fit: ZenoFit | None  # None when the run does not decay at all


@dataclass
class SingleQuenchResult:
    trajectory: Trajectory
    times_ns: np.ndarray
    survival: np.ndarray
    concurrence: np.ndarray
    coupling_ghz: np.ndarray
    tau_ns: float
    delta_ns: float
    shape_distance: float


@dataclass
class ZenoRunResult:
    """Periodic-quench run mapped onto cumulative quench-on time.

    Off segments are excised from ``on_time_axis_ns`` (the survival is frozen
    there anyway); ``p_free`` and the ideal-measurement staircase ``p_ideal``
    are evaluated on the same axis.  ``stage_end_indices[k]`` points at
    on-time (k+1)*tau, i.e. the completion of stage k+1.
    ``concurrence_full`` stays on the uncompressed timeline.
    """

    trajectory: Trajectory
    on_time_axis_ns: np.ndarray
    p_quench: np.ndarray
    p_free: np.ndarray
    p_ideal: np.ndarray
    stage_end_indices: np.ndarray
    full_times_ns: np.ndarray
    concurrence_full: np.ndarray
    p_tau: float
    tau_ns: float
    delta_ns: float
    cycles: int
    verdict: str


@dataclass
class SweepRow:
    tau_ns: float
    delta_ns: float
    omega0_ghz: float
    verdict: str
    p_quench: float
    p_free: float
    error: str | None = None


def run_free_decay(
    params: SystemParams,
    t_end_ns: float,
    dt_ns: float = 0.01,
    fit_window_ns: float = 1.0,
    rate_eps: float = 1e-6,
) -> FreeDecayResult:
    """Constant-coupling decay run bundling every derived observable."""
    protocol = protocol_segments("free", total_ns=t_end_ns, g0_ghz=params.g0_ghz)
    traj = propagate(params, protocol, dt_ns, StateVector.emitter_excited(params.n_sites))
    times, survival = survival_probability(traj)
    _, pops = site_populations(traj)
    rates = decay_rates(traj, rate_eps)
    try:
        fit = fit_zeno_time((times, survival), min(fit_window_ns, t_end_ns))
    except DegenerateFitError:
        fit = None
    return FreeDecayResult(traj, times, survival, pops, rates, fit)


def run_single_quench(
    params: SystemParams,
    tau_ns: float,
    delta_ns: float,
    dt_ns: float = 0.01,
) -> SingleQuenchResult:
    """On-off-on quench run with a retrace metric for the second on-stage.

    The shape distance is max over s in [0, tau] of |P(tau + delta + s) -
    P(s)|: how far the decay after the off window departs from the initial
    decay.  Both legs are evaluated exactly from their stage-start states, so
    the metric does not depend on grid alignment.
    """
    protocol = protocol_segments("single_quench", tau_ns=tau_ns, delta_ns=delta_ns, g0_ghz=params.g0_ghz)
    initial = StateVector.emitter_excited(params.n_sites)
    traj = propagate(params, protocol, dt_ns, initial)
    times, survival = survival_probability(traj)
    _, concurrence = concurrence_qubit_site0(traj)

    eig_on = eig_sym(assemble_hamiltonian(params, params.g0_ghz), params.g0_ghz)
    eig_off = eig_sym(assemble_hamiltonian(params, 0.0), 0.0)
    offsets = np.concatenate(([0.0], _segment_offsets(tau_ns, dt_ns)))
    first_leg = np.abs(amplitudes_at(eig_on, initial.as_array(), offsets)[0, :]) ** 2
    mid = amplitudes_at(eig_on, initial.as_array(), np.array([tau_ns]))[:, 0]
    if delta_ns > 0:
        mid = amplitudes_at(eig_off, mid, np.array([delta_ns]))[:, 0]
    second_leg = np.abs(amplitudes_at(eig_on, mid, offsets)[0, :]) ** 2
    shape_distance = float(np.max(np.abs(second_leg - first_leg)))

    return SingleQuenchResult(
        trajectory=traj,
        times_ns=times,
        survival=survival,
        concurrence=concurrence,
        coupling_ghz=traj.coupling_at_ghz,
        tau_ns=float(tau_ns),
        delta_ns=float(delta_ns),
        shape_distance=shape_distance,
    )


def classify_zeno(p_quench_final: float, p_free_final: float, margin: float = 0.05) -> str:
    """Compare quenched vs unquenched survival at the final common on-time."""
    if p_quench_final > p_free_final * (1.0 + margin):
        return VERDICT_QZE
    if p_quench_final < p_free_final * (1.0 - margin):
        return VERDICT_AZE
    return VERDICT_NEUTRAL


def _on_time_axis(traj: Trajectory, tau_ns: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Map trajectory grid points onto cumulative quench-on time.

    Returns (kept grid indices, on-time per kept point, completed on-stages
    per kept point).  Off-segment interior points are dropped; each stage
    boundary appears exactly once.
    """
    protocol = traj.protocol
    couplings = np.asarray(protocol.couplings_ghz)
    is_on = couplings > 0
    durations = np.asarray(protocol.durations_ns)
    on_before = np.concatenate(([0.0], np.cumsum(np.where(is_on, durations, 0.0))))
    seg = traj.segment_index
    t = traj.times_ns
    seg_start = traj.segment_starts_ns[seg]

    on_time = np.where(is_on[seg], on_before[seg] + (t - seg_start), on_before[seg])
    if np.any(~is_on):
        # Stage boundaries survive as segment boundaries: count exactly.
        completed = np.cumsum(is_on)[seg] - np.where(is_on[seg], 1, 0)
        if is_on[seg[-1]]:
            completed[-1] += 1
    else:
        # Zero-length off windows were merged away; recover the notional
        # measurement times as multiples of tau along the on-time axis.
        completed = np.floor(on_time / tau_ns + 1e-9).astype(int)

    # Keep on-segment points plus the first point of every off segment (it is
    # the exact end of the preceding on stage).
    boundary = t == seg_start
    keep = is_on[seg] | (boundary & (seg > 0) & is_on[np.maximum(seg - 1, 0)])
    keep[0] = True
    idx = np.flatnonzero(keep)
    on_kept = on_time[idx]
    duplicate = np.zeros(idx.shape, dtype=bool)
    duplicate[1:] = on_kept[1:] == on_kept[:-1]
    idx = idx[~duplicate]
    return idx, on_time[idx], completed[idx]


def run_periodic_quench(
    params: SystemParams,
    tau_ns: float,
    delta_ns: float,
    cycles: int,
    dt_ns: float = 0.01,
    margin: float = 0.05,
) -> ZenoRunResult:
    """Periodic on/off quench with free-decay and ideal-measurement companions.

    The unquenched companion is the same system left coupled, evaluated at
    exactly the on-time axis values; the ideal-measurement staircase uses the
    simulated single-stage survival P(tau).
    """
    protocol = protocol_segments(
        "periodic", tau_ns=tau_ns, delta_ns=delta_ns, cycles=cycles, g0_ghz=params.g0_ghz
    )
    initial = StateVector.emitter_excited(params.n_sites)
    traj = propagate(params, protocol, dt_ns, initial)
    _, survival = survival_probability(traj)
    full_times, concurrence = concurrence_qubit_site0(traj)

    idx, on_axis, completed = _on_time_axis(traj, float(tau_ns))
    p_quench = survival[idx]

    eig_on = eig_sym(assemble_hamiltonian(params, params.g0_ghz), params.g0_ghz)
    free_amps = amplitudes_at(eig_on, initial.as_array(), on_axis)
    p_free = np.clip(np.abs(free_amps[0, :]) ** 2, 0.0, 1.0)
    if on_axis[0] == 0.0:
        p_free[0] = 1.0  # P(0) of the excited initial state is exact
    p_tau = float(
        np.clip(np.abs(amplitudes_at(eig_on, initial.as_array(), np.array([float(tau_ns)]))[0, 0]) ** 2, 0.0, 1.0)
    )
    p_ideal = p_tau ** completed.astype(float)
    stage_ends = np.flatnonzero(np.diff(completed, prepend=completed[0]) > 0)

    verdict = classify_zeno(float(p_quench[-1]), float(p_free[-1]), margin)
    return ZenoRunResult(
        trajectory=traj,
        on_time_axis_ns=on_axis,
        p_quench=p_quench,
        p_free=p_free,
        p_ideal=p_ideal,
        stage_end_indices=stage_ends,
        full_times_ns=full_times,
        concurrence_full=concurrence,
        p_tau=p_tau,
        tau_ns=float(tau_ns),
        delta_ns=float(delta_ns),
        cycles=int(cycles),
        verdict=verdict,
    )


def sweep(
    params: SystemParams,
    tau_values: list[float],
    delta_values: list[float],
    omega0_values: list[float],
    cycles: int,
    dt_ns: float = 0.01,
    margin: float = 0.05,
) -> list[SweepRow]:
    """Periodic-quench verdicts over a (tau, delta, omega0) grid.

    Rows come out in lexicographic order of the grid axes as given.  A
    failing grid point is recorded with verdict "error" and the run moves on.
    """
    for name, axis in (("tau_ns", tau_values), ("delta_ns", delta_values), ("omega0_ghz", omega0_values)):
        if len(axis) == 0:
            raise InvalidValueError(name, "grid axis must not be empty")
    rows: list[SweepRow] = []
    for tau in tau_values:
        for delta in delta_values:
            for omega0 in omega0_values:
                try:
                    point = dataclasses.replace(params, omega0_ghz=omega0)
                    result = run_periodic_quench(point, tau, delta, cycles, dt_ns, margin)
                    rows.append(
                        SweepRow(
                            tau_ns=float(tau),
                            delta_ns=float(delta),
                            omega0_ghz=float(omega0),
                            verdict=result.verdict,
                            p_quench=float(result.p_quench[-1]),
                            p_free=float(result.p_free[-1]),
                        )
                    )
                except Exception as exc:  # row failures must not abort the sweep
                    rows.append(
                        SweepRow(
                            tau_ns=float(tau),
                            delta_ns=float(delta),
                            omega0_ghz=float(omega0),
                            verdict="error",
                            p_quench=float("nan"),
                            p_free=float("nan"),
                            error=f"{type(exc).__name__}: {exc}",
                        )
                    )
    return rows
