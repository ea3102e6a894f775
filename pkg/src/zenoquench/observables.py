"""Quantities extracted from trajectories: populations, rates, entanglement,
short-time fit, measurement survival, and bound-state analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, InvalidValueError
from .model import TWO_PI, SystemParams, assemble_hamiltonian, band_info
from .propagator import Trajectory, eig_sym


@dataclass
class RateSeries:
    """Time-dependent level shift and decay rate of the emitter.

    ``omega_shift`` and ``gamma`` are in rad/ns; ``omega_shift`` is tagged
    with the trajectory frame (the lab-frame shift exceeds the rotating-frame
    one by the resonator angular frequency).  Points where the emitter
    amplitude is below the validity threshold carry NaN and ``valid=False``.
    """

    times_ns: np.ndarray
    omega_shift: np.ndarray
    gamma: np.ndarray
    valid: np.ndarray
    frame: str


@dataclass(frozen=True)
class ZenoFit:
    """Result of the short-time quadratic-decay fit P(t) = 1 - (t/tau_z)^2."""

    tau_z_ns: float
    window_ns: float
    slope: float


@dataclass(frozen=True)
class BoundStateReport:
    """Outcome of diagonalizing the on-coupling Hamiltonian.

    ``exists`` flags an eigenstate outside the field band with appreciable
    emitter weight (a decoupled emitter, g0 = 0, is trivially its own bound
    state).  ``trapped_population_prediction`` is the infinite-time average
    of the survival probability from the diagonal ensemble.
    """

    exists: bool
    energy_ghz: float | None
    emitter_weight: float
    trapped_population_prediction: float


def survival_probability(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Excited-state population P(t) = |c_emitter|^2, clipped into [0, 1]."""
    p = np.abs(traj.emitter_amplitudes) ** 2
    return traj.times_ns, np.clip(p, 0.0, 1.0)


def site_populations(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Photon populations |c_l(t)|^2, one row per grid point."""
    return traj.times_ns, np.abs(traj.site_amplitudes) ** 2


def decay_rates(traj: Trajectory, eps_c: float = 1e-6) -> RateSeries:
    """Level shift and decay rate from the equations of motion.

    With c0 the emitter amplitude and a_c the central-site amplitude, the
    Schroedinger equation gives dc0/dt = -i (d c0 + g a_c) where d is the
    emitter diagonal in the trajectory frame.  The shift -Im[dc0/c0] and rate
    -Re[dc0/c0] then follow analytically, with no finite differencing:

        omega_shift = d + g Re(a_c conj(c0)) / |c0|^2
        gamma       =   - g Im(a_c conj(c0)) / |c0|^2

    Points with |c0| < eps_c are flagged invalid (NaN).
    """
    c0 = traj.emitter_amplitudes
    a_c = traj.central_site_amplitudes
    g = TWO_PI * traj.coupling_at_ghz
    diag = traj.params.emitter_diagonal_rad
    population = np.abs(c0) ** 2
    cross = a_c * np.conj(c0)
    valid = np.abs(c0) >= eps_c
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = -g * cross.imag / population
        omega = diag + g * cross.real / population
    gamma[~valid] = np.nan
    omega[~valid] = np.nan
    return RateSeries(traj.times_ns, omega, gamma, valid, traj.params.frame)


def concurrence_qubit_site0(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Concurrence between the emitter and its directly coupled resonator.

    Tracing every other site out of the single-excitation pure state leaves a
    two-qubit X-state whose Wootters concurrence reduces exactly to
    2 |c_emitter| |c_center| (derivation in docs/concurrence_derivation.md).
    """
    c = 2.0 * np.abs(traj.emitter_amplitudes) * np.abs(traj.central_site_amplitudes)
    return traj.times_ns, np.clip(c, 0.0, 1.0)


def fit_zeno_time(p_series: tuple[np.ndarray, np.ndarray], window_ns: float = 1.0) -> ZenoFit:
    """Fit P(t) = 1 - (t/tau_z)^2 over [0, window] by least squares.

    The fit regresses 1 - P against t^2 through the origin; tau_z is
    1/sqrt(slope).
    """
    times, p = np.asarray(p_series[0], dtype=float), np.asarray(p_series[1], dtype=float)
    if times.size == 0 or times[0] != 0.0:
        raise InvalidValueError("p_series", "series must start at t = 0")
    if abs(p[0] - 1.0) > 1e-9:
        raise InvalidValueError("p_series", f"series must start at P = 1, got {p[0]}")
    if not 0 < window_ns <= times[-1] * (1 + 1e-12):
        raise InvalidValueError("window_ns", f"window {window_ns} outside series range [0, {times[-1]}]")
    mask = times <= window_ns * (1 + 1e-12)
    t2 = times[mask] ** 2
    y = 1.0 - p[mask]
    denominator = float(np.sum(t2 * t2))
    if denominator == 0.0:
        raise DegenerateFitError("fit window contains no nonzero times")
    slope = float(np.sum(t2 * y)) / denominator
    if not math.isfinite(slope) or slope <= 0.0:
        raise DegenerateFitError(f"non-positive quadratic-decay slope {slope}")
    return ZenoFit(tau_z_ns=1.0 / math.sqrt(slope), window_ns=window_ns, slope=slope)


def ideal_measurement_survival(p_tau: float, n: int) -> float:
    """Survival after n ideal projective measurements, P(tau)^n."""
    if not 0.0 <= p_tau <= 1.0:
        raise InvalidValueError("p_tau", f"must lie in [0, 1], got {p_tau}")
    if n < 1:
        raise InvalidValueError("n", f"must be a positive integer, got {n}")
    return float(p_tau) ** int(n)


def _diagonal_ensemble(eigenvalues: np.ndarray, emitter_weights: np.ndarray, degeneracy_tol: float) -> float:
    """Infinite-time average of P: sum over eigenvalue groups of (group weight)^2.

    Grouping eigenvalues within ``degeneracy_tol`` keeps the prediction exact
    when the spectrum is degenerate (e.g. a decoupled emitter level inside
    the band).
    """
    total = 0.0
    group_weight = emitter_weights[0]
    for i in range(1, len(eigenvalues)):
        if eigenvalues[i] - eigenvalues[i - 1] <= degeneracy_tol:
            group_weight += emitter_weights[i]
        else:
            total += group_weight**2
            group_weight = emitter_weights[i]
    total += group_weight**2
    return float(total)


def bound_state_analysis(
    params: SystemParams,
    weight_threshold: float = 0.01,
    band_margin_rad: float = 1e-9,
) -> BoundStateReport:
    """Search the on-coupling spectrum for a bound state and predict trapping.

    An eigenvalue counts as bound when it lies strictly outside the field
    band by more than ``band_margin_rad`` (rad/ns) and its eigenvector puts
    more than ``weight_threshold`` of its weight on the emitter.  Both
    thresholds are tunable.
    """
    if params.g0_ghz == 0.0:
        return BoundStateReport(True, params.omega0_ghz, 1.0, 1.0)
    eig = eig_sym(assemble_hamiltonian(params, params.g0_ghz), params.g0_ghz)
    weights = eig.eigenvectors[0, :] ** 2
    offset_ghz = params.omegac_ghz if params.frame == "rotating" else 0.0
    energies_ghz = eig.eigenvalues / TWO_PI + offset_ghz
    band = band_info(params)
    margin_ghz = band_margin_rad / TWO_PI
    outside = (energies_ghz < band.band_min_ghz - margin_ghz) | (
        energies_ghz > band.band_max_ghz + margin_ghz
    )
    candidates = outside & (weights > weight_threshold)
    trapped = _diagonal_ensemble(eig.eigenvalues, weights, band_margin_rad)
    if not np.any(candidates):
        return BoundStateReport(False, None, 0.0, trapped)
    best = int(np.argmax(np.where(candidates, weights, -1.0)))
    return BoundStateReport(True, float(energies_ghz[best]), float(weights[best]), trapped)
