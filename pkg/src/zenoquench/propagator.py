"""Exact unitary propagation over piecewise-constant coupling segments.

Because the coupling is constant within each segment, the state at any time
inside a segment is obtained without time-step error from the spectral
decomposition of that segment's Hamiltonian:

    c(t0 + s) = V exp(-i L s) V^T c(t0)

with H = V L V^T real symmetric.  The sampling step ``dt`` is therefore a
pure output-resolution parameter, not an integration step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, InvalidValueError
from .model import QuenchProtocol, StateVector, SystemParams, assemble_hamiltonian

NORM_TOL = 1e-10


@dataclass(frozen=True)
class Eigensystem:
    """Spectral decomposition of one segment Hamiltonian.

    ``eigenvalues`` are ascending, in rad/ns; ``eigenvectors`` holds the
    orthonormal eigenvectors as columns, each with its largest-magnitude
    component made positive for deterministic output.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source_coupling_ghz: float = float("nan")


def eig_sym(h: np.ndarray, source_coupling_ghz: float = float("nan")) -> Eigensystem:
    """Diagonalize a real symmetric matrix (LAPACK ``eigh`` under the hood)."""
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidValueError("h", f"expected a square matrix, got shape {h.shape}")
    asym = float(np.max(np.abs(h - h.T))) if h.size else 0.0
    if asym > 1e-12:
        raise InvalidValueError("h", f"matrix is not symmetric (max |H - H^T| = {asym:.3e})")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"symmetric eigensolver did not converge on a {h.shape[0]}x{h.shape[0]} matrix: {exc}") from exc
    # Deterministic sign: flip columns so the largest-magnitude entry is positive.
    lead = np.argmax(np.abs(eigenvectors), axis=0)
    signs = np.sign(eigenvectors[lead, np.arange(eigenvectors.shape[1])])
    signs[signs == 0] = 1.0
    return Eigensystem(eigenvalues, eigenvectors * signs, source_coupling_ghz)


def amplitudes_at(eig: Eigensystem, amplitudes: np.ndarray, offsets_ns: np.ndarray) -> np.ndarray:
    """Amplitudes evolved from ``amplitudes`` by each offset, columns per offset.

    Every column is computed directly from the starting state, so there is no
    error accumulation across samples.
    """
    offsets = np.atleast_1d(np.asarray(offsets_ns, dtype=float))
    a = eig.eigenvectors.T @ np.asarray(amplitudes, dtype=complex)
    phases = np.exp(-1j * np.outer(eig.eigenvalues, offsets))
    return eig.eigenvectors @ (phases * a[:, None])


def evolve_segment(state: StateVector, eig: Eigensystem, duration_ns: float) -> StateVector:
    """Evolve a state under one segment Hamiltonian for ``duration_ns``."""
    evolved = amplitudes_at(eig, state.as_array(), np.array([duration_ns]))[:, 0]
    return StateVector.from_array(evolved, state.time_ns + duration_ns)


def ideal_measure(state: StateVector) -> tuple[float, StateVector]:
    """Project onto the emitter's excited state and collapse.

    Returns the survival probability |c_emitter|^2 and the post-collapse
    state: emitter amplitude reset to real 1 (global phase is unobservable),
    field amplitudes zeroed, time stamp unchanged.
    """
    survival = abs(state.c_emitter) ** 2
    reset = StateVector.emitter_excited(len(state.c_sites), state.time_ns)
    return survival, reset


@dataclass
class Trajectory:
    """Sampled amplitudes over a full protocol.

    ``amplitudes[i]`` is the state at ``times_ns[i]`` (emitter first, then
    sites).  ``segment_index[i]`` and ``coupling_at_ghz[i]`` follow the
    right-continuous convention: they describe g(t) on [t_i, t_{i+1}), with
    the final point assigned to the last segment.
    """

    times_ns: np.ndarray
    amplitudes: np.ndarray
    segment_index: np.ndarray
    coupling_at_ghz: np.ndarray
    segment_starts_ns: np.ndarray
    protocol: QuenchProtocol
    params: SystemParams

    @property
    def emitter_amplitudes(self) -> np.ndarray:
        return self.amplitudes[:, 0]

    @property
    def site_amplitudes(self) -> np.ndarray:
        return self.amplitudes[:, 1:]

    @property
    def central_site_amplitudes(self) -> np.ndarray:
        return self.amplitudes[:, 1 + self.params.central_site]

    def state_at(self, index: int) -> StateVector:
        return StateVector.from_array(self.amplitudes[index], float(self.times_ns[index]))

    def norm_drift(self) -> float:
        norms = np.sum(np.abs(self.amplitudes) ** 2, axis=1)
        return float(np.max(np.abs(norms - 1.0)))


def _segment_offsets(duration_ns: float, dt_ns: float) -> np.ndarray:
    """Offsets dt, 2 dt, ... inside a segment, always ending exactly at its end."""
    n = int(np.floor(duration_ns / dt_ns + 1e-9))
    offsets = dt_ns * np.arange(1, n + 1)
    offsets = offsets[offsets < duration_ns - 1e-9 * dt_ns]
    return np.append(offsets, duration_ns)


def propagate(
    params: SystemParams,
    protocol: QuenchProtocol,
    dt_ns: float,
    initial: StateVector,
) -> Trajectory:
    """Propagate ``initial`` through the protocol, sampling every ``dt_ns``.

    One eigendecomposition is computed per distinct coupling value and
    reused across segments.  The grid contains every segment boundary
    exactly once, shared between the segment it ends and the one it starts.
    """
    if not dt_ns > 0:
        raise InvalidValueError("dt_ns", f"must be positive, got {dt_ns}")
    if len(initial.c_sites) != params.n_sites:
        raise InvalidValueError("initial", f"state has {len(initial.c_sites)} sites, params expect {params.n_sites}")
    initial.validate_normalized(NORM_TOL)

    cache: dict[float, Eigensystem] = {}
    for _, g in protocol.segments:
        if g not in cache:
            cache[g] = eig_sym(assemble_hamiltonian(params, g), g)

    t0 = initial.time_ns
    times = [np.array([t0])]
    blocks = [initial.as_array()[:, None]]
    segment_starts = np.empty(len(protocol.segments))
    current = initial.as_array()
    seg_start = t0
    for j, (duration, g) in enumerate(protocol.segments):
        segment_starts[j] = seg_start
        offsets = _segment_offsets(duration, dt_ns)
        block = amplitudes_at(cache[g], current, offsets)
        times.append(seg_start + offsets)
        blocks.append(block)
        current = block[:, -1]
        seg_start = seg_start + duration

    times_ns = np.concatenate(times)
    amplitudes = np.concatenate(blocks, axis=1).T
    ends = segment_starts + np.asarray(protocol.durations_ns)
    segment_index = np.minimum(
        np.searchsorted(ends, times_ns, side="right"), len(protocol.segments) - 1
    )
    coupling_at = np.asarray(protocol.couplings_ghz)[segment_index]
    return Trajectory(
        times_ns=times_ns,
        amplitudes=amplitudes,
        segment_index=segment_index,
        coupling_at_ghz=coupling_at,
        segment_starts_ns=segment_starts,
        protocol=protocol,
        params=params,
    )
