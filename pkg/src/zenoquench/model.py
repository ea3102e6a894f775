"""Physical parameters, single-excitation Hamiltonians, and quench schedules.

Unit conventions used everywhere in this package:

* user-facing frequencies are ordinary frequencies in GHz,
* internal dynamics use angular frequencies in rad/ns (2*pi times the GHz
  value, converted exactly once),
* times are in ns.

The single-excitation basis is {emitter excited + field vacuum} followed by
{emitter ground + one photon at site l}, l = 0..n_sites-1.  The emitter sits
at the central site, index (n_sites - 1) // 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidValueError, MissingKeyError

TWO_PI = 2.0 * math.pi

BOUNDARIES = ("open", "periodic")
FRAMES = ("rotating", "lab")


@dataclass(frozen=True)
class SystemParams:
    """Physical constants of the emitter + resonator-array system.

    Attributes
    ----------
    omega0_ghz : emitter transition frequency (ordinary frequency, GHz).
    omegac_ghz : resonator frequency (GHz).
    hop_ghz : hopping rate between adjacent resonators (GHz).
    g0_ghz : on-state emitter-resonator coupling (GHz).
    n_sites : odd number of resonators; the emitter couples to the middle one.
    boundary : "open" chain or "periodic" ring.
    frame : "rotating" (resonator frequency removed from all levels) or "lab".
    """

    omega0_ghz: float
    omegac_ghz: float
    hop_ghz: float
    g0_ghz: float
    n_sites: int
    boundary: str = "open"
    frame: str = "rotating"

    def __post_init__(self):
        if self.n_sites < 1 or self.n_sites % 2 == 0:
            raise InvalidValueError("n_sites", f"must be a positive odd integer, got {self.n_sites}")
        for key in ("omega0_ghz", "omegac_ghz"):
            if not getattr(self, key) > 0:
                raise InvalidValueError(key, f"must be strictly positive, got {getattr(self, key)}")
        for key in ("hop_ghz", "g0_ghz"):
            if getattr(self, key) < 0:
                raise InvalidValueError(key, f"must be non-negative, got {getattr(self, key)}")
        if self.boundary not in BOUNDARIES:
            raise InvalidValueError("boundary", f"must be one of {BOUNDARIES}, got {self.boundary!r}")
        if self.frame not in FRAMES:
            raise InvalidValueError("frame", f"must be one of {FRAMES}, got {self.frame!r}")

    @property
    def central_site(self) -> int:
        return (self.n_sites - 1) // 2

    # Angular quantities in rad/ns; the 2*pi conversion happens only here.
    @property
    def omega0_rad(self) -> float:
        return TWO_PI * self.omega0_ghz

    @property
    def omegac_rad(self) -> float:
        return TWO_PI * self.omegac_ghz

    @property
    def hop_rad(self) -> float:
        return TWO_PI * self.hop_ghz

    @property
    def detuning_rad(self) -> float:
        """Emitter detuning from the resonator frequency, rad/ns."""
        return TWO_PI * (self.omega0_ghz - self.omegac_ghz)

    @property
    def emitter_diagonal_rad(self) -> float:
        """Diagonal Hamiltonian entry of the emitter row in this frame."""
        return self.omega0_rad if self.frame == "lab" else self.detuning_rad


@dataclass(frozen=True)
class BandInfo:
    """Field dispersion band edges (ordinary frequency, GHz)."""

    band_min_ghz: float
    band_max_ghz: float
    bandwidth_ghz: float


@dataclass(frozen=True)
class QuenchProtocol:
    """Ordered piecewise-constant coupling schedule.

    ``segments`` is a tuple of (duration_ns, coupling_ghz) pairs.  Durations
    are strictly positive; the schedule is non-empty.
    """

    segments: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.segments) == 0:
            raise InvalidValueError("segments", "protocol must contain at least one segment")
        for i, (d, g) in enumerate(self.segments):
            if not d > 0:
                raise InvalidValueError("duration_ns", f"segment {i} duration must be positive, got {d}")
            if g < 0:
                raise InvalidValueError("coupling_ghz", f"segment {i} coupling must be non-negative, got {g}")

    @property
    def total_duration_ns(self) -> float:
        return sum(d for d, _ in self.segments)

    @property
    def durations_ns(self) -> tuple[float, ...]:
        return tuple(d for d, _ in self.segments)

    @property
    def couplings_ghz(self) -> tuple[float, ...]:
        return tuple(g for _, g in self.segments)

    def boundaries_ns(self) -> np.ndarray:
        """Cumulative segment end times (running float sums)."""
        ends = np.empty(len(self.segments))
        acc = 0.0
        for i, (d, _) in enumerate(self.segments):
            acc = acc + d
            ends[i] = acc
        return ends

    def segment_index_at(self, t_ns: float) -> int:
        """Segment active at time t, right-continuous: g(t) on [t_i, t_{i+1})."""
        idx = int(np.searchsorted(self.boundaries_ns(), t_ns, side="right"))
        return min(idx, len(self.segments) - 1)

    def coupling_at(self, t_ns: float) -> float:
        return self.segments[self.segment_index_at(t_ns)][1]


@dataclass
class StateVector:
    """Single-excitation amplitudes at one time stamp.

    ``c_emitter`` is the excited-emitter amplitude; ``c_sites[l]`` is the
    one-photon amplitude of resonator l.
    """

    c_emitter: complex
    c_sites: np.ndarray
    time_ns: float = 0.0

    @classmethod
    def emitter_excited(cls, n_sites: int, time_ns: float = 0.0) -> "StateVector":
        return cls(1.0 + 0.0j, np.zeros(n_sites, dtype=complex), time_ns)

    @classmethod
    def from_array(cls, amplitudes: np.ndarray, time_ns: float) -> "StateVector":
        amplitudes = np.asarray(amplitudes, dtype=complex)
        return cls(complex(amplitudes[0]), amplitudes[1:].copy(), time_ns)

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.c_emitter], self.c_sites))

    def norm_sq(self) -> float:
        return abs(self.c_emitter) ** 2 + float(np.sum(np.abs(self.c_sites) ** 2))

    def central_amplitude(self) -> complex:
        return complex(self.c_sites[(len(self.c_sites) - 1) // 2])

    def validate_normalized(self, tol: float = 1e-10) -> None:
        drift = abs(self.norm_sq() - 1.0)
        if drift > tol:
            raise InvalidValueError("state", f"norm deviates from 1 by {drift:.3e} (tol {tol:.1e})")


_REQUIRED_KEYS = ("omega0_ghz", "omegac_ghz", "hop_ghz", "g0_ghz", "n_sites")
_OPTIONAL_KEYS = {"boundary": "open", "frame": "rotating"}


def _parse_number(key: str, value) -> float:
    if isinstance(value, bool):
        raise InvalidValueError(key, f"expected a number, got boolean {value!r}")
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidValueError(key, f"expected a number, got {value!r}") from None
    if not math.isfinite(number):
        raise InvalidValueError(key, f"must be finite, got {number}")
    return number


def build_params(raw_config: Mapping) -> SystemParams:
    """Validate a flat key-value configuration into :class:`SystemParams`.

    Required keys: omega0_ghz, omegac_ghz, hop_ghz, g0_ghz, n_sites.
    Optional: boundary (default "open"), frame (default "rotating").
    Unknown keys are ignored.
    """
    values = {}
    for key in _REQUIRED_KEYS:
        if key not in raw_config:
            raise MissingKeyError(key)
        values[key] = _parse_number(key, raw_config[key])
    n_sites = values["n_sites"]
    if n_sites != int(n_sites):
        raise InvalidValueError("n_sites", f"must be an integer, got {raw_config['n_sites']!r}")
    values["n_sites"] = int(n_sites)
    for key, default in _OPTIONAL_KEYS.items():
        value = raw_config.get(key, default)
        if not isinstance(value, str):
            raise InvalidValueError(key, f"expected a string, got {value!r}")
        values[key] = value
    return SystemParams(**values)


def assemble_hamiltonian(params: SystemParams, coupling_ghz: float) -> np.ndarray:
    """Real symmetric single-excitation Hamiltonian, dimension n_sites + 1.

    Row 0 is the emitter; rows 1..n_sites are the resonator sites in order.
    In the rotating frame the emitter diagonal is the detuning and site
    diagonals are zero; in the lab frame the resonator frequency is added to
    every diagonal entry.  Entries are angular frequencies in rad/ns.
    """
    if coupling_ghz < 0:
        raise InvalidValueError("coupling_ghz", f"must be non-negative, got {coupling_ghz}")
    n = params.n_sites
    dim = n + 1
    hop = params.hop_rad
    h = np.zeros((dim, dim))
    h[0, 0] = params.detuning_rad
    for l in range(n - 1):
        h[1 + l, 2 + l] = -hop
        h[2 + l, 1 + l] = -hop
    if params.boundary == "periodic" and n >= 3:
        h[1, n] = -hop
        h[n, 1] = -hop
    center = 1 + params.central_site
    g = TWO_PI * coupling_ghz
    h[0, center] = g
    h[center, 0] = g
    if params.frame == "lab":
        h[np.diag_indices(dim)] += params.omegac_rad
    return h


def band_info(params: SystemParams) -> BandInfo:
    """Dispersion band edges of the resonator field, GHz."""
    half_width = 2.0 * params.hop_ghz
    return BandInfo(
        band_min_ghz=params.omegac_ghz - half_width,
        band_max_ghz=params.omegac_ghz + half_width,
        bandwidth_ghz=4.0 * params.hop_ghz,
    )


def _normalize_segments(raw: Iterable[tuple[float, float]]) -> QuenchProtocol:
    """Drop zero-duration segments and merge consecutive equal couplings."""
    merged: list[list[float]] = []
    for d, g in raw:
        if d == 0:
            continue
        if merged and merged[-1][1] == g:
            merged[-1][0] += d
        else:
            merged.append([d, g])
    return QuenchProtocol(tuple((d, g) for d, g in merged))


def protocol_segments(
    kind: str,
    tau_ns: float | None = None,
    delta_ns: float | None = None,
    cycles: int | None = None,
    total_ns: float | None = None,
    g0_ghz: float = 0.0,
) -> QuenchProtocol:
    """Build the coupling schedule for one of the three run kinds.

    free
        one segment (total_ns, g0).
    single_quench
        (tau, g0), (delta, 0), (tau, g0); a zero delta collapses to the
        un-quenched (2*tau, g0).
    periodic
        ``cycles`` repetitions of (tau, g0), (delta, 0) plus a final
        (tau, g0), so the run ends on an on-segment.
    """
    if g0_ghz < 0:
        raise InvalidValueError("g0_ghz", f"must be non-negative, got {g0_ghz}")
    if kind == "free":
        if total_ns is None or not total_ns > 0:
            raise InvalidValueError("total_ns", f"must be positive for a free run, got {total_ns}")
        return _normalize_segments([(float(total_ns), g0_ghz)])
    if tau_ns is None or not tau_ns > 0:
        raise InvalidValueError("tau_ns", f"quench-on time must be positive, got {tau_ns}")
    if delta_ns is None or delta_ns < 0:
        raise InvalidValueError("delta_ns", f"quench-off time must be non-negative, got {delta_ns}")
    tau = float(tau_ns)
    delta = float(delta_ns)
    if kind == "single_quench":
        return _normalize_segments([(tau, g0_ghz), (delta, 0.0), (tau, g0_ghz)])
    if kind == "periodic":
        if cycles is None or cycles < 1:
            raise InvalidValueError("cycles", f"must be at least 1, got {cycles}")
        raw: list[tuple[float, float]] = []
        for _ in range(int(cycles)):
            raw.append((tau, g0_ghz))
            raw.append((delta, 0.0))
        raw.append((tau, g0_ghz))
        return _normalize_segments(raw)
    raise InvalidValueError("kind", f"unknown protocol kind {kind!r}")
