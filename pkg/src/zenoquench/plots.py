"""Matplotlib figure rendering for the CLI report path.

Figures are written next to the delimited data files; they are a convenience
view, the CSVs remain the primary output.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import FreeDecayResult, SingleQuenchResult, ZenoRunResult
from .model import TWO_PI, SystemParams, assemble_hamiltonian, band_info
from .observables import BoundStateReport
from .propagator import eig_sym


def _save(fig, path: Path) -> str:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path.name


def plot_free_decay(result: FreeDecayResult, out_dir: Path) -> list[str]:
    written = []
    fit = result.zeno_fit
    t = result.times_ns

    fig, (ax_full, ax_zoom) = plt.subplots(1, 2, figsize=(9, 3.4))
    ax_full.plot(t, result.survival, "k-", lw=1.2)
    ax_full.set_xlabel("t (ns)")
    ax_full.set_ylabel("P(t)")
    ax_full.set_title("emitter survival")
    zoom_end = min(3 * fit.window_ns, t[-1]) if fit is not None else t[-1]
    zoom = t <= zoom_end
    ax_zoom.plot(t[zoom], result.survival[zoom], "k-", lw=1.2, label="simulation")
    if fit is not None:
        tt = np.linspace(0.0, zoom_end, 200)
        ax_zoom.plot(tt, 1 - (tt / fit.tau_z_ns) ** 2, "b--", lw=1.0, label=f"1-(t/{fit.tau_z_ns:.2f})$^2$")
        ax_zoom.legend(fontsize=8)
    ax_zoom.set_xlabel("t (ns)")
    ax_zoom.set_title("short-time quadratic decay")
    written.append(_save(fig, out_dir / "population.png"))

    pops = result.site_populations
    fig, ax = plt.subplots(figsize=(6, 3.6))
    im = ax.imshow(
        pops.T,
        aspect="auto",
        origin="lower",
        extent=(t[0], t[-1], 0, pops.shape[1] - 1),
        cmap="magma",
    )
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("site index")
    ax.set_title("photon population over the array")
    fig.colorbar(im, ax=ax, label=r"$|c_l|^2$")
    written.append(_save(fig, out_dir / "sites.png"))

    rates = result.rates
    fig, (ax_o, ax_g) = plt.subplots(2, 1, figsize=(6, 4.6), sharex=True)
    ax_o.plot(rates.times_ns, rates.omega_shift / TWO_PI, "-", lw=1.0)
    ax_o.set_ylabel("shift (GHz)")
    ax_o.set_title(f"level shift and decay rate ({rates.frame} frame)")
    ax_g.plot(rates.times_ns, rates.gamma, "-", lw=1.0)
    ax_g.set_ylabel(r"decay rate (ns$^{-1}$)")
    ax_g.set_xlabel("t (ns)")
    written.append(_save(fig, out_dir / "rates.png"))
    return written


def plot_single_quench(result: SingleQuenchResult, out_dir: Path) -> list[str]:
    fig, (ax_p, ax_c) = plt.subplots(2, 1, figsize=(6, 4.8), sharex=True)
    off = result.coupling_ghz == 0
    for ax, series, label in ((ax_p, result.survival, "P(t)"), (ax_c, result.concurrence, "C(t)")):
        ax.plot(result.times_ns, series, "k-", lw=1.2)
        if np.any(off):
            t_off = result.times_ns[off]
            ax.axvspan(t_off[0], t_off[-1], color="0.85", zorder=0)
        ax.set_ylabel(label)
    ax_c.set_xlabel("t (ns)")
    ax_p.set_title(f"single quench: tau={result.tau_ns:g} ns, delta={result.delta_ns:g} ns")
    return [_save(fig, out_dir / "quench.png")]


def plot_periodic_quench(result: ZenoRunResult, out_dir: Path) -> list[str]:
    fig, (ax_p, ax_c) = plt.subplots(2, 1, figsize=(6.4, 5.2))
    ax_p.plot(result.on_time_axis_ns, result.p_free, "o-", ms=2.5, lw=0.8, color="tab:red", label="no measurement")
    ax_p.plot(result.on_time_axis_ns, result.p_quench, "^-", ms=2.5, lw=0.8, color="black", label="periodic quench")
    ends = result.stage_end_indices
    ax_p.plot(result.on_time_axis_ns[ends], result.p_ideal[ends], "s", ms=4, color="tab:blue", label="ideal measurement")
    ax_p.set_xlabel("quench-on time (ns)")
    ax_p.set_ylabel("survival")
    ax_p.set_title(f"verdict: {result.verdict} (tau={result.tau_ns:g} ns, delta={result.delta_ns:g} ns)")
    ax_p.legend(fontsize=8)
    ax_c.plot(result.full_times_ns, result.concurrence_full, "k-", lw=0.9)
    ax_c.set_xlabel("t (ns), full timeline")
    ax_c.set_ylabel("C(t)")
    return [_save(fig, out_dir / "zeno.png")]


def plot_bound_state(report: BoundStateReport, params: SystemParams, out_dir: Path) -> list[str]:
    eig = eig_sym(assemble_hamiltonian(params, params.g0_ghz), params.g0_ghz)
    offset = params.omegac_ghz if params.frame == "rotating" else 0.0
    energies = eig.eigenvalues / TWO_PI + offset
    weights = eig.eigenvectors[0, :] ** 2
    band = band_info(params)
    fig, ax = plt.subplots(figsize=(6, 3.4))
    ax.axvspan(band.band_min_ghz, band.band_max_ghz, color="0.9", label="field band")
    markerline, stemlines, _ = ax.stem(energies, weights)
    plt.setp(markerline, markersize=3)
    plt.setp(stemlines, linewidth=0.8)
    ax.axvline(params.omega0_ghz, color="tab:red", ls=":", lw=1.0, label="emitter frequency")
    ax.set_yscale("log")
    ax.set_xlabel("eigenfrequency (GHz)")
    ax.set_ylabel("emitter weight")
    ax.set_title(f"bound state: {'yes' if report.exists else 'no'}, trapped prediction {report.trapped_population_prediction:.3f}")
    ax.legend(fontsize=8)
    return [_save(fig, out_dir / "bound_state.png")]
