"""Figure rendering for the CLI report paths.

Every figure lands next to the delimited output as a PNG.  The heatmaps use
a green-black-red diverging map: positive values red, negative green,
brightness proportional to magnitude, matching the raster writers.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LinearSegmentedColormap

REDGREEN = LinearSegmentedColormap.from_list(
    "redgreen_dark",
    [(0.0, (0.0, 0.85, 0.0)), (0.5, (0.0, 0.0, 0.0)), (1.0, (0.9, 0.0, 0.0))],
)

_DPI = 150


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_heatmap(path, thetas, phis, values, title: str | None = None) -> None:
    values = np.asarray(values)
    peak = np.abs(values).max() or 1.0
    fig, ax = plt.subplots(figsize=(6, 3.2))
    im = ax.imshow(
        values,
        cmap=REDGREEN,
        vmin=-peak,
        vmax=peak,
        origin="upper",
        extent=(phis[0], phis[-1], thetas[-1], thetas[0]),
        aspect="auto",
    )
    ax.set_xlabel(r"$\phi$")
    ax.set_ylabel(r"$\theta$")
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax)
    _finish(fig, path)


def save_parity_plot(path, m_values, diag, label: str) -> None:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.axhline(0.0, color="0.8", lw=0.8)
    ax.plot(m_values, diag, "o-", ms=4)
    ax.set_xlabel("m")
    ax.set_ylabel("weight")
    ax.set_title(label)
    _finish(fig, path)


def save_error_histograms(path, report) -> None:
    """One histogram panel per repetition count, with the fitted density."""
    by_rep = report.results.get("by_repetitions", {})
    reps = sorted(by_rep, key=lambda k: int(k))
    if not reps:
        return
    fig, axes = plt.subplots(1, len(reps), figsize=(3.4 * len(reps), 3.0), squeeze=False)
    for ax, rep in zip(axes[0], reps):
        entry = by_rep[rep]
        errs = np.asarray(entry["errors"])
        ax.hist(errs, bins=30, density=True, color="#74a9cf", edgecolor="white")
        pdf = None
        if "lognormal_mu" in entry and entry["lognormal_sigma"] > 0:
            mu, sig = entry["lognormal_mu"], entry["lognormal_sigma"]
            xs = np.linspace(max(errs.min(), 1e-12), errs.max(), 200)
            pdf = np.exp(-((np.log(xs) - mu) ** 2) / (2 * sig**2)) / (
                xs * sig * math.sqrt(2 * math.pi)
            )
        elif "gaussian_mu" in entry and entry["gaussian_sigma"] > 0:
            mu, sig = entry["gaussian_mu"], entry["gaussian_sigma"]
            xs = np.linspace(errs.min(), errs.max(), 200)
            pdf = np.exp(-((xs - mu) ** 2) / (2 * sig**2)) / (sig * math.sqrt(2 * math.pi))
        if pdf is not None:
            ax.plot(xs, pdf, "k-", lw=1.2)
        ax.set_title(f"$N_r = {rep}$")
        ax.set_xlabel("relative error")
    _finish(fig, path)


def save_scaling_plot(path, report) -> None:
    by_rep = report.results.get("by_repetitions", {})
    scaling = report.results.get("scaling", {})
    reps = sorted((int(k) for k in by_rep), key=int)
    if len(reps) < 2:
        return
    if report.mode == "full":
        stat = [by_rep[str(n)]["mean"] for n in reps]
        label = "mean relative $L^2$ error"
        slope = scaling.get("mean_slope")
    else:
        stat = [by_rep[str(n)]["gaussian_sigma"] for n in reps]
        label = r"fitted $\sigma$"
        slope = scaling.get("sigma_slope")
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.loglog(reps, stat, "o-")
    if slope is not None:
        ref = stat[0] * (np.asarray(reps, dtype=float) / reps[0]) ** slope
        ax.loglog(reps, ref, "k--", lw=0.9, label=f"slope {slope:.3f}")
        ax.legend()
    ax.set_xlabel("$N_r$")
    ax.set_ylabel(label)
    _finish(fig, path)


def save_compare_grid(path, report) -> None:
    """3x3 panel of error histograms: rows reconstruct, columns target."""
    cells = report.results.get("cells", {})
    labels = ("P", "W", "Q")
    fig, axes = plt.subplots(3, 3, figsize=(9, 7.5))
    for i, rec in enumerate(labels):
        for j, tgt in enumerate(labels):
            ax = axes[i][j]
            cell = cells.get(f"{rec}->{tgt}")
            if cell is None:
                continue
            errs = np.asarray(cell["pointwise_errors"])
            color = "#2ca02c" if rec == tgt else "#d62728"
            ax.hist(errs, bins=25, density=True, color=color, alpha=0.8)
            ax.set_title(
                rf"{rec}$\to${tgt}  $\sigma$={cell['pointwise_sigma']:.3g}", fontsize=9
            )
            if i == 2:
                ax.set_xlabel("error at (0,0)")
    _finish(fig, path)


def save_convergence_plot(path, j_values, errors, label: str) -> None:
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.semilogy(j_values, errors, "o-")
    ax.set_xlabel("J")
    ax.set_ylabel("max |spin - planar|")
    ax.set_title(label)
    _finish(fig, path)
