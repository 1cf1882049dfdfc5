"""Figures for run reports.

Every function takes a report dict (as written by the CLI) and a path, and
writes one PNG.  The Agg backend is forced so this works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

golden_mean = (np.sqrt(5) - 1.0) / 2.0

params = {
    "axes.labelsize": 10,
    "font.size": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "figure.dpi": 120,
    "savefig.bbox": "tight",
}


def new_figure(width=5.0, ratio=golden_mean, ncols=1):
    with matplotlib.rc_context(params):
        fig, axes = plt.subplots(1, ncols, figsize=(width, width * ratio))
    return fig, axes


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context(params):
        fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def _loop_curve(rec, samples=200):
    from .report import loop_from_record
    from .loops import evaluate

    return evaluate(loop_from_record(rec), samples)


def plot_orbits(report: dict, path):
    """Orbits on the fundamental cell, projected to the first symplectic pair."""
    S = report["orbits"]
    fig, ax = new_figure(4.0, 1.0)
    acts = [o["action"] for o in S["orbits"]]
    for o in S["orbits"]:
        xy = _loop_curve(o["loop"])
        ax.plot(xy[:, 0], xy[:, 1], color="0.4", lw=0.8)
    if S["orbits"]:
        x0 = np.array([o["x0"][:2] for o in S["orbits"]])
        sc = ax.scatter(x0[:, 0], x0[:, 1], c=acts, cmap="viridis", zorder=3)
        fig.colorbar(sc, ax=ax, label="action")
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(-0.05, 1.05)
    ax.set_aspect("equal")
    ax.set_xlabel("$q_1$")
    ax.set_ylabel("$p_1$")
    ax.set_title(f"{S['count']} orbits")
    return _save(fig, path)


def plot_trajectory(report: dict, path):
    rows = report["trajectory"]["rows"]
    t = [r["t"] for r in rows]
    fig, (a1, a2) = new_figure(7.0, 0.35, ncols=2)
    a1.plot(t, [r["action"] for r in rows])
    a1.set_xlabel("flow time")
    a1.set_ylabel("action")
    a2.plot(t, [r["norm"] for r in rows])
    a2.set_xlabel("flow time")
    a2.set_ylabel("$H^{1/2}$ norm")
    return _save(fig, path)


def plot_homotopy(report: dict, path):
    steps = report["homotopy"]["steps"]
    lam = [s["lambda"] for s in steps]
    fig, (a1, a2) = new_figure(7.0, 0.35, ncols=2)
    a1.plot(lam, [s["count"] for s in steps], "o-")
    a1.axhline(report["homotopy"]["lower_bound"], color="crimson", ls="--", label="$2n+1$")
    for s in steps:
        if s["degenerate"]:
            a1.annotate("degenerate", (s["lambda"], s["count"]), fontsize=7)
    a1.set_xlabel(r"$\lambda$")
    a1.set_ylabel("orbits")
    a1.legend()
    a2.semilogy(lam, [max(s["max_norm"], 1e-16) for s in steps], "o-", label="max orbit norm")
    if "bound" in report:
        a2.axhline(report["bound"]["R"], color="crimson", ls="--", label="$R$")
    a2.set_xlabel(r"$\lambda$")
    a2.legend()
    return _save(fig, path)


def plot_filtration(report: dict, path):
    F = report["filtration"]
    fig, ax = new_figure(4.0, 0.8)
    for c, size in zip(F["critical_values"], F["group_sizes"]):
        ax.hlines(c, 0, size, color="k")
        ax.plot(range(1, size + 1), [c] * size, "o", color="k")
    for b in F["regular_values"]:
        if b is not None:
            ax.axhline(b, color="0.6", ls=":")
    ax.set_xlabel("orbits at level")
    ax.set_ylabel("action")
    ax.set_title(f"k = {F['k']} critical values")
    return _save(fig, path)


FIGURES = {
    "orbits": plot_orbits,
    "trajectory": plot_trajectory,
    "homotopy": plot_homotopy,
    "filtration": plot_filtration,
}


def render_all(report: dict, directory) -> list:
    """Write every figure the report has data for; returns the paths."""
    out = []
    for key, fn in FIGURES.items():
        if key in report and report[key] is not None:
            out.append(fn(report, Path(directory) / f"{key}.png"))
    return out
