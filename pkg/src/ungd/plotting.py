"""Render reproduction results to image files with matplotlib.

Uses ``matplotlib.figure.Figure`` directly, so no GUI backend or pyplot
state is involved.
"""

from pathlib import Path

import numpy as np


def _figure(nrows=1, ncols=1, width=9.0, height=None):
    from matplotlib.figure import Figure

    height = height or 3.2 * nrows
    fig = Figure(figsize=(width, height), layout="constrained")
    axes = fig.subplots(nrows, ncols, squeeze=False)
    return fig, axes.ravel()


def _col(table, name):
    return table.rows[:, table.columns.index(name)]


def _plot_stability(result, title):
    t = result.tables["stability"]
    fig, (ax,) = _figure(height=3.6)
    for j, name in enumerate(t.columns[1:], 1):
        ax.plot(t.rows[:, 0], t.rows[:, j], lw=1, label=name)
    ax.axhline(0, color="k", lw=0.6)
    ax.set_xlabel("normalized frequency f")
    ax.set_ylabel("S(f) / b")
    ax.set_xlim(0, 0.5)
    ax.set_title(title)
    ax.legend(fontsize=7, ncol=2)
    return fig


def plot_fig1(result):
    return _plot_stability(result, "stability spectrum")


def plot_fig2(result):
    return _plot_stability(result, "order 8, truncated coefficient sets")


def plot_fig3(result):
    t = result.tables["integrands"]
    c = result.tables["ccf"]
    fig, (a, b) = _figure(1, 2, height=3.6)
    omega = t.rows[:, 0]
    best = int(_col(c, "lag")[np.argmax(_col(c, "integral"))])
    for j, name in enumerate(t.columns[1:], 1):
        highlighted = name == f"tau={best}"
        a.plot(omega, t.rows[:, j], color="k" if highlighted else "0.75",
               lw=1.5 if highlighted else 0.5, zorder=3 if highlighted else 1)
    a.set_xlabel("omega")
    a.set_ylabel("Re integrand")
    a.set_title(f"integrands, lag {best} highlighted")
    b.plot(_col(c, "lag"), _col(c, "theoretical"), "b-")
    b.axvline(0, color="k", lw=0.6)
    b.set_xlabel("lag")
    b.set_ylabel("C(lag)")
    return fig


def plot_fig4(result):
    t = result.tables["cutoff"]
    fig, (ax,) = _figure(height=3.6)
    ax.plot(_col(t, "m"), _col(t, "f0"), "k.-", label="gain = 3 crossing")
    ax.plot(_col(t, "m"), _col(t, "fit"), "r-", label="rational fit")
    ax.set_xlabel("filter order m")
    ax.set_ylabel("cutoff frequency f0")
    ax.legend()
    return fig


def _plot_prediction(result, n_show=500, theory=True):
    sig = result.tables["signals"]
    ccf = result.tables["ccf"]
    panels = [k for k in ("phase_fit", "psd", "response") if k in result.tables]
    fig, axes = _figure(1 + (len(panels) + 1) // 2, 2)
    a, b = axes[0], axes[1]
    t = _col(sig, "t")[:n_show]
    a.plot(t, _col(sig, "x")[:n_show], "k-", lw=0.8, label="input")
    a.plot(t, _col(sig, "y")[:n_show], "r-", lw=0.8, label="output")
    a.set_xlabel("t")
    a.legend(fontsize=7)
    b.plot(_col(ccf, "lag"), _col(ccf, "empirical"), "k.-", label="data")
    if theory and len(ccf.columns) > 2:
        b.plot(_col(ccf, "lag"), ccf.rows[:, 2], "b-", label="theory")
    b.axvline(0, color="k", lw=0.6)
    b.set_xlabel("lag")
    b.set_ylabel("CCF")
    b.legend(fontsize=7)
    slot = iter(axes[2:])
    if "phase_fit" in result.tables:
        ax = next(slot)
        pf = result.tables["phase_fit"]
        ax.plot(_col(pf, "freq"), _col(pf, "phase_est"), "k.", label="data")
        ax.plot(_col(pf, "freq"), _col(pf, "phase_fit"), "b-", label="linear fit")
        ax.set_xlabel("f")
        ax.set_ylabel("phase")
        ax.legend(fontsize=7)
    if "psd" in result.tables:
        ax = next(slot)
        p = result.tables["psd"]
        ax.semilogy(_col(p, "freq"), np.maximum(_col(p, "density"), 1e-30), "k-")
        ax.set_xlabel("f")
        ax.set_ylabel("power spectral density")
    if "response" in result.tables:
        ax = next(slot)
        r = result.tables["response"]
        f = _col(r, "freq")
        ax.plot(f, _col(r, "gain"), "k-", label="gain")
        ax.plot(f, _col(r, "gain_est"), "k.", ms=3)
        ax.plot(f, _col(r, "phase"), "m-", label="phase")
        ax.plot(f, _col(r, "phase_est"), "m.", ms=3)
        ax.plot(f, _col(r, "tau_g"), "r-", label="group delay")
        ax.plot(f, _col(r, "tau_p"), "g-", label="phase delay")
        ax.set_xlim(0, 0.1)
        ax.set_ylim(-8, 8)
        ax.set_xlabel("f")
        ax.legend(fontsize=7)
    for ax in slot:
        ax.set_visible(False)
    return fig


def plot_fig6(result):
    t = result.tables["sweep"]
    fig, (a, b) = _figure(1, 2, height=3.6)
    m = _col(t, "m")
    a.plot(m, _col(t, "tau_g0"), "bo", ms=3, label="tau_g(0)")
    a.plot(m, _col(t, "argmax_emp"), "ko", ms=3, label="CCF argmax")
    a.set_xlabel("m")
    a.set_ylabel("delay")
    a.legend(fontsize=7)
    b.plot(m, _col(t, "peak_emp"), "o", color="orange", ms=3, label="data")
    b.plot(m, _col(t, "peak_theory"), "ro", ms=3, label="theory")
    b.axvline(18, ls="--", color="k", lw=0.6)
    b.set_xlabel("m")
    b.set_ylabel("peak CCF")
    b.legend(fontsize=7)
    return fig


PLOTTERS = {
    "fig1": plot_fig1,
    "fig2": plot_fig2,
    "fig3": plot_fig3,
    "fig4": plot_fig4,
    "fig5": _plot_prediction,
    "fig6": plot_fig6,
    "fig7": _plot_prediction,
    "fig8": _plot_prediction,
    "fig9": _plot_prediction,
    "fig10": _plot_prediction,
}


def render(result, outdir, fmt="png", dpi=120):
    """Save the figure for ``result`` under ``outdir``; returns the path or None."""
    if result.skipped is not None or result.figure not in PLOTTERS:
        return None
    fig = PLOTTERS[result.figure](result)
    fig.suptitle(result.headline(), fontsize=8)
    path = Path(outdir) / f"{result.figure}.{fmt}"
    fig.savefig(path, dpi=dpi)
    return path
