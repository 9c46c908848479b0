"""Figure renderers: one function per figure_id, dispatched by render().

Marker/color vocabulary is kept consistent across figures (red circles,
green squares, blue triangles, solid black theory curves) so different
data series are immediately distinguishable.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .bundle import FIGURE_IDS, BundleError, FigureBundle, load_bundle

SERIES_STYLES = [("red", "o"), ("green", "s"), ("blue", "^"),
                 ("purple", "D"), ("darkorange", "v")]


def _heatmap(ax, x, y, z, x_label, y_label):
    """Scatter-style heatmap on the (possibly irregular) (x, y) grid."""
    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.zeros((len(ys), len(xs)))
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    grid[yi, xi] = z
    extent = [xs.min(), xs.max(), ys.min(), ys.max()]
    im = ax.imshow(grid, origin="lower", aspect="auto", extent=extent,
                   cmap="inferno",
                   norm=matplotlib.colors.PowerNorm(0.4,
                                                    vmax=max(grid.max(), 1e-12)))
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    return im


def _render_fig1a(bundle: FigureBundle, fig):
    heat = bundle.table("heatmap.csv")
    cur = bundle.table("current.csv")
    ax_top, ax_bot = fig.subplots(2, 1, sharex=True)
    im = _heatmap(ax_top, heat.column("offset_us"), heat.column("n"),
                  heat.column("probability"),
                  "", bundle.axes.get("y", "momentum"))
    fig.colorbar(im, ax=ax_top, label="probability")
    x = cur.column("offset_us")
    ax_bot.plot(x, cur.column("current"), "o", color="red", ms=4,
                label="quantum")
    pred = cur.column("predicted_current")
    ok = np.isfinite(pred)
    order = np.argsort(x[ok])
    ax_bot.plot(x[ok][order], pred[ok][order], "-", color="black", lw=1,
                label="pendulum theory")
    ax_bot.axhline(0.0, color="gray", lw=0.5)
    ax_bot.set_xlabel(bundle.axes.get("x", "pulse period offset (us)"))
    ax_bot.set_ylabel("current")
    ax_bot.legend(frameon=False)


def _render_fig1b(bundle: FigureBundle, fig):
    heat = bundle.table("heatmap.csv")
    cur = bundle.table("current.csv")
    ax_top, ax_bot = fig.subplots(2, 1, sharex=True)
    im = _heatmap(ax_top, heat.column("kick"), heat.column("n"),
                  heat.column("probability"),
                  "", bundle.axes.get("y", "momentum"))
    fig.colorbar(im, ax=ax_top, label="probability")
    t = cur.column("kick")
    ax_bot.plot(t, cur.column("current"), "o", color="red", ms=4,
                label="quantum")
    ax_bot.plot(t, cur.column("resonant_line"), "--", color="gray", lw=1,
                label="resonant ramp")
    ax_bot.plot(t, cur.column("predicted_current"), "-", color="black", lw=1,
                label="pendulum theory")
    ax_bot.set_xlabel(bundle.axes.get("x", "kick number"))
    ax_bot.set_ylabel("current")
    ax_bot.legend(frameon=False)


def _render_fig2(bundle: FigureBundle, fig):
    scaled = bundle.table("scaled.csv")
    theory = bundle.table("theory.csv")
    ax = fig.subplots()
    labels = scaled.column("set")
    x = scaled.column("x")
    y = scaled.column("scaled_current")
    for i, name in enumerate(sorted(set(labels))):
        color, marker = SERIES_STYLES[i % len(SERIES_STYLES)]
        sel = labels == name
        ax.scatter(x[sel], y[sel], s=18, marker=marker, facecolors="none",
                   edgecolors=color, label=name)
    ax.plot(theory.column("x"), theory.column("F_over_x"), "-",
            color="black", lw=1.2, label="F(x)/x")
    ax.axhline(0.0, color="gray", lw=0.5)
    ax.set_xlabel(bundle.axes.get("x", "x"))
    ax.set_ylabel(bundle.axes.get("y", "scaled mean momentum"))
    ax.legend(frameon=False, fontsize=7)


def _render_fig3(bundle: FigureBundle, fig):
    currents = bundle.table("currents.csv")
    theory = bundle.table("theory.csv")
    ax = fig.subplots()
    eps_col = currents.column("eps")
    for i, eps in enumerate(sorted(set(eps_col))):
        color, marker = SERIES_STYLES[i % len(SERIES_STYLES)]
        sel = eps_col == eps
        ax.plot(currents.column("kick")[sel], currents.column("current")[sel],
                marker, color=color, ms=5, label=f"|eps| = {eps:g}")
        tsel = ((theory.column("series") == "pendulum")
                & (theory.column("eps") == eps))
        ax.plot(theory.column("kick")[tsel], theory.column("value")[tsel],
                "-", color=color, lw=0.8)
    rsel = theory.column("series") == "resonant"
    ax.plot(theory.column("kick")[rsel], theory.column("value")[rsel],
            "--", color="black", lw=1, label="resonant ramp")
    dsel = theory.column("series") == "delta_beta_formula"
    ax.plot(theory.column("kick")[dsel], theory.column("value")[dsel],
            "-", color="black", lw=1.2, label="finite-spread formula")
    ax.set_xlabel(bundle.axes.get("x", "kick number"))
    ax.set_ylabel(bundle.axes.get("y", "momentum current"))
    ax.legend(frameon=False, fontsize=7)


_RENDERERS = {"fig1a": _render_fig1a, "fig1b": _render_fig1b,
              "fig2a": _render_fig2, "fig2b": _render_fig2,
              "fig3": _render_fig3}


def render(figure_id: str, bundle_dir, out_path) -> Path:
    """Render one bundle to an image file (format from the suffix).

    The bundle is validated first; nothing is written unless validation
    succeeds and the figure_id matches the bundle.
    """
    if figure_id not in FIGURE_IDS:
        raise BundleError(f"unknown figure_id {figure_id!r}, expected one "
                          f"of {', '.join(FIGURE_IDS)}")
    bundle = load_bundle(bundle_dir)
    if bundle.figure_id != figure_id:
        raise BundleError(f"requested {figure_id!r} but bundle contains "
                          f"{bundle.figure_id!r}")
    out_path = Path(out_path)
    fig = plt.figure(figsize=(6.0, 4.5), dpi=150)
    try:
        _RENDERERS[figure_id](bundle, fig)
        fig.tight_layout()
        out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_path)
    finally:
        plt.close(fig)
    return out_path
