"""Render mzherald figure CSVs to images.

All heatmaps share one fixed colormap with the C_avg range pinned to
[0, 1] so panels are comparable across figures.  Rendering is read-only
over the CSVs and deterministic for a fixed matplotlib version.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipes import SCHEMAS, FigureRecipe, load_table

HEATMAP_CMAP = "viridis"
HEATMAP_RANGE = (0.0, 1.0)


def _series(table, group_cols):
    """Split a long-format table into {group-key: row-index array}."""
    keys = list(zip(*(table[c] for c in group_cols)))
    groups = {}
    for i, key in enumerate(keys):
        groups.setdefault(key, []).append(i)
    return groups


def _line_panel(ax, table, x_col, y_col, group_cols, label_fmt):
    for key, idx in _series(table, group_cols).items():
        x = np.array([table[x_col][i] for i in idx])
        y = np.array([table[y_col][i] for i in idx])
        order = np.argsort(x)
        ax.plot(x[order], y[order], label=label_fmt(key))
    ax.set_xlabel(x_col)
    ax.set_ylabel(y_col)
    ax.legend(fontsize=7)


def _heatmap(ax, table, value_col="c_avg_max"):
    deltas = np.unique(table["delta_over_g1"])
    gammas = np.unique(table["g2_over_g1"])
    grid = np.full((len(deltas), len(gammas)), np.nan)
    di = {v: i for i, v in enumerate(deltas)}
    gj = {v: j for j, v in enumerate(gammas)}
    for d, g, v in zip(table["delta_over_g1"], table["g2_over_g1"],
                       table[value_col]):
        grid[di[d], gj[g]] = v
    vmin, vmax = HEATMAP_RANGE if value_col == "c_avg_max" else \
        (float(np.nanmin(grid)), float(np.nanmax(grid)))
    mesh = ax.pcolormesh(gammas, deltas, grid, cmap=HEATMAP_CMAP,
                         vmin=vmin, vmax=vmax, shading="nearest")
    ax.set_xlabel("g2_over_g1")
    ax.set_ylabel("delta_over_g1")
    return mesh


def _save(fig, recipe):
    recipe.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(recipe.output, dpi=150)
    plt.close(fig)
    return recipe.output


def render(recipe: FigureRecipe):
    """Render one figure id; returns the written image path."""
    tables = [load_table(p, recipe.columns) for p in recipe.csv_paths]
    fid = recipe.figure_id

    if fid in ("2b", "3a", "2c", "2d", "3b", "3c", "3d"):
        fig, ax = plt.subplots(figsize=(5, 3.4), constrained_layout=True)
        t = tables[0]
        if fid == "2b":
            _line_panel(ax, t, "omega_minus_E1_ueV", "c_avg",
                        ["gamma_ueV", "beta"],
                        lambda k: f"Gamma={k[0]:g}, beta={k[1]:g}")
        elif fid == "3a":
            _line_panel(ax, t, "omega_minus_E1_ueV", "c_avg", ["gamma_ueV"],
                        lambda k: f"Gamma={k[0]:g}")
        elif fid == "2c":
            _line_panel(ax, t, "gamma_ueV", "c_avg_max", ["beta"],
                        lambda k: f"beta={k[0]:g}")
        elif fid in ("2d", "3b"):
            _line_panel(ax, t, "sigma_ueV", "c_avg", ["profile"],
                        lambda k: k[0])
            ax.set_xscale("log")
        elif fid == "3c":
            _line_panel(ax, t, "beta", "c_avg", ["input"],
                        lambda k: f"|{k[0]}>")
        else:  # 3d
            _line_panel(ax, t, "delta_over_gamma", "c_avg_max",
                        ["input", "beta"],
                        lambda k: f"|{k[0]}>, beta={k[1]:g}")
        ax.set_ylim(0.0, 1.02)
        ax.set_title(f"figure {fid}")
        return _save(fig, recipe)

    if fid == "4":
        fig, axes = plt.subplots(2, 2, figsize=(7.5, 6.5),
                                 constrained_layout=True)
        names = SCHEMAS["4"][0]
        mesh = None
        for ax, name, t in zip(axes.flat, names, tables):
            mesh = _heatmap(ax, t)
            ax.set_title(f"figure {name}")
        fig.colorbar(mesh, ax=axes, label="c_avg_max", shrink=0.85)
        return _save(fig, recipe)

    if fid in ("4a", "4b", "4c", "4d"):
        fig, ax = plt.subplots(figsize=(4.4, 3.6), constrained_layout=True)
        mesh = _heatmap(ax, tables[0])
        fig.colorbar(mesh, ax=ax, label="c_avg_max")
        ax.set_title(f"figure {fid}")
        return _save(fig, recipe)

    # S1: one heatmap per |n,m>; S2: omega_opt maps
    names = SCHEMAS[fid][0]
    value_col = "omega_opt" if fid == "S2" else "c_avg_max"
    ncols = 2 if fid == "S2" else 4
    nrows = -(-len(names) // ncols)
    fig, axes = plt.subplots(nrows, ncols,
                             figsize=(3.2 * ncols, 2.8 * nrows),
                             constrained_layout=True, squeeze=False)
    for ax in axes.flat[len(names):]:
        ax.set_visible(False)
    mesh = None
    for ax, name, t in zip(axes.flat, names, tables):
        mesh = _heatmap(ax, t, value_col)
        ax.set_title(name)
    fig.colorbar(mesh, ax=axes, label=value_col, shrink=0.8)
    return _save(fig, recipe)
