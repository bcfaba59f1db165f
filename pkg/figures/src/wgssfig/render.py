"""Render the shipped figures from wgss result tables.

Each ``render_*`` function reads the CSV tables produced by one experiment
config (``fig1b`` ... ``fig4``) from a tables directory and writes one PNG
to an output directory.  ``main`` exposes them as a command-line tool:

    wgss-figures --tables build/tables --out build/figures [fig1b fig2 ...]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .tables import Table, TableSchemaError, read_table, require_columns

__all__ = [
    "render_fig1b",
    "render_fig1c",
    "render_fig2",
    "render_fig3",
    "render_fig4",
    "main",
]

FIGURES = ("fig1b", "fig1c", "fig2", "fig3", "fig4")


def _save(fig, out_dir: Path, name: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _plot_trajectories(table: Table, series_labels: dict[str, str],
                       title: str) -> "plt.Figure":
    require_columns(table, ["t"])
    cols = table.prefixed_columns("inv_xi")
    if not cols:
        raise TableSchemaError(
            f"table {table.name!r} has no 'inv_xi' columns to plot")
    t = table.column("t")
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for col in cols:
        key = col[len("inv_xi["):-1] if col.startswith("inv_xi[") else col
        ax.plot(t, table.column(col), label=series_labels.get(key, key))
    ax.axhline(1.0, color="0.5", lw=0.8, ls=":")
    ax.set_xlabel(r"$At$")
    ax.set_ylabel(r"$1/\xi^2$")
    ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return fig


def render_fig1b(tables_dir: Path, out_dir: Path) -> Path:
    """Squeezing trajectories for several squeezing strengths r."""
    table = read_table(tables_dir / "fig1b_trajectory.csv")
    labels = {f"r{r}": rf"$r={r}$" for r in ("0.1", "0.5", "1.0", "1.5")}
    fig = _plot_trajectories(table, labels, "Squeezing versus reservoir strength")
    return _save(fig, out_dir, "fig1b")


def render_fig1c(tables_dir: Path, out_dir: Path) -> Path:
    """Squeezing trajectories from different initial Dicke states."""
    table = read_table(tables_dir / "fig1c_trajectory.csv")
    labels = {f"m{m}": rf"$m_0={m}$" for m in ("-5", "0", "5")}
    fig = _plot_trajectories(table, labels, "Independence of the initial state")
    return _save(fig, out_dir, "fig1c")


def _reshape_grid(table: Table) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Recover the 2-D (u, v, Q) grid from the flattened rows."""
    require_columns(table, ["u", "v", "Q"])
    u, v, q = table.column("u"), table.column("v"), table.column("Q")
    u_axis = np.unique(u)
    v_axis = np.unique(v)
    if u_axis.size * v_axis.size != q.size:
        raise TableSchemaError(
            f"table {table.name!r}: rows do not form a regular u x v grid")
    return u_axis, v_axis, q.reshape(u_axis.size, v_axis.size)


def render_fig2(tables_dir: Path, out_dir: Path) -> Path:
    """Husimi distribution in the plane transverse to the mean spin."""
    panels = []
    for k in range(4):
        path = tables_dir / f"fig2_qperp_t{k}.csv"
        if not path.exists():
            break
        panels.append(read_table(path))
    if not panels:
        raise TableSchemaError(f"no fig2_qperp_t*.csv tables in {tables_dir}")
    grids = [_reshape_grid(tb) for tb in panels]
    # points outside the viewed hemisphere are NaN, so reduce with nanmax
    vmax = max(float(np.nanmax(g[2])) for g in grids)
    fig, axes = plt.subplots(1, len(panels), figsize=(2.6 * len(panels), 3.0),
                             sharey=True)
    axes = np.atleast_1d(axes)
    mesh = None
    for ax, tb, (u, v, q) in zip(axes, panels, grids):
        mesh = ax.pcolormesh(u, v, q.T, vmin=0.0, vmax=vmax, shading="auto",
                             cmap="viridis", rasterized=True)
        t = tb.metadata.get("t")
        ax.set_title(rf"$At={t:g}$" if t is not None else tb.name, fontsize=9)
        ax.set_xlabel(r"$u$")
        ax.set_aspect("equal")
    axes[0].set_ylabel(r"$v$")
    fig.colorbar(mesh, ax=axes, label=r"$Q$ [1/sr]", shrink=0.85)
    return _save(fig, out_dir, "fig2")


def render_fig3(tables_dir: Path, out_dir: Path) -> Path:
    """Optimal squeezing and optimal r versus atom number, with fits."""
    scaling = read_table(tables_dir / "fig3_scaling.csv")
    fits = read_table(tables_dir / "fig3_fits.csv")
    require_columns(scaling, ["N", "r_opt", "inv_xi_max"])
    require_columns(fits, ["xi_prefactor", "xi_exponent",
                           "ropt_slope", "ropt_intercept"])
    if fits.rows.shape[0] != 1:
        raise TableSchemaError("fits table must contain exactly one row")
    a, b = fits.column("xi_prefactor")[0], fits.column("xi_exponent")[0]
    slope, icpt = fits.column("ropt_slope")[0], fits.column("ropt_intercept")[0]

    N = scaling.column("N")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(7.6, 3.4))
    ax1.plot(N, scaling.column("inv_xi_max"), "o", ms=3.5, label="simulation")
    n_fine = np.linspace(N.min(), N.max(), 200)
    ax1.plot(n_fine, 1.0 / (a * n_fine**b), "-", lw=1,
             label=rf"$\xi^2 = {a:.2f}\,N^{{{b:.2f}}}$")
    ax1.set_xlabel(r"$N$")
    ax1.set_ylabel(r"$1/\xi^2_{\max}$")
    ax1.legend(frameon=False, fontsize=8)

    ax2.semilogx(N, scaling.column("r_opt"), "s", ms=3.5, label="simulation")
    ax2.semilogx(n_fine, slope * np.log(n_fine) + icpt, "-", lw=1,
                 label=rf"$r_{{\rm opt}} = {slope:.2f}\ln N {icpt:+.2f}$")
    ax2.set_xlabel(r"$N$")
    ax2.set_ylabel(r"$r_{\rm opt}$")
    ax2.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return _save(fig, out_dir, "fig3")


def render_fig4(tables_dir: Path, out_dir: Path) -> Path:
    """Ensemble squeezing under placement disorder, plus the steady sweep."""
    traj_tables = []
    for k in range(16):
        path = tables_dir / f"fig4_disorder_trajectory_w{k}.csv"
        if not path.exists():
            break
        traj_tables.append(read_table(path))
    if not traj_tables:
        single = tables_dir / "fig4_disorder_trajectory.csv"
        if single.exists():
            traj_tables.append(read_table(single))
    steady_path = tables_dir / "fig4_disorder_steady.csv"
    steady = read_table(steady_path) if steady_path.exists() else None
    if not traj_tables and steady is None:
        raise TableSchemaError(f"no fig4 disorder tables in {tables_dir}")

    n_panels = len(traj_tables) + (1 if steady is not None else 0)
    n_cols = 2
    n_rows = (n_panels + n_cols - 1) // n_cols
    fig, axes = plt.subplots(n_rows, n_cols, figsize=(7.4, 2.9 * n_rows),
                             squeeze=False)
    flat = axes.ravel()
    for ax, tb in zip(flat, traj_tables):
        require_columns(tb, ["t", "mean_inv_xi", "std_inv_xi", "ideal_inv_xi"])
        t = tb.column("t")
        mean, std = tb.column("mean_inv_xi"), tb.column("std_inv_xi")
        ax.fill_between(t, mean - std, mean + std, alpha=0.3, lw=0)
        ax.plot(t, mean, lw=1.2, label="ensemble mean")
        ax.plot(t, tb.column("ideal_inv_xi"), "--", lw=1, color="0.3",
                label="ideal placement")
        ax.axhline(1.0, color="0.6", lw=0.8, ls=":")
        w = tb.metadata.get("w")
        ax.set_title(rf"$w={w:g}\,\pi\zeta$" if w is not None else tb.name,
                     fontsize=9)
        ax.set_xlabel(r"$At$")
        ax.set_ylabel(r"$1/\xi^2$")
        ax.legend(frameon=False, fontsize=7)
    if steady is not None:
        require_columns(steady, ["w", "mean_inv_xi", "std_inv_xi"])
        ax = flat[len(traj_tables)]
        ax.errorbar(steady.column("w"), steady.column("mean_inv_xi"),
                    yerr=steady.column("std_inv_xi"), fmt="o-", ms=3.5,
                    capsize=2, lw=1)
        ax.axhline(1.0, color="0.6", lw=0.8, ls=":")
        ax.set_xlabel(r"$w$ [$\pi\zeta$]")
        ax.set_ylabel(r"$1/\xi^2$")
        ax.set_title("ensemble steady value", fontsize=9)
    for ax in flat[n_panels:]:
        ax.set_visible(False)
    fig.tight_layout()
    return _save(fig, out_dir, "fig4")


RENDERERS = {
    "fig1b": render_fig1b,
    "fig1c": render_fig1c,
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
}


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="wgss-figures",
        description="Render figures from wgss result tables.")
    ap.add_argument("figures", nargs="*", choices=[[], *FIGURES],
                    help="figures to render (default: all)")
    ap.add_argument("--tables", type=Path, default=Path("build/tables"),
                    help="directory containing the result tables")
    ap.add_argument("--out", type=Path, default=Path("build/figures"),
                    help="directory for the rendered PNG files")
    args = ap.parse_args(argv)

    names = args.figures or list(FIGURES)
    status = 0
    for name in names:
        try:
            path = RENDERERS[name](args.tables, args.out)
        except TableSchemaError as exc:
            print(f"{name}: {exc}", file=sys.stderr)
            status = 1
        else:
            print(path)
    return status


if __name__ == "__main__":
    sys.exit(main())
