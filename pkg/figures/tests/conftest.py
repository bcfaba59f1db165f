import json

import numpy as np
import pytest


def write_csv(path, name, columns, units, rows, metadata=None):
    meta = {"table": name, **(metadata or {})}
    lines = ["# " + json.dumps(meta), ",".join(columns), ",".join(units)]
    for row in np.atleast_2d(np.asarray(rows, dtype=float)):
        lines.append(",".join("%.17g" % x for x in row))
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def tables_dir(tmp_path):
    """A directory holding small synthetic versions of every shipped table."""
    d = tmp_path / "tables"
    d.mkdir()
    t = np.linspace(0.0, 10.0, 11)
    write_csv(d / "fig1b_trajectory.csv", "trajectory",
              ["t", "inv_xi[r0.1]", "inv_xi[r0.5]"], ["1/A", "-", "-"],
              np.column_stack([t, 1 + 0.02 * t, 1 + 0.1 * t]))
    write_csv(d / "fig1c_trajectory.csv", "trajectory",
              ["t", "inv_xi[m-5]", "inv_xi[m0]", "inv_xi[m5]"],
              ["1/A", "-", "-", "-"],
              np.column_stack([t, 1 + 0.1 * t, 1 + 0.09 * t, 1 + 0.11 * t]))
    u = np.linspace(-1, 1, 5)
    uu, vv = np.meshgrid(u, u, indexing="ij")
    for k, tk in enumerate([0.0, 4.0]):
        q = np.exp(-(uu**2 + (k + 1) * vv**2)).ravel()
        write_csv(d / f"fig2_qperp_t{k}.csv", f"qperp_t{k}",
                  ["u", "v", "Q"], ["-", "-", "1/sr"],
                  np.column_stack([uu.ravel(), vv.ravel(), q]),
                  metadata={"t": tk})
    N = np.arange(4, 21, 4, dtype=float)
    write_csv(d / "fig3_scaling.csv", "scaling",
              ["N", "r_opt", "inv_xi_max", "xi_min"], ["count", "-", "-", "-"],
              np.column_stack([N, 0.27 * np.log(N) - 0.13,
                               N**0.54 / 1.7, 1.7 * N**-0.54]))
    write_csv(d / "fig3_fits.csv", "fits",
              ["xi_prefactor", "xi_exponent", "xi_residual_rms",
               "ropt_slope", "ropt_intercept", "ropt_residual_rms"],
              ["-"] * 6, [[1.7, -0.54, 0.001, 0.27, -0.13, 0.002]])
    for k, w in enumerate([0.03, 0.3]):
        mean = 1 + 0.1 * t * np.exp(-w * t)
        write_csv(d / f"fig4_disorder_trajectory_w{k}.csv",
                  f"disorder_trajectory_w{k}",
                  ["t", "mean_inv_xi", "std_inv_xi", "ideal_inv_xi"],
                  ["1/A", "-", "-", "-"],
                  np.column_stack([t, mean, 0.05 * np.ones_like(t),
                                   1 + 0.1 * t]),
                  metadata={"w": w})
    w_axis = np.linspace(0.0, 0.5, 6)
    write_csv(d / "fig4_disorder_steady.csv", "disorder_steady",
              ["w", "mean_inv_xi", "std_inv_xi", "n_failed"],
              ["-", "-", "-", "count"],
              np.column_stack([w_axis, 1.2 - w_axis, 0.05 + 0 * w_axis,
                               0 * w_axis]))
    return d
