import numpy as np
import pytest

from wgssfig.render import (FIGURES, RENDERERS, main, render_fig2,
                            render_fig3, render_fig4)
from wgssfig.tables import TableSchemaError

from conftest import write_csv


@pytest.mark.parametrize("name", FIGURES)
def test_each_figure_renders(name, tables_dir, tmp_path):
    out = RENDERERS[name](tables_dir, tmp_path / "figs")
    assert out.exists()
    assert out.stat().st_size > 1000
    assert out.read_bytes()[:4] == b"\x89PNG"


def test_render_is_deterministic(tables_dir, tmp_path):
    for name in FIGURES:
        a = RENDERERS[name](tables_dir, tmp_path / "a")
        b = RENDERERS[name](tables_dir, tmp_path / "b")
        assert a.read_bytes() == b.read_bytes(), name


def test_fig2_missing_tables(tmp_path):
    with pytest.raises(TableSchemaError, match="qperp"):
        render_fig2(tmp_path, tmp_path / "figs")


def test_fig2_irregular_grid(tmp_path):
    write_csv(tmp_path / "fig2_qperp_t0.csv", "qperp_t0",
              ["u", "v", "Q"], ["-", "-", "1/sr"],
              [[0.0, 0.0, 1.0], [1.0, 1.0, 2.0], [2.0, 0.0, 3.0]],
              metadata={"t": 0.0})
    with pytest.raises(TableSchemaError, match="regular"):
        render_fig2(tmp_path, tmp_path / "figs")


def test_fig3_missing_fit_column(tables_dir, tmp_path):
    write_csv(tables_dir / "fig3_fits.csv", "fits",
              ["xi_prefactor"], ["-"], [[1.7]])
    with pytest.raises(TableSchemaError, match="missing column"):
        render_fig3(tables_dir, tmp_path / "figs")


def test_fig4_no_tables(tmp_path):
    with pytest.raises(TableSchemaError, match="disorder"):
        render_fig4(tmp_path, tmp_path / "figs")


def test_fig4_single_trajectory_table(tmp_path):
    t = np.linspace(0.0, 5.0, 6)
    write_csv(tmp_path / "fig4_disorder_trajectory.csv", "disorder_trajectory",
              ["t", "mean_inv_xi", "std_inv_xi", "ideal_inv_xi"],
              ["1/A", "-", "-", "-"],
              np.column_stack([t, 1 + 0.1 * t, 0.01 + 0 * t, 1 + 0.1 * t]),
              metadata={"w": 0.05})
    out = render_fig4(tmp_path, tmp_path / "figs")
    assert out.exists()


def test_main_renders_all(tables_dir, tmp_path, capsys):
    rc = main(["--tables", str(tables_dir), "--out", str(tmp_path / "figs")])
    assert rc == 0
    printed = capsys.readouterr().out.splitlines()
    assert len(printed) == len(FIGURES)
    for name in FIGURES:
        assert (tmp_path / "figs" / f"{name}.png").exists()


def test_main_subset_and_failure(tables_dir, tmp_path, capsys):
    rc = main(["fig1b", "--tables", str(tables_dir),
               "--out", str(tmp_path / "figs")])
    assert rc == 0
    assert (tmp_path / "figs" / "fig1b.png").exists()
    assert not (tmp_path / "figs" / "fig3.png").exists()

    rc = main(["fig3", "--tables", str(tmp_path / "empty"),
               "--out", str(tmp_path / "figs")])
    assert rc == 1
    assert "fig3" in capsys.readouterr().err
