import math

import numpy as np
import pytest

from swanson_csm import PacketKind, density_closed
from swanson_csm.cli import main
from swanson_csm.figures import (PERSISTENCE_L, SURVIVAL_FAMILY, WIGNER_SETS, centre_traces,
                                 persistence_map, survival_curves, wigner_panels, write_figure)
from swanson_csm.io import read_csv


def test_wigner_sets_have_expected_frequencies():
    panels = wigner_panels(0, points=11)
    for panel, grid in panels.items():
        expected = 1.0 if panel in "abc" else 0.1
        assert grid.meta["omega_abs"] == pytest.approx(expected)
    assert set(panels) == set(WIGNER_SETS)


def test_survival_curves_absolute_time():
    curves = survival_curves(points=11)
    for kind, rows in curves.items():
        assert [w for w, _, _ in rows] == list(SURVIVAL_FAMILY)
        for w, t, logp in rows:
            assert t[-1] == pytest.approx(5.0 / w)
            assert np.all(np.diff(logp) <= 1e-15)
    # at a shared absolute time, smaller |Omega| survives longer
    fixed = survival_curves(points=3, t_max=2.0)[PacketKind.GAUSSIAN]
    ends = [logp[-1] for _, _, logp in fixed]
    assert ends == sorted(ends)


def test_centre_traces_start_at_two():
    rows = centre_traces(points=3, tau_max=1.0)[PacketKind.GAUSSIAN]
    assert rows[0] == (0.0, pytest.approx(2.0, abs=1e-6))


def test_persistence_map_shape_and_range():
    maps = persistence_map(omega_points=5, t_points=7)
    omegas, times, Q = maps[PacketKind.SINH]
    assert Q.shape == (5, 7)
    assert np.all(Q <= 1 + 1e-12) and np.all(Q >= -1e-12)
    assert PERSISTENCE_L == 200.0


@pytest.mark.parametrize("preset,count", [("fig1", 6), ("fig2", 6), ("fig3", 3)])
def test_write_figure_files(tmp_path, preset, count):
    paths = write_figure(preset, tmp_path, points=11)
    assert len(paths) == count
    meta, columns, data = read_csv(paths[0])
    assert meta["figure"] == preset
    assert data.shape[1] == len(columns) and data.shape[0] > 0


def test_fig4_density_columns(tmp_path):
    paths = write_figure("fig4", tmp_path, points=101)
    meta, columns, data = read_csv(tmp_path / "fig4_c.csv")
    assert columns == ["X", "rho_tau0", "rho_tau3", "rho_tau4"]
    np.testing.assert_allclose(data[:, 1], density_closed("g", data[:, 0], 0.0))
    assert len(paths) == 6


def test_fig2_has_negative_values(tmp_path):
    write_figure("fig2", tmp_path, points=41)
    _, _, data = read_csv(tmp_path / "fig2_b.csv")
    assert data[:, 2].min() < 0


def test_figure_determinism(tmp_path):
    a = write_figure("fig3", tmp_path / "a", points=5)
    b = write_figure("fig3", tmp_path / "b", points=5)
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()


def test_unknown_preset(tmp_path):
    with pytest.raises(ValueError):
        write_figure("fig9", tmp_path)


def test_cli_figure(tmp_path, capsys):
    assert main(["fig5", "--out", str(tmp_path)]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3
    meta, columns, data = read_csv(tmp_path / "fig5_a.csv")
    assert meta["L"] == 200.0 and data.shape == (51 * 101, 3)
