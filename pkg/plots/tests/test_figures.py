import numpy as np
import pytest

from heatplots.cli import main
from heatplots.figures import FigureRequest, build_figure, render
from heatplots.schemas import SchemaError, load_ladder, read_trajectory

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def request_for(kind, artifacts, out, **options):
    inputs = {
        "snapshot": [artifacts["trajectory"]],
        "ladder": [artifacts["ladder"]],
        "overlay": [
            artifacts["solution"],
            artifacts["layer_profile"],
            artifacts["strict_profile"],
        ],
        "scan": [artifacts["scan"]],
        "convergence": [artifacts["conv_spatial"], artifacts["conv_temporal"]],
    }[kind]
    return FigureRequest(kind=kind, inputs=inputs, output=str(out), options=options)


@pytest.mark.parametrize("kind", ["snapshot", "ladder", "overlay", "scan", "convergence"])
def test_every_kind_renders_from_real_artifacts(kind, artifacts, tmp_path):
    out = render(request_for(kind, artifacts, tmp_path / f"{kind}.png"))
    data = open(out, "rb").read()
    assert data.startswith(PNG_MAGIC)
    assert len(data) > 5000


def test_snapshot_round_trip_matches_csv_exactly(artifacts, tmp_path):
    times, nodes, values = read_trajectory(artifacts["trajectory"])
    req = request_for("snapshot", artifacts, tmp_path / "s.png", max_curves=times.size)
    lines = build_figure(req).axes[0].lines
    assert len(lines) == times.size
    for i, line in enumerate(lines):
        assert np.array_equal(line.get_xdata(), nodes)
        assert np.array_equal(line.get_ydata(), values[i])


def test_ladder_curve_matches_json(artifacts, tmp_path):
    payload = load_ladder(artifacts["ladder"])
    ax = build_figure(request_for("ladder", artifacts, tmp_path / "l.png")).axes[0]
    line = ax.lines[0]
    assert np.array_equal(line.get_xdata(), payload["eps_sequence"])
    assert np.array_equal(line.get_ydata(), payload["final_sup_norms"])
    assert ax.get_xscale() == "log"
    # dyadic rungs read left to right toward the eps -> 0 limit
    lo, hi = ax.get_xlim()
    assert lo > hi


def test_overlay_draws_solution_and_both_barriers(artifacts, tmp_path):
    ax = build_figure(request_for("overlay", artifacts, tmp_path / "o.png")).axes[0]
    labels = [line.get_label() for line in ax.lines]
    assert len(labels) == 3
    assert labels[0].startswith("solution")
    assert any("profile" in lab for lab in labels[1:])
    times, nodes, values = read_trajectory(artifacts["solution"])
    assert np.array_equal(ax.lines[0].get_ydata(), values[-1])
    assert f"t = {times[-1]:g}" in labels[0]


def test_overlay_picks_nearest_stored_time(artifacts, tmp_path):
    times, _, values = read_trajectory(artifacts["solution"])
    target = float(times[1]) + 1e-6
    req = request_for("overlay", artifacts, tmp_path / "o.png", time=target)
    ax = build_figure(req).axes[0]
    assert np.array_equal(ax.lines[0].get_ydata(), values[1])


def test_scan_plots_one_point_per_row(artifacts, tmp_path):
    ax = build_figure(request_for("scan", artifacts, tmp_path / "v.png")).axes[0]
    total = sum(len(coll.get_offsets()) for coll in ax.collections)
    assert total == 3
    assert ax.get_xscale() == "log"


def test_convergence_draws_one_curve_per_file(artifacts, tmp_path):
    ax = build_figure(request_for("convergence", artifacts, tmp_path / "c.png")).axes[0]
    assert len(ax.lines) == 2
    assert ax.get_yscale() == "log"
    assert all("order" in line.get_label() for line in ax.lines)


@pytest.mark.parametrize("ext", ["png", "svg"])
def test_render_is_deterministic(ext, artifacts, tmp_path):
    a = render(request_for("snapshot", artifacts, tmp_path / f"a.{ext}"))
    b = render(request_for("snapshot", artifacts, tmp_path / f"b.{ext}"))
    assert open(a, "rb").read() == open(b, "rb").read()


def test_unknown_kind_and_bad_arity_rejected(artifacts, tmp_path):
    with pytest.raises(ValueError, match="unknown figure kind"):
        build_figure(FigureRequest("heatmap", [artifacts["trajectory"]], "x.png"))
    with pytest.raises(ValueError, match="at least 2"):
        build_figure(FigureRequest("overlay", [artifacts["solution"]], "x.png"))
    with pytest.raises(ValueError, match="exactly 1"):
        build_figure(
            FigureRequest("snapshot", [artifacts["trajectory"], artifacts["scan"]], "x.png")
        )
    with pytest.raises(ValueError, match="png or .svg"):
        render(FigureRequest("snapshot", [artifacts["trajectory"]], str(tmp_path / "x.pdf")))


def test_schema_errors_surface_through_render(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SchemaError, match="empty file"):
        render(FigureRequest("snapshot", [str(empty)], str(tmp_path / "x.png")))


def test_cli_renders_and_reports_schema_errors(artifacts, tmp_path, capsys):
    out = tmp_path / "cli.png"
    rc = main(["snapshot", artifacts["trajectory"], "--out", str(out)])
    assert rc == 0
    assert out.exists()
    rc = main(["snapshot", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "y.png")])
    assert rc == 2
    assert "no such file" in capsys.readouterr().err
