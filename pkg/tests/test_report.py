"""Report-file tests: CSV round trips, SVG structure, shared scales."""

import xml.etree.ElementTree as ET

import numpy as np
import pytest

from gaclust.data import generate_synthetic_scene, select_features, two_patch_scene
from gaclust.engine import RunConfig, evolve
from gaclust.errors import ParseError
from gaclust.fitness import FitnessConfig
from gaclust.harness import ExperimentSpec, run_suite
from gaclust.operators import OperatorConfig
from gaclust.report import (
    OFFSCALE_FLOOR,
    chart_y_range,
    emit_run_report,
    emit_suite_report,
    read_convergence_csv,
    read_labels_csv,
    resolve_out_dir,
    write_convergence_csv,
    write_convergence_svg,
    write_labels_csv,
)
from gaclust.spatial import build_planar_index


@pytest.fixture(scope="module")
def tiny_run():
    cloud, _ = generate_synthetic_scene(two_patch_scene(80), 1)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    cfg = RunConfig(
        k=2,
        iterations=5,
        operator_config=OperatorConfig(3, 3, 3, 3, 3),
        fitness_config=FitnessConfig(),
        seed=4,
    )
    return cfg, feats, index, evolve(cfg, feats, index)


def test_convergence_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    traj = rng.normal(size=(100, 3))
    path = tmp_path / "conv.csv"
    write_convergence_csv(path, traj)
    lines = path.read_text().splitlines()
    assert len(lines) == 101  # header + one row per iteration
    assert lines[0] == "iteration,min,mean,max"
    assert lines[1].startswith("1,")
    back = read_convergence_csv(path)
    assert back.shape == (100, 3)
    assert np.allclose(back, traj, rtol=1e-8, atol=0)


def test_convergence_csv_validations(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("wrong,header\n")
    with pytest.raises(ParseError, match="line 1"):
        read_convergence_csv(p)
    p.write_text("iteration,min,mean,max\n1,0.1,0.2\n")
    with pytest.raises(ParseError, match="line 2"):
        read_convergence_csv(p)
    p.write_text("iteration,min,mean,max\n2,0.1,0.2,0.3\n")
    with pytest.raises(ParseError, match="out of order"):
        read_convergence_csv(p)
    p.write_text("iteration,min,mean,max\n1,0.1,x,0.3\n")
    with pytest.raises(ParseError, match="line 2"):
        read_convergence_csv(p)
    p.write_text("iteration,min,mean,max\n")
    with pytest.raises(ParseError):
        read_convergence_csv(p)


def test_labels_csv_round_trip(tmp_path):
    labels = np.array([1, 5, 2, 2, 9], dtype=np.int64)
    path = tmp_path / "labels.csv"
    write_labels_csv(path, labels)
    lines = path.read_text().splitlines()
    assert len(lines) == 6  # header + one row per point
    assert lines[0] == "point_id,cluster"
    assert lines[1] == "0,1"
    assert np.array_equal(read_labels_csv(path), labels)


def test_labels_csv_validations(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("point,cluster\n")
    with pytest.raises(ParseError, match="line 1"):
        read_labels_csv(p)
    p.write_text("point_id,cluster\n1,2\n")
    with pytest.raises(ParseError, match="out of order"):
        read_labels_csv(p)
    p.write_text("point_id,cluster\n0,a\n")
    with pytest.raises(ParseError, match="line 2"):
        read_labels_csv(p)


def _polylines(svg_text):
    root = ET.fromstring(svg_text)
    return [el for el in root.iter() if el.tag.endswith("polyline")]


def _y_tick_texts(svg_text):
    root = ET.fromstring(svg_text)
    return [
        el.text
        for el in root.iter()
        if el.tag.endswith("text") and el.get("text-anchor") == "end"
    ]


def test_svg_structure(tmp_path):
    rng = np.random.default_rng(1)
    base = np.sort(rng.normal(size=(20, 3)), axis=1)
    path = tmp_path / "chart.svg"
    write_convergence_svg(path, base, "demo chart")
    text = path.read_text()
    polys = _polylines(text)
    assert len(polys) == 3
    dashes = [p.get("stroke-dasharray") for p in polys]
    assert dashes.count(None) == 1  # the mean series is solid
    solid = [p for p in polys if p.get("stroke-dasharray") is None][0]
    assert solid.get("stroke") == "#000000"
    assert "demo chart" in text
    assert 'width="640"' in text and 'height="400"' in text


def test_svg_single_iteration(tmp_path):
    path = tmp_path / "one.svg"
    write_convergence_svg(path, np.array([[0.0, 0.5, 1.0]]), "one")
    assert len(_polylines(path.read_text())) == 3


def test_chart_y_range_rules():
    lo, hi = chart_y_range([np.array([[0.0, 0.5, 1.0]])])
    assert lo == pytest.approx(-0.05)
    assert hi == pytest.approx(1.05)
    # sentinels are excluded from the range
    with_sentinel = np.array([[-1.0e9, 0.5, 1.0], [0.0, 0.5, 1.0]])
    assert chart_y_range([with_sentinel]) == chart_y_range(
        [np.array([[0.0, 0.5, 1.0]])]
    )
    # all equal values pad symmetrically
    lo, hi = chart_y_range([np.full((3, 3), 2.0)])
    assert lo < 2.0 < hi
    # nothing on-scale falls back to a fixed window
    assert chart_y_range([np.full((2, 3), -1.0e9)]) == (OFFSCALE_FLOOR, 0.0)


def test_emit_run_report(tmp_path, tiny_run):
    _, _, _, result = tiny_run
    files = emit_run_report(result, tmp_path / "run")
    assert [f.rsplit("/", 1)[1] for f in files] == [
        "convergence.csv",
        "best_labels.csv",
        "chart.svg",
        "summary.txt",
    ]
    back = read_convergence_csv(tmp_path / "run" / "convergence.csv")
    assert back.shape == result.trajectory.shape
    labels = read_labels_csv(tmp_path / "run" / "best_labels.csv")
    assert np.array_equal(labels, result.best_labeling)
    summary = (tmp_path / "run" / "summary.txt").read_text()
    assert "final_best_combined" in summary
    assert "evaluations = " in summary


def test_rerun_gives_byte_identical_data_files(tmp_path, tiny_run):
    cfg, feats, index, _ = tiny_run
    a = evolve(cfg, feats, index)
    b = evolve(cfg, feats, index)
    emit_run_report(a, tmp_path / "a")
    emit_run_report(b, tmp_path / "b")
    for name in ("convergence.csv", "best_labels.csv", "chart.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (
            tmp_path / "b" / name
        ).read_bytes(), name


def test_emit_suite_report_shares_y_range(tmp_path, tiny_run):
    _, feats, index, _ = tiny_run
    base = RunConfig(
        k=2,
        iterations=4,
        operator_config=OperatorConfig(200, 200, 200, 200, 200),
        seed=0,
    )
    specs = [
        ExperimentSpec(1, (200, 200, 200, 200, 200), repetitions=2, base=base),
        ExperimentSpec(2, (500, 0, 0, 0, 500), repetitions=2, base=base),
    ]
    report = run_suite(specs, feats, index, scale=0.02)
    emit_suite_report(report, tmp_path / "suite")
    svg1 = (tmp_path / "suite" / "experiment_1" / "chart.svg").read_text()
    svg2 = (tmp_path / "suite" / "experiment_2" / "chart.svg").read_text()
    assert _y_tick_texts(svg1) == _y_tick_texts(svg2)  # one shared scale
    top = (tmp_path / "suite" / "suite_summary.txt").read_text()
    assert "experiments = 2" in top
    assert "master_seed = 42" in top
    for eid, res in zip((1, 2), report.results):
        sub = tmp_path / "suite" / f"experiment_{eid}"
        agg = read_convergence_csv(sub / "convergence.csv")
        assert np.allclose(agg, res.aggregate, rtol=1e-8)
        summary = (sub / "summary.txt").read_text()
        assert f"experiment_id = {eid}" in summary
        assert "mean_final_best" in summary


def test_resolve_out_dir(monkeypatch):
    monkeypatch.delenv("GACLUST_OUT", raising=False)
    assert resolve_out_dir(None, "default") == "default"
    assert resolve_out_dir("flagged", "default") == "flagged"
    monkeypatch.setenv("GACLUST_OUT", "from_env")
    assert resolve_out_dir(None, "default") == "from_env"
    assert resolve_out_dir("flagged", "default") == "flagged"  # flag still wins
