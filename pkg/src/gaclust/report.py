"""Report emission: convergence CSVs, label CSVs, SVG charts, summaries.

All CSV output is deterministic (no timestamps, fixed %.9g number
formatting), so identical runs give byte-identical files. Charts draw
the mean series solid and the min/max series dashed; suite charts share
one y-range across experiments. Combined-fitness values at or below the
off-scale floor (degenerate-labeling sentinels) are clamped to the chart
floor and excluded from range computation so one sentinel cannot flatten
every chart. summary.txt includes wall time and is the one deliberately
non-reproducible file.
"""

import os
from pathlib import Path

import numpy as np

from .engine import RunResult
from .errors import ParseError
from .harness import ExperimentReport, ExperimentResult

# Combined fitness at or below this is treated as off-scale in charts.
OFFSCALE_FLOOR = -1.0e8


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def write_convergence_csv(path, trajectory: np.ndarray) -> None:
    """iteration,min,mean,max rows; iterations are 1-based."""
    lines = ["iteration,min,mean,max"]
    for i, (lo, mean, hi) in enumerate(trajectory, start=1):
        lines.append(f"{i},{_fmt(lo)},{_fmt(mean)},{_fmt(hi)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_convergence_csv(path) -> np.ndarray:
    """Parse a convergence CSV back to a (T, 3) array; validates layout."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != "iteration,min,mean,max":
        raise ParseError("missing convergence header", 1)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 4:
            raise ParseError("expected 4 columns", lineno)
        try:
            it = int(parts[0])
            vals = [float(p) for p in parts[1:]]
        except ValueError:
            raise ParseError("malformed numeric field", lineno)
        if it != lineno - 1:
            raise ParseError(f"iteration {it} out of order", lineno)
        rows.append(vals)
    if not rows:
        raise ParseError("no data rows")
    return np.array(rows)


def write_labels_csv(path, labels: np.ndarray) -> None:
    """point_id,cluster rows; point ids are the 0-based cloud order."""
    lines = ["point_id,cluster"]
    for i, lab in enumerate(labels):
        lines.append(f"{i},{int(lab)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_labels_csv(path) -> np.ndarray:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != "point_id,cluster":
        raise ParseError("missing labels header", 1)
    labels = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError("expected 2 columns", lineno)
        try:
            pid = int(parts[0])
            lab = int(parts[1])
        except ValueError:
            raise ParseError("malformed integer field", lineno)
        if pid != lineno - 2:
            raise ParseError(f"point_id {pid} out of order", lineno)
        labels.append(lab)
    if not labels:
        raise ParseError("no data rows")
    return np.array(labels, dtype=np.int64)


def _svg_polyline(xs, ys, stroke: str, dash: str | None) -> str:
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (
        f'<polyline fill="none" stroke="{stroke}" stroke-width="1.5"'
        f'{dash_attr} points="{pts}"/>'
    )


def write_convergence_svg(
    path,
    trajectory: np.ndarray,
    title: str,
    y_range: tuple[float, float] | None = None,
) -> None:
    """Self-contained line chart: mean solid, min/max dashed.

    ``y_range`` pins the vertical scale (used by suite output to share
    one range across charts); by default it is computed from the finite,
    on-scale values of this trajectory.
    """
    width, height = 640.0, 400.0
    ml, mr, mt, mb = 60.0, 15.0, 35.0, 45.0
    t = trajectory.shape[0]
    if y_range is None:
        y_range = chart_y_range([trajectory])
    y_lo, y_hi = y_range
    inner_w = width - ml - mr
    inner_h = height - mt - mb

    def x_pos(i):
        return ml + inner_w * (i / max(t - 1, 1))

    def y_pos(v):
        v = min(max(v, y_lo), y_hi)
        return mt + inner_h * (1.0 - (v - y_lo) / (y_hi - y_lo))

    xs = [x_pos(i) for i in range(t)]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<line x1="{ml:.1f}" y1="{mt:.1f}" x2="{ml:.1f}" y2="{height - mb:.1f}" '
        f'stroke="black" stroke-width="1"/>',
        f'<line x1="{ml:.1f}" y1="{height - mb:.1f}" x2="{width - mr:.1f}" '
        f'y2="{height - mb:.1f}" stroke="black" stroke-width="1"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        yv = y_lo + frac * (y_hi - y_lo)
        yp = y_pos(yv)
        parts.append(
            f'<line x1="{ml - 4:.1f}" y1="{yp:.2f}" x2="{ml:.1f}" y2="{yp:.2f}" '
            f'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{ml - 7:.1f}" y="{yp + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{yv:.4g}</text>'
        )
    ticks = min(t, 5)
    for j in range(ticks):
        i = round(j * (t - 1) / max(ticks - 1, 1))
        xp = x_pos(i)
        parts.append(
            f'<line x1="{xp:.2f}" y1="{height - mb:.1f}" x2="{xp:.2f}" '
            f'y2="{height - mb + 4:.1f}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{xp:.2f}" y="{height - mb + 17:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{i + 1}</text>'
        )
    parts.append(
        f'<text x="{(ml + width - mr) / 2:.1f}" y="{height - 10:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">iteration</text>'
    )
    parts.append(
        f'<text x="16" y="{(mt + height - mb) / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {(mt + height - mb) / 2:.1f})">combined fitness</text>'
    )
    parts.append(_svg_polyline(xs, [y_pos(v) for v in trajectory[:, 0]], "#666666", "4 3"))
    parts.append(_svg_polyline(xs, [y_pos(v) for v in trajectory[:, 2]], "#666666", "4 3"))
    parts.append(_svg_polyline(xs, [y_pos(v) for v in trajectory[:, 1]], "#000000", None))
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def chart_y_range(trajectories) -> tuple[float, float]:
    """Common vertical range over several trajectories, sentinels excluded."""
    values = np.concatenate([np.asarray(t).ravel() for t in trajectories])
    values = values[np.isfinite(values) & (values > OFFSCALE_FLOOR)]
    if values.size == 0:
        return (OFFSCALE_FLOOR, 0.0)
    lo = float(values.min())
    hi = float(values.max())
    if lo == hi:
        pad = 1.0 if lo == 0 else abs(lo) * 0.1
        return (lo - pad, hi + pad)
    pad = (hi - lo) * 0.05
    return (lo - pad, hi + pad)


def emit_run_report(result: RunResult, out_dir) -> list[str]:
    """convergence.csv, best_labels.csv, chart.svg, summary.txt for one run."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_convergence_csv(out / "convergence.csv", result.trajectory)
    write_labels_csv(out / "best_labels.csv", result.best_labeling)
    write_convergence_svg(out / "chart.svg", result.trajectory, "convergence")
    summary = [
        f"final_best_combined = {_fmt(result.best_fitness.combined)}",
        f"final_best_dunn = {_fmt(result.best_fitness.dunn)}",
        f"final_best_penalty_count = {result.best_fitness.penalty_count}",
        f"initial_best_combined = {_fmt(result.initial_best_fitness.combined)}",
        f"evaluations = {result.evaluations}",
        f"wall_time_seconds = {result.wall_time:.3f}",
    ]
    (out / "summary.txt").write_text("\n".join(summary) + "\n")
    return [
        str(out / name)
        for name in ("convergence.csv", "best_labels.csv", "chart.svg", "summary.txt")
    ]


def emit_suite_report(report: ExperimentReport, out_dir) -> list[str]:
    """Per-experiment subdirectories plus a suite-level summary.

    Every experiment chart uses the same y-range, computed over all
    aggregate trajectories of the suite.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    shared = chart_y_range([res.aggregate for res in report.results])
    written = []
    for res in report.results:
        sub = out / f"experiment_{res.experiment_id}"
        sub.mkdir(parents=True, exist_ok=True)
        write_convergence_csv(sub / "convergence.csv", res.aggregate)
        write_labels_csv(sub / "best_labels.csv", res.best_run.best_labeling)
        write_convergence_svg(
            sub / "chart.svg",
            res.aggregate,
            f"experiment {res.experiment_id}",
            y_range=shared,
        )
        lines = [
            f"experiment_id = {res.experiment_id}",
            f"operator_counts = {res.operator_counts}",
            f"population_size = {res.population_size}",
            f"repetitions = {len(res.final_best)}",
            f"seeds = {res.seeds}",
            "final_best_per_repetition = "
            + " ".join(_fmt(v) for v in res.final_best),
            f"mean_final_best = {_fmt(float(np.mean(res.final_best)))}",
            f"wall_time_seconds = {sum(res.wall_times):.3f}",
        ]
        (sub / "summary.txt").write_text("\n".join(lines) + "\n")
        written.extend(
            str(sub / name)
            for name in ("convergence.csv", "best_labels.csv", "chart.svg", "summary.txt")
        )
    top = [
        f"experiments = {len(report.results)}",
        f"master_seed = {report.master_seed}",
        f"scale = {_fmt(report.scale)}",
        f"wall_time_seconds = {report.wall_time:.3f}",
    ]
    (out / "suite_summary.txt").write_text("\n".join(top) + "\n")
    written.append(str(out / "suite_summary.txt"))
    return written


def resolve_out_dir(flag_value: str | None, default: str) -> str:
    """Output directory: flag beats the GACLUST_OUT env var beats default."""
    if flag_value:
        return flag_value
    env = os.environ.get("GACLUST_OUT", "").strip()
    return env if env else default
