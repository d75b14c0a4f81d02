"""Command-line interface.

Subcommands: ``cluster`` (one GA run), ``baseline`` (k-means plus
smoothing), ``suite`` (the eight stock experiments), ``synth`` (emit a
synthetic scene file), ``validate`` (parse a file and report stats).

Configuration comes from an INI file (``--config``) overridden by flags;
every run is seeded (default 42, never wall clock). The output directory
resolves flag, then the GACLUST_OUT env var, then ``./gaclust-out``.
Exit codes: 0 success, 1 diagnosed error, 2 usage error.
"""

import argparse
import configparser
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .baseline import adjusted_rand_index, kmeans, knn_majority_smooth
from .data import (
    COLUMN_NAMES,
    DEFAULT_FEATURES,
    generate_synthetic_scene,
    parse_point_records,
    select_features,
    serialize_point_records,
    two_patch_scene,
)
from .engine import RunConfig, evolve
from .errors import ConfigError, GaclustError
from .fitness import FitnessConfig, inhomogeneity_penalty
from .harness import builtin_experiments, run_suite
from .operators import OperatorConfig
from .report import (
    emit_run_report,
    emit_suite_report,
    resolve_out_dir,
    write_labels_csv,
)
from .spatial import build_planar_index

DEFAULT_OUT = "./gaclust-out"


@dataclass(frozen=True)
class AppConfig:
    """Validated union of config-file values and command-line flags."""

    input: str | None = None
    points: int = 500
    features: tuple[str, ...] = DEFAULT_FEATURES
    standardize: bool = True
    k: int = 10
    iterations: int = 100
    seed: int = 42
    counts: tuple[int, int, int, int, int] = (200, 200, 200, 200, 200)
    alpha: float = 0.5
    beta1: float = 0.3
    beta2: float = 0.7
    beta3: float = 0.5
    gamma1: float = 0.1
    gamma2: float = 0.1
    lam: float = 1.0
    neighbor_k: int = 8
    rule: float = 0.5
    normalize_penalty: bool = True
    kmeans_max_iter: int = 100
    kmeans_tol: float = 1e-6
    smooth_repeats: int = 1
    scale: float = 1.0
    repetitions: int = 5
    experiments: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8)
    out_dir: str | None = None
    workers: int = 1

    def operator_config(self) -> OperatorConfig:
        return OperatorConfig(
            *self.counts,
            alpha=self.alpha,
            beta1=self.beta1,
            beta2=self.beta2,
            beta3=self.beta3,
            gamma1=self.gamma1,
            gamma2=self.gamma2,
        )

    def fitness_config(self) -> FitnessConfig:
        return FitnessConfig(
            lam=self.lam,
            neighbor_k=self.neighbor_k,
            inhomogeneity_rule=self.rule,
            normalize_penalty=self.normalize_penalty,
        )

    def run_config(self) -> RunConfig:
        return RunConfig(
            k=self.k,
            iterations=self.iterations,
            operator_config=self.operator_config(),
            fitness_config=self.fitness_config(),
            seed=self.seed,
        )

    def validate(self) -> None:
        self.run_config().validate()
        if self.points < 2:
            raise ConfigError("[data] points: need at least 2 points")
        if not self.features:
            raise ConfigError("[data] features: must not be empty")
        for name in self.features:
            if name not in COLUMN_NAMES:
                raise ConfigError(f"[data] features: unknown attribute {name!r}")
        if not 0.0 < self.scale <= 1.0:
            raise ConfigError("[suite] scale: must be in (0, 1]")
        if self.repetitions < 1:
            raise ConfigError("[suite] repetitions: must be >= 1")
        for e in self.experiments:
            if not 1 <= e <= 8:
                raise ConfigError(f"[suite] experiments: id {e} outside 1..8")
        if len(set(self.experiments)) != len(self.experiments):
            raise ConfigError("[suite] experiments: duplicate ids")
        if self.workers < 1:
            raise ConfigError("workers: must be >= 1")
        if self.kmeans_max_iter < 1:
            raise ConfigError("[baseline] kmeans_max_iter: must be >= 1")
        if self.kmeans_tol < 0:
            raise ConfigError("[baseline] kmeans_tol: must be >= 0")
        if self.smooth_repeats < 1:
            raise ConfigError("[baseline] smooth_repeats: must be >= 1")


def _parse_counts(text: str, where: str) -> tuple[int, int, int, int, int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 5:
        raise ConfigError(f"{where}: need 5 comma-separated counts, got {text!r}")
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"{where}: counts must be integers, got {text!r}")
    return vals


def _parse_features(text: str, where: str) -> tuple[str, ...]:
    names = tuple(p.strip() for p in text.split(",") if p.strip())
    if not names:
        raise ConfigError(f"{where}: empty feature list")
    return names


def _parse_experiments(text: str, where: str) -> tuple[int, ...]:
    try:
        return tuple(int(p.strip()) for p in text.split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"{where}: experiment ids must be integers, got {text!r}")


_CONFIG_SCHEMA = {
    ("data", "input"): ("input", str),
    ("data", "points"): ("points", int),
    ("data", "features"): ("features", "features"),
    ("data", "standardize"): ("standardize", bool),
    ("run", "k"): ("k", int),
    ("run", "iterations"): ("iterations", int),
    ("run", "seed"): ("seed", int),
    ("run", "counts"): ("counts", "counts"),
    ("run", "alpha"): ("alpha", float),
    ("run", "beta1"): ("beta1", float),
    ("run", "beta2"): ("beta2", float),
    ("run", "beta3"): ("beta3", float),
    ("run", "gamma1"): ("gamma1", float),
    ("run", "gamma2"): ("gamma2", float),
    ("fitness", "lambda"): ("lam", float),
    ("fitness", "neighbor_k"): ("neighbor_k", int),
    ("fitness", "rule"): ("rule", float),
    ("fitness", "normalize_penalty"): ("normalize_penalty", bool),
    ("baseline", "kmeans_max_iter"): ("kmeans_max_iter", int),
    ("baseline", "kmeans_tol"): ("kmeans_tol", float),
    ("baseline", "smooth_repeats"): ("smooth_repeats", int),
    ("suite", "scale"): ("scale", float),
    ("suite", "repetitions"): ("repetitions", int),
    ("suite", "experiments"): ("experiments", "experiments"),
    ("output", "dir"): ("out_dir", str),
}


def load_config_file(path: str) -> dict:
    """Read an INI config into AppConfig field overrides, naming bad keys."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file {path!r} not found or unreadable")
    overrides = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            schema = _CONFIG_SCHEMA.get((section, key))
            if schema is None:
                raise ConfigError(f"[{section}] {key}: unknown configuration key")
            field_name, kind = schema
            where = f"[{section}] {key}"
            try:
                if kind is bool:
                    lowered = raw.strip().lower()
                    if lowered in ("1", "true", "yes", "on"):
                        value = True
                    elif lowered in ("0", "false", "no", "off"):
                        value = False
                    else:
                        raise ValueError(raw)
                elif kind == "counts":
                    value = _parse_counts(raw, where)
                elif kind == "features":
                    value = _parse_features(raw, where)
                elif kind == "experiments":
                    value = _parse_experiments(raw, where)
                else:
                    value = kind(raw)
            except ConfigError:
                raise
            except ValueError:
                raise ConfigError(f"{where}: cannot parse value {raw!r}")
            overrides[field_name] = value
    return overrides


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI configuration file")
    p.add_argument("--input", help="point file (default: built-in synthetic scene)")
    p.add_argument("--points", type=int, help="built-in scene size")
    p.add_argument("--features", help="comma-separated attribute names")
    p.add_argument("--no-standardize", action="store_true", help="skip feature standardization")
    p.add_argument("--k", type=int, help="cluster count")
    p.add_argument("--seed", type=int, help="master seed (default 42)")
    p.add_argument("--out", help="output directory (or GACLUST_OUT env var)")
    p.add_argument("--workers", type=int, help="parallel workers (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaclust",
        description="Genetic-algorithm clustering of airborne laser scanning point clouds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cluster = sub.add_parser("cluster", help="single GA clustering run")
    _add_common(p_cluster)
    p_cluster.add_argument("--iterations", type=int, help="generation count")
    p_cluster.add_argument("--counts", help="o1,o2,o3,o4,o5 offspring composition")
    p_cluster.add_argument("--lambda", dest="lam", type=float, help="penalty weight")
    p_cluster.add_argument("--neighbor-k", type=int, help="penalty neighborhood size")
    p_cluster.add_argument("--rule", type=float, help="inhomogeneity threshold fraction")
    p_cluster.add_argument(
        "--raw-penalty", action="store_true", help="subtract the raw count, not count/N"
    )

    p_base = sub.add_parser("baseline", help="k-means plus kNN majority smoothing")
    _add_common(p_base)
    p_base.add_argument("--neighbor-k", type=int, help="smoothing neighborhood size")
    p_base.add_argument("--smooth-repeats", type=int, help="smoothing passes")

    p_suite = sub.add_parser("suite", help="run the eight stock experiments")
    _add_common(p_suite)
    p_suite.add_argument("--scale", type=float, help="population scale factor in (0, 1]")
    p_suite.add_argument("--repetitions", type=int, help="repetitions per experiment")
    p_suite.add_argument("--experiments", help="comma-separated experiment ids (1..8)")
    p_suite.add_argument("--iterations", type=int, help="generation count")

    p_synth = sub.add_parser("synth", help="emit a synthetic scene file")
    _add_common(p_synth)

    p_val = sub.add_parser("validate", help="parse a point file and report stats")
    p_val.add_argument("--input", required=True, help="point file to validate")
    return parser


def _config_from_args(args: argparse.Namespace) -> AppConfig:
    overrides = {}
    if getattr(args, "config", None):
        overrides.update(load_config_file(args.config))
    flag_map = {
        "input": "input",
        "points": "points",
        "k": "k",
        "iterations": "iterations",
        "seed": "seed",
        "lam": "lam",
        "neighbor_k": "neighbor_k",
        "rule": "rule",
        "scale": "scale",
        "repetitions": "repetitions",
        "workers": "workers",
        "out": "out_dir",
        "smooth_repeats": "smooth_repeats",
    }
    for attr, field_name in flag_map.items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides[field_name] = value
    if getattr(args, "features", None):
        overrides["features"] = _parse_features(args.features, "--features")
    if getattr(args, "counts", None):
        overrides["counts"] = _parse_counts(args.counts, "--counts")
    if getattr(args, "experiments", None):
        overrides["experiments"] = _parse_experiments(args.experiments, "--experiments")
    if getattr(args, "no_standardize", False):
        overrides["standardize"] = False
    if getattr(args, "raw_penalty", False):
        overrides["normalize_penalty"] = False
    cfg = AppConfig(**overrides)
    cfg.validate()
    return cfg


def _load_cloud(cfg: AppConfig):
    """Cloud plus ground-truth labels (None for file input)."""
    if cfg.input is not None:
        path = Path(cfg.input)
        if not path.exists():
            raise ConfigError(f"input file {cfg.input!r} not found")
        cloud = parse_point_records(path.read_text(), source=str(path))
        return cloud, None
    cloud, truth = generate_synthetic_scene(two_patch_scene(cfg.points), cfg.seed)
    return cloud, truth


def _cmd_cluster(cfg: AppConfig) -> int:
    cloud, _ = _load_cloud(cfg)
    features = select_features(cloud, cfg.features, cfg.standardize)
    index = build_planar_index(cloud)
    result = evolve(cfg.run_config(), features, index, workers=cfg.workers)
    out = resolve_out_dir(cfg.out_dir, DEFAULT_OUT)
    emit_run_report(result, out)
    print(
        f"cluster: {len(cloud)} points, k={cfg.k}, "
        f"final best combined fitness {result.best_fitness.combined:.9g}, "
        f"report in {out}"
    )
    return 0


def _cmd_baseline(cfg: AppConfig) -> int:
    cloud, truth = _load_cloud(cfg)
    features = select_features(cloud, cfg.features, cfg.standardize)
    index = build_planar_index(cloud)
    result = kmeans(
        features, cfg.k, seed=cfg.seed, max_iter=cfg.kmeans_max_iter, tol=cfg.kmeans_tol
    )
    smoothed = knn_majority_smooth(
        index, result.labeling, neighbor_k=cfg.neighbor_k, repeats=cfg.smooth_repeats
    )
    fit_cfg = cfg.fitness_config()
    pen_before = inhomogeneity_penalty(index, result.labeling, fit_cfg)
    pen_after = inhomogeneity_penalty(index, smoothed, fit_cfg)
    out = Path(resolve_out_dir(cfg.out_dir, DEFAULT_OUT))
    out.mkdir(parents=True, exist_ok=True)
    write_labels_csv(out / "kmeans_labels.csv", result.labeling)
    write_labels_csv(out / "smoothed_labels.csv", smoothed)
    lines = [
        f"kmeans_inertia = {result.inertia:.9g}",
        f"kmeans_iterations = {result.iterations_used}",
        f"penalty_before_smoothing = {pen_before}",
        f"penalty_after_smoothing = {pen_after}",
    ]
    if truth is not None:
        lines.append(f"ari_vs_truth_kmeans = {adjusted_rand_index(truth, result.labeling):.9g}")
        lines.append(f"ari_vs_truth_smoothed = {adjusted_rand_index(truth, smoothed):.9g}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print(
        f"baseline: {len(cloud)} points, k={cfg.k}, inertia {result.inertia:.9g}, "
        f"penalty {pen_before} -> {pen_after}, report in {out}"
    )
    return 0


def _cmd_suite(cfg: AppConfig) -> int:
    cloud, _ = _load_cloud(cfg)
    features = select_features(cloud, cfg.features, cfg.standardize)
    index = build_planar_index(cloud)
    base = cfg.run_config()
    specs = [
        spec
        for spec in builtin_experiments(base, repetitions=cfg.repetitions)
        if spec.experiment_id in cfg.experiments
    ]
    report = run_suite(
        specs,
        features,
        index,
        scale=cfg.scale,
        master_seed=cfg.seed,
        workers=cfg.workers,
    )
    out = resolve_out_dir(cfg.out_dir, DEFAULT_OUT)
    emit_suite_report(report, out)
    runs = sum(len(res.final_best) for res in report.results)
    print(
        f"suite: {len(report.results)} experiments, {runs} runs, "
        f"scale {cfg.scale:g}, report in {out}"
    )
    return 0


def _cmd_synth(cfg: AppConfig) -> int:
    cloud, truth = generate_synthetic_scene(two_patch_scene(cfg.points), cfg.seed)
    out = Path(resolve_out_dir(cfg.out_dir, DEFAULT_OUT))
    out.mkdir(parents=True, exist_ok=True)
    scene_path = out / "scene.txt"
    scene_path.write_text(serialize_point_records(cloud))
    write_labels_csv(out / "scene_truth.csv", truth)
    print(f"synth: wrote {len(cloud)} points to {scene_path}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    path = Path(args.input)
    if not path.exists():
        raise ConfigError(f"input file {args.input!r} not found")
    cloud = parse_point_records(path.read_text(), source=str(path))
    print(f"points = {len(cloud)}")
    print(f"columns = {len(COLUMN_NAMES)}")
    for name in COLUMN_NAMES:
        col = cloud.column(name)
        print(f"{name}: min = {col.min():.9g}, max = {col.max():.9g}")
    return 0


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return int(exc.code) if exc.code is not None else 2
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        cfg = _config_from_args(args)
        if args.command == "cluster":
            return _cmd_cluster(cfg)
        if args.command == "baseline":
            return _cmd_baseline(cfg)
        if args.command == "suite":
            return _cmd_suite(cfg)
        if args.command == "synth":
            return _cmd_synth(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except GaclustError as exc:
        print(f"gaclust: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"gaclust: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())
