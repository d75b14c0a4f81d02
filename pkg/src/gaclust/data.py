"""Point-record ingestion, feature selection, and synthetic scenes.

The text format is one echo record per line, eight columns in the order
x y z t amp ew eid ne, comma- or whitespace-delimited, with an optional
header line (detected by a non-numeric first token). Point identity is
the zero-based position in file order and stays stable for a whole run.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigError,
    EmptyInputError,
    ParseError,
    SceneSpecError,
    ValidationError,
)

COLUMN_NAMES = ("x", "y", "z", "t", "amp", "ew", "eid", "ne")
DEFAULT_FEATURES = ("z", "amp", "ew", "eid", "ne")

_FLOAT_COLUMNS = ("x", "y", "z", "t", "amp", "ew")
_INT_COLUMNS = ("eid", "ne")


@dataclass(frozen=True)
class PointRecord:
    """One ALS echo: planar position, elevation, time, and signal attributes."""

    x: float
    y: float
    z: float
    t: float
    amp: float
    ew: float
    eid: int
    ne: int


class PointCloud:
    """Ordered, immutable collection of echo records stored column-wise.

    Equality compares the data columns only, not provenance, so a cloud
    survives a serialize/parse round trip unchanged.
    """

    def __init__(
        self,
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
        t: np.ndarray,
        amp: np.ndarray,
        ew: np.ndarray,
        eid: np.ndarray,
        ne: np.ndarray,
        source: str = "memory",
    ):
        cols = [np.asarray(c) for c in (x, y, z, t, amp, ew)]
        self.x, self.y, self.z, self.t, self.amp, self.ew = (
            np.ascontiguousarray(c, dtype=np.float64) for c in cols
        )
        self.eid = np.ascontiguousarray(eid, dtype=np.int64)
        self.ne = np.ascontiguousarray(ne, dtype=np.int64)
        self.source = source
        n = self.x.shape[0]
        if n == 0:
            raise EmptyInputError("point cloud has no points")
        for name in COLUMN_NAMES:
            if getattr(self, name).shape != (n,):
                raise ValidationError(f"column {name} length differs from x")
        for arr in (self.x, self.y, self.z, self.t, self.amp, self.ew):
            arr.setflags(write=False)
        self.eid.setflags(write=False)
        self.ne.setflags(write=False)

    def __len__(self) -> int:
        return self.x.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, c), getattr(other, c)) for c in COLUMN_NAMES
        )

    def column(self, name: str) -> np.ndarray:
        if name not in COLUMN_NAMES:
            raise ConfigError(f"unknown attribute {name!r}; valid: {COLUMN_NAMES}")
        return getattr(self, name)

    def record(self, i: int) -> PointRecord:
        return PointRecord(
            float(self.x[i]),
            float(self.y[i]),
            float(self.z[i]),
            float(self.t[i]),
            float(self.amp[i]),
            float(self.ew[i]),
            int(self.eid[i]),
            int(self.ne[i]),
        )

    def records(self):
        return (self.record(i) for i in range(len(self)))


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-point feature vectors in PointCloud order.

    ``means``/``stds`` record the standardization transform for the
    retained columns; both are None when no standardization was applied.
    """

    values: np.ndarray
    feature_names: tuple[str, ...]
    means: np.ndarray | None = None
    stds: np.ndarray | None = None

    def __post_init__(self):
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.values.shape[0]


def _split_tokens(line: str) -> list[str]:
    if "," in line:
        return [tok.strip() for tok in line.split(",")]
    return line.split()


def _is_numeric(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def parse_point_records(text, source: str = "<stream>") -> PointCloud:
    """Parse delimiter-separated echo records into a PointCloud.

    ``text`` may be a string or any iterable of lines. A first line whose
    leading token is non-numeric is treated as a header and skipped.
    """
    if isinstance(text, str):
        lines = text.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in text]
    cols: dict[str, list] = {name: [] for name in COLUMN_NAMES}
    saw_data = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = _split_tokens(line)
        if not saw_data and not _is_numeric(tokens[0]):
            continue  # header line
        if len(tokens) != len(COLUMN_NAMES):
            raise ParseError(
                f"expected {len(COLUMN_NAMES)} columns, found {len(tokens)}", lineno
            )
        values = []
        for name, tok in zip(COLUMN_NAMES, tokens):
            try:
                val = float(tok)
            except ValueError:
                raise ParseError(f"malformed numeric field {tok!r} in column {name}", lineno)
            if not math.isfinite(val):
                raise ParseError(f"non-finite value {tok!r} in column {name}", lineno)
            values.append(val)
        eid, ne = values[6], values[7]
        if eid != int(eid) or ne != int(ne):
            raise ValidationError(f"eid/ne must be integers, got {eid}/{ne}", lineno)
        eid, ne = int(eid), int(ne)
        if eid < 1 or ne < 1:
            raise ValidationError(f"eid and ne must be >= 1, got {eid}/{ne}", lineno)
        if eid > ne:
            raise ValidationError(f"eid {eid} exceeds ne {ne}", lineno)
        saw_data = True
        for name, val in zip(_FLOAT_COLUMNS, values[:6]):
            cols[name].append(val)
        cols["eid"].append(eid)
        cols["ne"].append(ne)
    if not saw_data:
        raise EmptyInputError("input contains no data lines")
    return PointCloud(
        np.array(cols["x"]),
        np.array(cols["y"]),
        np.array(cols["z"]),
        np.array(cols["t"]),
        np.array(cols["amp"]),
        np.array(cols["ew"]),
        np.array(cols["eid"], dtype=np.int64),
        np.array(cols["ne"], dtype=np.int64),
        source=source,
    )


def serialize_point_records(cloud: PointCloud, header: bool = True) -> str:
    """Render a cloud back to text; floats use shortest round-trip repr."""
    out = []
    if header:
        out.append(" ".join(COLUMN_NAMES))
    for i in range(len(cloud)):
        # plain-float repr: numpy scalar repr is not parseable text
        out.append(
            f"{float(cloud.x[i])!r} {float(cloud.y[i])!r} {float(cloud.z[i])!r} "
            f"{float(cloud.t[i])!r} {float(cloud.amp[i])!r} {float(cloud.ew[i])!r} "
            f"{int(cloud.eid[i])} {int(cloud.ne[i])}"
        )
    return "\n".join(out) + "\n"


def select_features(
    cloud: PointCloud,
    names: tuple[str, ...] = DEFAULT_FEATURES,
    standardize: bool = True,
) -> FeatureMatrix:
    """Assemble the clustering feature matrix from named attributes.

    Standardization centers each column and divides by the sample
    standard deviation (ddof=1). Constant columns cannot be standardized
    and are dropped with a warning; dropping every column is an error.
    """
    if not names:
        raise ConfigError("feature selection must name at least one attribute")
    for name in names:
        if name not in COLUMN_NAMES:
            raise ConfigError(f"unknown attribute {name!r}; valid: {COLUMN_NAMES}")
    raw = np.column_stack([cloud.column(name).astype(np.float64) for name in names])
    if not standardize:
        return FeatureMatrix(raw, tuple(names))
    n = raw.shape[0]
    means = raw.mean(axis=0)
    stds = raw.std(axis=0, ddof=1) if n > 1 else np.zeros(raw.shape[1])
    keep = stds > 0.0
    dropped = [name for name, flag in zip(names, keep) if not flag]
    if dropped:
        warnings.warn(
            f"dropping constant feature column(s) under standardization: {dropped}",
            stacklevel=2,
        )
    if not np.any(keep):
        raise ConfigError("all selected feature columns are constant; nothing to cluster")
    kept_names = tuple(name for name, flag in zip(names, keep) if flag)
    values = (raw[:, keep] - means[keep]) / stds[keep]
    return FeatureMatrix(values, kept_names, means[keep].copy(), stds[keep].copy())


@dataclass(frozen=True)
class RegionSpec:
    """One synthetic ground-cover region.

    ``rect`` is (xmin, ymin, xmax, ymax); z/amp/ew are (mean, std)
    Gaussian parameters; ``echo_probs`` maps (eid, ne) pairs to weights.
    """

    rect: tuple[float, float, float, float]
    n_points: int
    z: tuple[float, float] = (10.0, 1.0)
    amp: tuple[float, float] = (20.0, 2.0)
    ew: tuple[float, float] = (4.0, 0.5)
    echo_probs: dict = field(default_factory=lambda: {(1, 1): 1.0})


@dataclass(frozen=True)
class SceneSpec:
    """Declarative synthetic scene: disjoint rectangular regions."""

    regions: tuple[RegionSpec, ...]

    def validate(self) -> None:
        if not self.regions:
            raise SceneSpecError("scene needs at least one region")
        for idx, reg in enumerate(self.regions):
            xmin, ymin, xmax, ymax = reg.rect
            if not (xmin < xmax and ymin < ymax):
                raise SceneSpecError(f"region {idx}: rectangle has no area")
            if reg.n_points < 1:
                raise SceneSpecError(f"region {idx}: zero points")
            if reg.z[1] < 0 or reg.amp[1] < 0 or reg.ew[1] < 0:
                raise SceneSpecError(f"region {idx}: negative feature std")
            if not reg.echo_probs:
                raise SceneSpecError(f"region {idx}: empty echo distribution")
            for (eid, ne), w in reg.echo_probs.items():
                if eid < 1 or ne < 1 or eid > ne:
                    raise SceneSpecError(
                        f"region {idx}: invalid echo pair ({eid}, {ne})"
                    )
                if w < 0:
                    raise SceneSpecError(f"region {idx}: negative echo weight")
            if sum(reg.echo_probs.values()) <= 0:
                raise SceneSpecError(f"region {idx}: echo weights sum to zero")
        for i in range(len(self.regions)):
            for j in range(i + 1, len(self.regions)):
                a = self.regions[i].rect
                b = self.regions[j].rect
                if a[0] < b[2] and b[0] < a[2] and a[1] < b[3] and b[1] < a[3]:
                    raise SceneSpecError(f"regions {i} and {j} overlap")


def generate_synthetic_scene(spec: SceneSpec, seed: int) -> tuple[PointCloud, np.ndarray]:
    """Materialize a scene; returns the cloud and ground-truth labels (1-based).

    Deterministic per seed: each region draws from its own seed-derived
    stream, so editing one region never shifts another region's draws.
    """
    spec.validate()
    xs, ys, zs, ts, amps, ews, eids, nes, labels = ([] for _ in range(9))
    for idx, reg in enumerate(spec.regions):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, idx))))
        n = reg.n_points
        xmin, ymin, xmax, ymax = reg.rect
        xs.append(rng.uniform(xmin, xmax, n))
        ys.append(rng.uniform(ymin, ymax, n))
        zs.append(rng.normal(reg.z[0], reg.z[1], n))
        ts.append(np.full(n, float(idx)))
        amps.append(rng.normal(reg.amp[0], reg.amp[1], n))
        ews.append(rng.normal(reg.ew[0], reg.ew[1], n))
        pairs = sorted(reg.echo_probs.items())
        weights = np.array([w for _, w in pairs], dtype=np.float64)
        weights = weights / weights.sum()
        pick = rng.choice(len(pairs), size=n, p=weights)
        eids.append(np.array([pairs[p][0][0] for p in pick], dtype=np.int64))
        nes.append(np.array([pairs[p][0][1] for p in pick], dtype=np.int64))
        labels.append(np.full(n, idx + 1, dtype=np.int64))
    cloud = PointCloud(
        np.concatenate(xs),
        np.concatenate(ys),
        np.concatenate(zs),
        np.concatenate(ts),
        np.concatenate(amps),
        np.concatenate(ews),
        np.concatenate(eids),
        np.concatenate(nes),
        source="synthetic",
    )
    return cloud, np.concatenate(labels)


def two_patch_scene(n_points: int = 500) -> SceneSpec:
    """Canonical benchmark scene: two planarly gapped, well-separated covers.

    The rectangles are 10 map units apart so planar neighborhoods never
    straddle the boundary, and every feature mean differs by 10 standard
    deviations between regions, so the ground truth is both the spatially
    smooth and the feature-compact two-cover of the scene.
    """
    half = n_points // 2
    return SceneSpec(
        regions=(
            RegionSpec(
                rect=(0.0, 0.0, 50.0, 50.0),
                n_points=half,
                z=(5.0, 1.0),
                amp=(20.0, 2.0),
                ew=(4.0, 0.5),
                echo_probs={(1, 1): 0.7, (1, 2): 0.2, (2, 2): 0.1},
            ),
            RegionSpec(
                rect=(60.0, 0.0, 110.0, 50.0),
                n_points=n_points - half,
                z=(15.0, 1.0),
                amp=(40.0, 2.0),
                ew=(9.0, 0.5),
                echo_probs={(2, 2): 0.5, (1, 2): 0.3, (3, 3): 0.2},
            ),
        )
    )
