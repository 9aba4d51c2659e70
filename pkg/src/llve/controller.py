"""Energy-aware adaptation: offline Pareto frontier, online config selection.

The decision space is the full cross product of the reuse knobs (11 x 4
x 3 = 132 configs), small enough to evaluate exhaustively. Each config
gets a (quality, energy) point: energy from the analytic model, quality
as the PSNR of its output against the no-reuse full-resolution output,
normalized by 50 dB and capped at 1. Online, a weight lambda derived
from the remaining energy supply scores frontier points and picks the
active config; an optional two-layer regressor can stand in for the
exhaustive quality oracle.
"""

import csv
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .energy import (
    CacheState,
    EnergyUnitCosts,
    config_counts,
    energy_from_counts,
)
from .frames import Frame, FrameSequence, luminance
from .imageio import resize_array
from .metrics import psnr
from .net import NetworkSpec
from .scheduler import (
    THETA_D_VALUES,
    THETA_F_VALUES,
    THETA_L_VALUES,
    ReuseConfig,
    enhance_sequence,
)

QUALITY_NORM_DB = 50.0
LAMBDA_MIN = 0.05
LAMBDA_MAX = 0.95
FEATURE_SIDE = 16  # per-frame luminance thumbnail; two frames -> 512 features
FEATURE_DIM = 2 * FEATURE_SIDE * FEATURE_SIDE


@dataclass(frozen=True)
class ObjectivePoint:
    config: ReuseConfig
    quality: float
    energy: float
    # Per-frame count totals kept for re-evaluating energy at a new
    # cache-hit-rate without re-running the quality oracle.
    macs_per_frame: float | None = field(default=None, compare=False)
    mem_per_frame: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.quality <= 1.0:
            raise ValueError(f"quality must be in [0, 1], got {self.quality}")
        if self.energy < 0.0:
            raise ValueError(f"energy must be non-negative, got {self.energy}")

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(), "Q": self.quality, "E": self.energy}


@dataclass(frozen=True)
class BudgetSnapshot:
    time_s: float
    supply_fraction: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.supply_fraction <= 1.0:
            raise ValueError(f"supply fraction must be in [0, 1], got {self.supply_fraction}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class ControllerState:
    pareto: list
    lambda_: float
    active_config: ReuseConfig
    check_period_s: float = 1.0
    # Full evaluated space and unit costs, carried so adaptation can
    # rebuild the frontier when the cache-hit-rate moves.
    space: list | None = field(default=None, compare=False)
    units: EnergyUnitCosts | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.lambda_ <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {self.lambda_}")
        if self.check_period_s <= 0.0:
            raise ValueError("check period must be positive")


def enumerate_configs() -> list:
    """All 132 reuse configurations in deterministic order."""
    return [
        ReuseConfig(f, l, d)
        for f in THETA_F_VALUES
        for l in THETA_L_VALUES
        for d in THETA_D_VALUES
    ]


def _quality_vs_baseline(outputs: FrameSequence, baseline: FrameSequence) -> float:
    scores = [
        min(psnr(a, b) / QUALITY_NORM_DB, 1.0)
        for a, b in zip(outputs.frames, baseline.frames)
    ]
    return float(np.mean(scores))


def evaluate_config(
    config: ReuseConfig,
    spec: NetworkSpec,
    sample: FrameSequence,
    cache: CacheState,
    units: EnergyUnitCosts,
    baseline: FrameSequence | None = None,
) -> ObjectivePoint:
    """Run the exhaustive oracle for one config on a sample sequence."""
    if len(sample) < config.theta_f + 2:
        raise ValueError(
            f"sample of {len(sample)} frames too short for theta_f={config.theta_f}"
        )
    if baseline is None:
        baseline, _, _ = enhance_sequence(sample, spec, ReuseConfig(0, 0, 1))
    outputs, _, _ = enhance_sequence(sample, spec, config)
    macs, mem = config_counts(spec, config, len(sample), sample.height, sample.width)
    macs_pf = macs / len(sample)
    mem_pf = mem / len(sample)
    return ObjectivePoint(
        config=config,
        quality=_quality_vs_baseline(outputs, baseline),
        energy=energy_from_counts(macs_pf, mem_pf, cache, units),
        macs_per_frame=macs_pf,
        mem_per_frame=mem_pf,
    )


def evaluate_space(
    spec: NetworkSpec,
    sample: FrameSequence,
    cache: CacheState,
    units: EnergyUnitCosts,
) -> list:
    """Evaluate every config in the decision space against one baseline run."""
    baseline, _, _ = enhance_sequence(sample, spec, ReuseConfig(0, 0, 1))
    return [
        evaluate_config(cfg, spec, sample, cache, units, baseline=baseline)
        for cfg in enumerate_configs()
    ]


def pareto_front(points: list) -> list:
    """Nondominated points (higher quality, lower energy), energy-ascending.

    Exact (quality, energy) duplicates collapse to their first occurrence.
    """
    if not points:
        raise ValueError("cannot take the Pareto front of no points")
    order = sorted(range(len(points)), key=lambda i: (points[i].energy, -points[i].quality, i))
    front = []
    best_q = -np.inf
    for i in order:
        if points[i].quality > best_q:
            front.append(points[i])
            best_q = points[i].quality
    return front


def select_lambda(supply_fraction: float) -> float:
    """Energy weight grows as the supply drains; clamped to (0.05, 0.95)."""
    if not 0.0 <= supply_fraction <= 1.0:
        raise ValueError(f"supply fraction must be in [0, 1], got {supply_fraction}")
    return min(max(1.0 - supply_fraction, LAMBDA_MIN), LAMBDA_MAX)


def select_config(pareto: list, lam: float) -> ReuseConfig:
    """Minimize lam * E_hat + (1 - lam) * (1 - Q) over the frontier.

    Energy is min-max normalized across the frontier; ties go to the
    lower-energy point.
    """
    if not pareto:
        raise ValueError("cannot select from an empty frontier")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    energies = [p.energy for p in pareto]
    e_min, e_max = min(energies), max(energies)
    span = e_max - e_min
    best = None
    best_score = np.inf
    for p in sorted(pareto, key=lambda q: q.energy):
        e_hat = (p.energy - e_min) / span if span > 0.0 else 0.0
        score = lam * e_hat + (1.0 - lam) * (1.0 - p.quality)
        if score < best_score:
            best = p
            best_score = score
    return best.config


def control_step(
    state: ControllerState,
    snapshot: BudgetSnapshot,
    predicted_demand: float,
    supply_budget: float,
) -> ControllerState:
    """Re-select the active config when predicted demand exceeds the budget.

    The frontier is rebuilt from the evaluated space at the snapshot's
    cache-hit-rate when count totals are available.
    """
    if predicted_demand <= supply_budget:
        return state
    lam = select_lambda(snapshot.supply_fraction)
    points = state.pareto
    if state.space is not None and state.units is not None:
        cache = CacheState(snapshot.epsilon, source="measured")
        points = [
            replace(
                p,
                energy=energy_from_counts(p.macs_per_frame, p.mem_per_frame, cache, state.units),
            )
            for p in state.space
        ]
    front = pareto_front(points)
    config = select_config(front, lam)
    return replace(state, pareto=front, lambda_=lam, active_config=config)


@dataclass(eq=False)
class RegressorSpec:
    """Two fully connected layers predicting (Q, E) for every config."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        self.w1 = np.asarray(self.w1, dtype=np.float64)
        self.b1 = np.asarray(self.b1, dtype=np.float64)
        self.w2 = np.asarray(self.w2, dtype=np.float64)
        self.b2 = np.asarray(self.b2, dtype=np.float64)
        n_out = 2 * len(enumerate_configs())
        if self.w1.ndim != 2 or self.w1.shape[1] != FEATURE_DIM:
            raise ValueError(f"w1 must be (hidden, {FEATURE_DIM}), got {self.w1.shape}")
        hidden = self.w1.shape[0]
        if self.b1.shape != (hidden,):
            raise ValueError(f"b1 must be ({hidden},), got {self.b1.shape}")
        if self.w2.shape != (n_out, hidden):
            raise ValueError(f"w2 must be ({n_out}, {hidden}), got {self.w2.shape}")
        if self.b2.shape != (n_out,):
            raise ValueError(f"b2 must be ({n_out},), got {self.b2.shape}")


def frame_pair_features(current: Frame, previous_key: Frame) -> np.ndarray:
    """16x16 luminance thumbnails of the current and previous keyframe, flattened."""
    feats = []
    for frame in (current, previous_key):
        lum = luminance(frame.data)[:, :, None]
        thumb = resize_array(lum, FEATURE_SIDE, FEATURE_SIDE)[:, :, 0]
        feats.append(thumb.ravel())
    return np.concatenate(feats)


def regressor_predict(reg: RegressorSpec, features: np.ndarray) -> list:
    """Predict (config, Q, E) for every config from a 512-feature vector."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (FEATURE_DIM,):
        raise ValueError(f"features must be ({FEATURE_DIM},), got {features.shape}")
    hidden = np.maximum(reg.w1 @ features + reg.b1, 0.0)
    out = reg.w2 @ hidden + reg.b2
    pairs = out.reshape(-1, 2)
    results = []
    for cfg, (q, e) in zip(enumerate_configs(), pairs):
        results.append((cfg, float(min(max(q, 0.0), 1.0)), float(max(e, 0.0))))
    return results


def save_regressor(reg: RegressorSpec, path: str) -> None:
    doc = {
        "version": 1,
        "input_dim": FEATURE_DIM,
        "hidden_dim": int(reg.w1.shape[0]),
        "output_dim": int(reg.w2.shape[0]),
        "w1": reg.w1.ravel().tolist(),
        "b1": reg.b1.tolist(),
        "w2": reg.w2.ravel().tolist(),
        "b2": reg.b2.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_regressor(path: str) -> RegressorSpec:
    try:
        with open(path) as fh:
            doc = json.load(fh)
        hidden = int(doc["hidden_dim"])
        out_dim = int(doc["output_dim"])
        in_dim = int(doc["input_dim"])
        w1 = np.asarray(doc["w1"], dtype=np.float64).reshape(hidden, in_dim)
        w2 = np.asarray(doc["w2"], dtype=np.float64).reshape(out_dim, hidden)
        return RegressorSpec(w1, doc["b1"], w2, doc["b2"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed regressor file ({exc})") from exc


def load_budget_trace(path: str) -> list:
    """Read a budget trace CSV with columns time_s,supply_fraction,epsilon."""
    rows = []
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or set(reader.fieldnames) < {
                "time_s",
                "supply_fraction",
                "epsilon",
            }:
                raise ValueError("header must include time_s,supply_fraction,epsilon")
            for row in reader:
                rows.append(
                    BudgetSnapshot(
                        float(row["time_s"]),
                        float(row["supply_fraction"]),
                        float(row["epsilon"]),
                    )
                )
    except (OSError, ValueError, KeyError) as exc:
        raise ValueError(f"{path}: malformed budget trace ({exc})") from exc
    if not rows:
        raise ValueError(f"{path}: empty budget trace")
    if any(b.time_s < a.time_s for a, b in zip(rows, rows[1:])):
        raise ValueError(f"{path}: trace times must be non-decreasing")
    return rows
