"""Analytic layer-wise energy model.

Per layer, energy combines the MAC count with the memory-access count
split between cache and DRAM by the runtime cache-hit-rate:

    E_l = d_c * C_l + eps * d_cache * M_l + (1 - eps) * d_dram * M_l + d_sm * M_l

Counts follow the operation loops of each layer type: a convolution
performs K^2 * (Cin/groups) * Cout * H * W MACs and
2 * Cout * (Cin/groups) * H * W * K^2 + Cout * H * W accesses at output
resolution H x W; activations are access-only (2 * C * H * W).

Totals over a sequence apply the reuse masks of the scheduler plan and
scale linearly by the down-sampling rate theta_d. The estimator is
intentionally linear in theta_d even though the executor shrinks both
dimensions; both are monotone, which keeps config rankings consistent.
"""

import csv
import json
from dataclasses import dataclass

from .net import LayerSpec, NetworkSpec
from .scheduler import ReuseConfig, expand_layer_masks

# Unit cost ratios (MAC : cache : DRAM : shared memory), normalized to one MAC.
GPU_UNIT_COSTS = (1.0, 6.0, 200.0, 2.0)
CPU_UNIT_COSTS = (1.0, 6.0, 200.0, 0.0)


@dataclass(frozen=True)
class EnergyUnitCosts:
    delta_c: float
    delta_cache: float
    delta_dram: float
    delta_sm: float
    platform: str = "cpu"

    def __post_init__(self):
        for name in ("delta_c", "delta_cache", "delta_dram", "delta_sm"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        if self.platform not in ("cpu", "gpu"):
            raise ValueError(f"platform must be cpu or gpu, got {self.platform!r}")
        if self.platform == "cpu" and self.delta_sm != 0.0:
            raise ValueError("cpu platforms have no shared memory; delta_sm must be 0")


def cpu_preset() -> EnergyUnitCosts:
    return EnergyUnitCosts(*CPU_UNIT_COSTS, platform="cpu")


def gpu_preset() -> EnergyUnitCosts:
    return EnergyUnitCosts(*GPU_UNIT_COSTS, platform="gpu")


@dataclass(frozen=True)
class LayerCost:
    macs: int
    mem_accesses: int

    def __post_init__(self):
        if self.macs < 0 or self.mem_accesses < 0:
            raise ValueError("layer costs must be non-negative")


@dataclass(frozen=True)
class CacheState:
    epsilon: float
    source: str = "measured"

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"cache-hit-rate must be in [0, 1], got {self.epsilon}")
        if self.source not in ("trace", "measured"):
            raise ValueError(f"cache state source must be trace or measured, got {self.source!r}")


def mac_count(layer: LayerSpec, h: int, w: int) -> int:
    """MACs for one layer at output resolution h x w."""
    if layer.kind != "conv":
        return 0
    return layer.k * layer.k * (layer.cin // layer.groups) * layer.cout * h * w


def mem_access_count(layer: LayerSpec, h: int, w: int) -> int:
    """Memory accesses for one layer at output resolution h x w."""
    if layer.kind == "conv":
        return 2 * layer.cout * (layer.cin // layer.groups) * h * w * layer.k * layer.k + layer.cout * h * w
    # Activations read and write each element once.
    return 2 * layer.cout * h * w


def layer_cost(layer: LayerSpec, h: int, w: int) -> LayerCost:
    return LayerCost(mac_count(layer, h, w), mem_access_count(layer, h, w))


def layer_energy(cost: LayerCost, cache: CacheState, units: EnergyUnitCosts) -> float:
    eps = cache.epsilon
    return (
        units.delta_c * cost.macs
        + eps * units.delta_cache * cost.mem_accesses
        + (1.0 - eps) * units.delta_dram * cost.mem_accesses
        + units.delta_sm * cost.mem_accesses
    )


def network_layer_costs(spec: NetworkSpec, h: int, w: int) -> list:
    """Per-layer costs with spatial dims propagated through strides."""
    dims = [(h, w)]  # dims of tensor 0 and each layer output
    costs = []
    for layer in spec.layers:
        in_h, in_w = dims[layer.dense_inputs[0]]
        if layer.kind == "conv":
            out_h = (in_h + 2 * layer.padding - layer.k) // layer.stride + 1
            out_w = (in_w + 2 * layer.padding - layer.k) // layer.stride + 1
        else:
            out_h, out_w = in_h, in_w
        costs.append(layer_cost(layer, out_h, out_w))
        dims.append((out_h, out_w))
    return costs


def total_energy(
    spec: NetworkSpec,
    config: ReuseConfig,
    n_frames: int,
    cache: CacheState,
    units: EnergyUnitCosts,
    h: int,
    w: int,
) -> float:
    """Masked, theta_d-scaled energy over n_frames at base resolution h x w."""
    masks = expand_layer_masks(config, n_frames, spec.layer_count)
    energies = [layer_energy(c, cache, units) for c in network_layer_costs(spec, h, w)]
    total = 0.0
    for f in range(n_frames):
        for l, e in enumerate(energies):
            if masks[f, l]:
                total += e
    return total * float(config.theta_d)


def config_counts(spec: NetworkSpec, config: ReuseConfig, n_frames: int, h: int, w: int) -> tuple:
    """Masked, theta_d-scaled (MACs, memory accesses) totals over n_frames."""
    masks = expand_layer_masks(config, n_frames, spec.layer_count)
    costs = network_layer_costs(spec, h, w)
    macs = 0.0
    mem = 0.0
    for f in range(n_frames):
        for l, c in enumerate(costs):
            if masks[f, l]:
                macs += c.macs
                mem += c.mem_accesses
    scale = float(config.theta_d)
    return macs * scale, mem * scale


def energy_from_counts(macs: float, mem: float, cache: CacheState, units: EnergyUnitCosts) -> float:
    eps = cache.epsilon
    return units.delta_c * macs + (
        eps * units.delta_cache + (1.0 - eps) * units.delta_dram + units.delta_sm
    ) * mem


def estimate_cache_hit_rate(measured_mac_rate: float, peak_mac_rate: float) -> CacheState:
    """Hit rate as the measured MAC throughput over the 100%-hit throughput."""
    if peak_mac_rate <= 0.0:
        raise ValueError(f"peak MAC rate must be positive, got {peak_mac_rate}")
    if measured_mac_rate < 0.0:
        raise ValueError(f"measured MAC rate must be non-negative, got {measured_mac_rate}")
    eps = min(max(measured_mac_rate / peak_mac_rate, 0.0), 1.0)
    return CacheState(eps, source="measured")


@dataclass(frozen=True)
class PlatformPreset:
    units: EnergyUnitCosts
    peak_mac_rate_per_ms: float


def load_platform_preset(path: str) -> PlatformPreset:
    """Read {"platform", "unit_costs", "peak_mac_rate_per_ms"} from JSON."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
        platform = doc["platform"]
        costs = [float(v) for v in doc["unit_costs"]]
        peak = float(doc["peak_mac_rate_per_ms"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed platform preset ({exc})") from exc
    if len(costs) != 4:
        raise ValueError(f"{path}: unit_costs must have 4 entries")
    if peak <= 0.0:
        raise ValueError(f"{path}: peak_mac_rate_per_ms must be positive")
    return PlatformPreset(EnergyUnitCosts(*costs, platform=platform), peak)


def save_platform_preset(preset: PlatformPreset, path: str) -> None:
    doc = {
        "platform": preset.units.platform,
        "unit_costs": [
            preset.units.delta_c,
            preset.units.delta_cache,
            preset.units.delta_dram,
            preset.units.delta_sm,
        ],
        "peak_mac_rate_per_ms": preset.peak_mac_rate_per_ms,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_epsilon_trace(path: str) -> list:
    """Read a cache-hit-rate trace CSV with columns time_s,epsilon."""
    rows = []
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or set(reader.fieldnames) < {"time_s", "epsilon"}:
                raise ValueError("header must include time_s,epsilon")
            for row in reader:
                rows.append((float(row["time_s"]), float(row["epsilon"])))
    except (OSError, ValueError, KeyError) as exc:
        raise ValueError(f"{path}: malformed epsilon trace ({exc})") from exc
    if not rows:
        raise ValueError(f"{path}: empty epsilon trace")
    for _, eps in rows:
        CacheState(eps, source="trace")
    return rows
