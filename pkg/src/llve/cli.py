"""Command-line interface: enhance, metrics, profile, pareto, simulate.

Exit codes: 0 success, 1 usage error, 2 runtime error. Machine-readable
JSON goes to stdout or the --out file; diagnostics go to stderr.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import kernels
from .controller import (
    enumerate_configs,
    evaluate_space,
    frame_pair_features,
    load_budget_trace,
    load_regressor,
    pareto_front,
    regressor_predict,
)
from .energy import (
    CacheState,
    layer_energy,
    load_epsilon_trace,
    load_platform_preset,
    network_layer_costs,
)
from .harness import run_simulation
from .imageio import load_frame, load_sequence, save_frame
from .metrics import pair_report, sequence_report
from .net import load_weights
from .scheduler import ReuseConfig, enhance_sequence


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _theta_d(text: str) -> Fraction:
    if text not in ("1", "1/2", "1/3"):
        raise argparse.ArgumentTypeError(f"theta-d must be 1, 1/2 or 1/3, got {text!r}")
    return Fraction(text)


def _resolution(text: str) -> tuple:
    try:
        h, w = text.lower().split("x")
        return int(h), int(w)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"resolution must look like 270x480, got {text!r}") from exc


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _apply_threads(n: int | None) -> None:
    if n is None:
        return
    if n < 1:
        raise UsageError(f"--threads must be >= 1, got {n}")
    if kernels.BACKEND == "numba":
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def build_parser() -> _Parser:
    parser = _Parser(prog="llve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--threads", type=int, default=None, help="cap internal parallelism")
        p.add_argument("--out", default=None, help="write JSON output here instead of stdout")

    p = sub.add_parser("enhance", help="enhance a frame directory under a reuse config")
    p.add_argument("--input", required=True, help="directory of input frames")
    p.add_argument("--output", required=True, help="directory for enhanced frames")
    p.add_argument("--weights", required=True, help="network weights JSON")
    p.add_argument("--theta-f", type=int, default=0)
    p.add_argument("--theta-l", type=int, default=0)
    p.add_argument("--theta-d", type=_theta_d, default=Fraction(1))
    common(p)

    p = sub.add_parser("metrics", help="quality metrics for a pair or a sequence")
    p.add_argument("--input", help="directory of frames to score")
    p.add_argument("--reference", help="directory of reference frames")
    p.add_argument("--a", help="single frame (pairs with --b)")
    p.add_argument("--b", help="single frame, treated as the aligned previous frame")
    common(p)

    p = sub.add_parser("profile", help="per-layer MAC/memory/energy table")
    p.add_argument("--weights", required=True)
    p.add_argument("--resolution", type=_resolution, required=True, help="HxW, e.g. 270x480")
    p.add_argument("--epsilon", type=float, default=None, help="cache-hit-rate in [0, 1]")
    p.add_argument("--epsilon-trace", default=None, help="CSV time_s,epsilon; mean is used")
    p.add_argument("--platform", required=True, help="platform preset JSON")
    common(p)

    p = sub.add_parser("pareto", help="evaluate the 132-config space and its frontier")
    p.add_argument("--weights", required=True)
    p.add_argument("--sample", required=True, help="directory with a sample frame sequence")
    p.add_argument("--platform", required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--regressor", default=None, help="predict (Q, E) with a regressor file")
    common(p)

    p = sub.add_parser("simulate", help="play a budget trace through the adaptation loop")
    p.add_argument("--input", required=True)
    p.add_argument("--trace", required=True, help="CSV time_s,supply_fraction,epsilon")
    p.add_argument("--weights", required=True)
    p.add_argument("--platform", required=True)
    p.add_argument("--fps", type=float, default=None)
    p.add_argument("--check-period", type=float, default=1.0)
    common(p)

    return parser


def _cmd_enhance(args) -> dict:
    seq = load_sequence(args.input)
    spec = load_weights(args.weights)
    config = ReuseConfig(args.theta_f, args.theta_l, args.theta_d)
    out_seq, plans, latencies = enhance_sequence(seq, spec, config)
    os.makedirs(args.output, exist_ok=True)
    names = sorted(
        n for n in os.listdir(args.input) if os.path.splitext(n)[1].lower() in (".png", ".ppm")
    )
    for frame, name in zip(out_seq.frames, names):
        save_frame(frame, os.path.join(args.output, name))
    payload = {
        "config": config.to_dict(),
        "frames": [
            {**plan.to_dict(), "latency_ms": ms} for plan, ms in zip(plans, latencies)
        ],
    }
    with open(os.path.join(args.output, "plan.json"), "w") as fh:
        json.dump(payload, fh, indent=2)
    return payload


def _cmd_metrics(args) -> dict:
    if args.a or args.b:
        if not (args.a and args.b):
            raise UsageError("--a and --b must be given together")
        report = pair_report(load_frame(args.a), load_frame(args.b))
    elif args.input:
        seq = load_sequence(args.input)
        ref = load_sequence(args.reference) if args.reference else None
        report = sequence_report(seq, ref)
    else:
        raise UsageError("metrics needs either --input or --a/--b")
    return report.to_dict()


def _cmd_profile(args) -> dict:
    spec = load_weights(args.weights)
    preset = load_platform_preset(args.platform)
    if args.epsilon is not None:
        eps = args.epsilon
    elif args.epsilon_trace:
        rows = load_epsilon_trace(args.epsilon_trace)
        eps = float(np.mean([e for _, e in rows]))
    else:
        raise UsageError("profile needs --epsilon or --epsilon-trace")
    cache = CacheState(eps, source="measured")
    h, w = args.resolution
    costs = network_layer_costs(spec, h, w)
    layers = []
    for i, (layer, cost) in enumerate(zip(spec.layers, costs)):
        layers.append(
            {
                "index": i,
                "kind": layer.kind,
                "macs": cost.macs,
                "mem_accesses": cost.mem_accesses,
                "energy": layer_energy(cost, cache, preset.units),
            }
        )
    return {
        "resolution": f"{h}x{w}",
        "epsilon": eps,
        "platform": preset.units.platform,
        "layers": layers,
        "total_macs": sum(c.macs for c in costs),
        "total_mem_accesses": sum(c.mem_accesses for c in costs),
        "total_energy": sum(entry["energy"] for entry in layers),
    }


def _cmd_pareto(args) -> dict:
    spec = load_weights(args.weights)
    preset = load_platform_preset(args.platform)
    sample = load_sequence(args.sample)
    cache = CacheState(args.epsilon, source="measured")
    if args.regressor:
        reg = load_regressor(args.regressor)
        prev_key = sample.frames[0]
        current = sample.frames[1] if len(sample) > 1 else sample.frames[0]
        preds = regressor_predict(reg, frame_pair_features(current, prev_key))
        points = [
            {"config": cfg.to_dict(), "Q": q, "E": e} for cfg, q, e in preds
        ]
        # Frontier over the predicted objective space.
        from .controller import ObjectivePoint

        objs = [ObjectivePoint(cfg, q, e) for cfg, q, e in preds]
        front = [p.to_dict() for p in pareto_front(objs)]
    else:
        space = evaluate_space(spec, sample, cache, preset.units)
        points = [p.to_dict() for p in space]
        front = [p.to_dict() for p in pareto_front(space)]
    return {"points": points, "front": front, "epsilon": args.epsilon}


def _cmd_simulate(args) -> dict:
    seq = load_sequence(args.input)
    spec = load_weights(args.weights)
    preset = load_platform_preset(args.platform)
    trace = load_budget_trace(args.trace)
    report = run_simulation(
        seq,
        trace,
        spec,
        preset.units,
        fps=args.fps,
        check_period_s=args.check_period,
        peak_mac_rate_per_ms=preset.peak_mac_rate_per_ms,
    )
    if args.out:
        csv_path = os.path.splitext(args.out)[0] + ".csv"
        with open(csv_path, "w") as fh:
            fh.write(report.to_csv())
    return report.to_dict()


_COMMANDS = {
    "enhance": _cmd_enhance,
    "metrics": _cmd_metrics,
    "profile": _cmd_profile,
    "pareto": _cmd_pareto,
    "simulate": _cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_threads(args.threads)
        payload = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures map to exit 2
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, args.out)
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
