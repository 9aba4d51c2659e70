"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on 270x480 inputs (the reference frame size) and
prints median times for both backends plus the end-to-end single-frame
enhancement. Usage: python benchmarks/bench_kernels.py [repeats]
"""

import sys
import time

import numpy as np

from llve.kernels import numpy_impl

try:
    from llve.kernels import numba_impl

    BACKENDS = {"numpy": numpy_impl, "numba": numba_impl}
except ImportError:
    print("numba unavailable; benchmarking the numpy fallback only")
    BACKENDS = {"numpy": numpy_impl}

H, W = 270, 480


def median_ms(fn, repeats):
    fn()  # warm up (JIT compile on the numba path)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return sorted(times)[len(times) // 2] * 1000.0


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 9
    rng = np.random.default_rng(42)

    frame = rng.uniform(size=(H, W, 3))
    gamma = rng.uniform(0.25, 4.0, size=(H, W, 3))
    flow = rng.normal(scale=2.0, size=(H, W, 2))
    x1 = rng.normal(size=(3, H, W))
    w1 = rng.normal(size=(1, 3, 1, 1))
    x3 = rng.normal(size=(1, H + 2, W + 2))
    w3 = rng.normal(size=(1, 1, 3, 3))
    b1 = rng.normal(size=1)

    cases = {
        "conv2d 1x1 (3->1)": lambda impl: impl.conv2d(x1, w1, b1, 1, 1),
        "conv2d 3x3 (1->1)": lambda impl: impl.conv2d(x3, w3, b1, 1, 1),
        "bilinear_resize /2": lambda impl: impl.bilinear_resize(frame, H // 2, W // 2),
        "bilinear_resize x2": lambda impl: impl.bilinear_resize(frame, 2 * H, 2 * W),
        "warp_bilinear": lambda impl: impl.warp_bilinear(frame, flow),
        "pow_map": lambda impl: impl.pow_map(frame, gamma),
    }

    print(f"kernel benchmark at {H}x{W}, median of {repeats} runs")
    header = f"{'kernel':<22}" + "".join(f"{name + ' (ms)':>14}" for name in BACKENDS)
    print(header)
    print("-" * len(header))
    for label, case in cases.items():
        row = f"{label:<22}"
        for impl in BACKENDS.values():
            row += f"{median_ms(lambda: case(impl), repeats):>14.2f}"
        print(row)

    # end-to-end single-frame enhancement on the active backend
    from llve import Frame, default_spec
    from llve import kernels as active
    from llve.scheduler import ReuseConfig, enhance_sequence
    from llve.frames import FrameSequence

    spec = default_spec("random", seed=7)
    seq = FrameSequence([Frame(frame)])

    def enhance():
        enhance_sequence(seq, spec, ReuseConfig(0, 0, 1))

    print(f"\nend-to-end enhance ({active.BACKEND} backend): {median_ms(enhance, repeats):.1f} ms/frame")
    print("set LLVE_NO_NUMBA=1 to force the numpy fallback for the end-to-end path")


if __name__ == "__main__":
    main()
