"""Full-reference and temporal-stability quality metrics.

PSNR/SSIM/MAE compare a frame against a reference; TSSIM and MABD
describe a sequence's temporal stability; the exposure and color
consistency measures quantify the residual between a frame and the
motion-aligned previous frame, summed over pixels (Eq-style raw sums)
and also normalized per pixel.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

from .flow import estimate_flow, warp
from .frames import Frame, FrameSequence, luminance, require_same_dims

PSNR_CAP_DB = 100.0
SSIM_SIGMA = 1.5
SSIM_TRUNCATE = 3.5  # 11x11 window at sigma 1.5
SSIM_C1 = 0.01 ** 2
SSIM_C2 = 0.03 ** 2
COLOR_DELTA = 1e-4


@dataclass
class MetricReport:
    psnr: float | None = None
    ssim: float | None = None
    mae: float | None = None
    tssim: float | None = None
    mabd: float | None = None
    exposure_consistency: float | None = None
    color_consistency: float | None = None
    exposure_consistency_sum: float | None = None
    color_consistency_sum: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def psnr(a: Frame, b: Frame) -> float:
    """Peak signal-to-noise ratio in dB at unit peak, capped at 100."""
    require_same_dims(a, b)
    mse = float(np.mean((a.data - b.data) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(10.0 * math.log10(1.0 / mse), PSNR_CAP_DB)


def ssim(a: Frame, b: Frame) -> float:
    """Mean structural similarity of the luminance planes.

    Gaussian window (sigma 1.5, 11 taps), constants C1=0.01^2 and
    C2=0.03^2 at unit dynamic range; the half-window border is cropped
    before averaging.
    """
    require_same_dims(a, b)
    radius = int(SSIM_TRUNCATE * SSIM_SIGMA + 0.5)
    win = 2 * radius + 1
    if a.height < win or a.width < win:
        raise ValueError(f"frames must be at least {win}x{win} for SSIM, got {a.height}x{a.width}")
    x = luminance(a.data)
    y = luminance(b.data)

    def filt(img):
        return gaussian_filter(img, sigma=SSIM_SIGMA, truncate=SSIM_TRUNCATE, mode="nearest")

    ux = filt(x)
    uy = filt(y)
    vx = filt(x * x) - ux * ux
    vy = filt(y * y) - uy * uy
    vxy = filt(x * y) - ux * uy
    num = (2.0 * ux * uy + SSIM_C1) * (2.0 * vxy + SSIM_C2)
    den = (ux * ux + uy * uy + SSIM_C1) * (vx + vy + SSIM_C2)
    smap = num / den
    return float(smap[radius:-radius, radius:-radius].mean())


def mae(a: Frame, b: Frame) -> float:
    """Mean absolute error on the 0-255 scale."""
    require_same_dims(a, b)
    return float(np.mean(np.abs(a.data - b.data)) * 255.0)


def tssim(seq: FrameSequence) -> float:
    """Mean SSIM over consecutive frame pairs."""
    if len(seq) < 2:
        raise ValueError("temporal SSIM needs at least two frames")
    vals = [ssim(seq.frames[i], seq.frames[i + 1]) for i in range(len(seq) - 1)]
    return float(np.mean(vals))


def mabd(seq: FrameSequence) -> float:
    """Mean absolute delta of per-frame mean luminance between neighbors."""
    if len(seq) < 2:
        raise ValueError("brightness delta needs at least two frames")
    means = np.array([float(luminance(f.data).mean()) for f in seq.frames])
    return float(np.mean(np.abs(np.diff(means))))


def exposure_consistency(e_t1: Frame, e_t_aligned: Frame) -> float:
    """Summed per-pixel |channel-sum difference| between a frame and the aligned previous one."""
    require_same_dims(e_t1, e_t_aligned)
    s1 = e_t1.data.sum(axis=2)
    s0 = e_t_aligned.data.sum(axis=2)
    return float(np.abs(s1 - s0).sum())


def color_consistency(e_t1: Frame, e_t_aligned: Frame, c: float = COLOR_DELTA) -> float:
    """Summed per-pixel, per-channel difference of delta-regularized channel ratios."""
    require_same_dims(e_t1, e_t_aligned)
    if c <= 0.0:
        raise ValueError(f"delta constant must be positive, got {c}")
    s1 = e_t1.data.sum(axis=2, keepdims=True) + c
    s0 = e_t_aligned.data.sum(axis=2, keepdims=True) + c
    r1 = (e_t1.data + c) / s1
    r0 = (e_t_aligned.data + c) / s0
    return float(np.abs(r1 - r0).sum())


def frame_difference_map(a: Frame, b: Frame) -> Frame:
    """Per-pixel |a - b| as a frame, for flicker visualization."""
    require_same_dims(a, b)
    return Frame(np.abs(a.data - b.data), check=False)


def pair_report(a: Frame, b: Frame) -> MetricReport:
    """Full-reference metrics for a frame pair; b doubles as the aligned frame
    for the consistency measures."""
    n = a.height * a.width
    exp_sum = exposure_consistency(a, b)
    col_sum = color_consistency(a, b)
    return MetricReport(
        psnr=psnr(a, b),
        ssim=ssim(a, b),
        mae=mae(a, b),
        exposure_consistency=exp_sum / n,
        color_consistency=col_sum / n,
        exposure_consistency_sum=exp_sum,
        color_consistency_sum=col_sum,
    )


def sequence_report(seq: FrameSequence, reference: FrameSequence | None = None) -> MetricReport:
    """Temporal metrics for a sequence, with flow-aligned consistency values.

    With a reference sequence of equal length, PSNR/SSIM/MAE are the
    means over frame pairs.
    """
    rep = MetricReport(tssim=tssim(seq), mabd=mabd(seq))
    exp_sums = []
    col_sums = []
    n = seq.height * seq.width
    for i in range(len(seq) - 1):
        e_t, e_t1 = seq.frames[i], seq.frames[i + 1]
        aligned = warp(e_t, estimate_flow(e_t, e_t1))
        exp_sums.append(exposure_consistency(e_t1, aligned))
        col_sums.append(color_consistency(e_t1, aligned))
    rep.exposure_consistency_sum = float(np.mean(exp_sums))
    rep.color_consistency_sum = float(np.mean(col_sums))
    rep.exposure_consistency = rep.exposure_consistency_sum / n
    rep.color_consistency = rep.color_consistency_sum / n
    if reference is not None:
        if len(reference) != len(seq):
            raise ValueError(
                f"reference has {len(reference)} frames, sequence has {len(seq)}"
            )
        rep.psnr = float(np.mean([psnr(a, b) for a, b in zip(seq.frames, reference.frames)]))
        rep.ssim = float(np.mean([ssim(a, b) for a, b in zip(seq.frames, reference.frames)]))
        rep.mae = float(np.mean([mae(a, b) for a, b in zip(seq.frames, reference.frames)]))
    return rep
