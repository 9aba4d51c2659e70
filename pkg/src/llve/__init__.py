"""Low-light video enhancement with pixel-wise gamma curves, an analytic
layer-wise energy model, and a Pareto-based energy-aware adaptation
controller."""

__version__ = "0.1.0"

from .curves import CurveParamMap, GammaMap, apply_gamma_curve, apply_quadratic_curve
from .frames import Frame, FrameSequence
from .imageio import load_frame, load_sequence, resample, save_frame
from .net import NetworkSpec, default_spec, forward, forward_partial, load_weights, save_weights
from .scheduler import ReuseConfig, enhance_sequence

__all__ = [
    "__version__",
    "Frame",
    "FrameSequence",
    "GammaMap",
    "CurveParamMap",
    "NetworkSpec",
    "ReuseConfig",
    "apply_gamma_curve",
    "apply_quadratic_curve",
    "default_spec",
    "enhance_sequence",
    "forward",
    "forward_partial",
    "load_frame",
    "load_sequence",
    "load_weights",
    "resample",
    "save_frame",
    "save_weights",
]
