"""Training side of the llve enhancement engine: siamese loop, losses,
and weight export in the engine's format."""

__version__ = "0.1.0"

from .model import GammaNet, export_weights, import_weights, zero_init
from .train import TrainConfig, siamese_step, train

__all__ = [
    "GammaNet",
    "TrainConfig",
    "export_weights",
    "import_weights",
    "siamese_step",
    "train",
    "zero_init",
]
