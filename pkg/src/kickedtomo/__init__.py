"""Delta-kicked Caldirola-Kanai oscillator with an independent numerical oracle."""

from .moments import FirstMoments, GaussianState, SecondMoments
from .tomography import FrameParams, GaussianSlice
from .trajectory import OscillatorParams, Regime, RegimeError, TrajectoryPoint

__all__ = [
    "FirstMoments",
    "FrameParams",
    "GaussianSlice",
    "GaussianState",
    "OscillatorParams",
    "Regime",
    "RegimeError",
    "SecondMoments",
    "TrajectoryPoint",
]

__version__ = "0.1.0"
