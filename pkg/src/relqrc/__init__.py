"""Relativity-enhanced quantum reservoir computing.

Inputs are encoded as proper-acceleration profiles of a detector inside a
cavity; its exact Gaussian (or dense truncated-Fock) dynamics produce a
feature map read out by closed-form ridge regression, with kernel-spectrum
diagnostics and circuit-QED drive-waveform synthesis on the side.
"""

from .encoding import EncodingConfig, build_profile, map_input
from .gaussian import GaussianState, ModeSet, Propagator
from .learning import DesignMatrix, KernelSpectrum, TrainedModel
from .reservoir import ReservoirConfig, feature_matrix, features_for
from .stepping import StepConfig
from .worldline import AccelerationProfile, KinematicsMode, WorldlinePoint

__all__ = [
    "AccelerationProfile",
    "DesignMatrix",
    "EncodingConfig",
    "GaussianState",
    "KernelSpectrum",
    "KinematicsMode",
    "ModeSet",
    "Propagator",
    "ReservoirConfig",
    "StepConfig",
    "TrainedModel",
    "WorldlinePoint",
    "build_profile",
    "feature_matrix",
    "features_for",
    "map_input",
]

__version__ = "0.1.0"
