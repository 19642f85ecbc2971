"""Adaptive resonance theory toolkit: online clustering and simplified ARTMAP."""

from .engine import (
    MODEL_KINDS,
    ArtModel,
    ArtState,
    PresentOutcome,
    ResonanceVerdict,
    Verdict,
    check_convergence,
    fit,
    predict,
    present,
)
from .errors import ArtError, ConfigError, DataError, ModelError, SchemaError, VersionError
from .fuzzy import ART1, DVFA, FuzzyART
from .geometric import EllipsoidART, HypersphereART
from .probabilistic import BayesianART, GaussianART
from .supervised import SfamState, sfam_fit, sfam_predict, sfam_train_step
from .topology import TopoParams, TopoState

__version__ = "0.1.0"

__all__ = [
    "MODEL_KINDS",
    "ArtModel",
    "ArtState",
    "PresentOutcome",
    "ResonanceVerdict",
    "Verdict",
    "check_convergence",
    "fit",
    "predict",
    "present",
    "ArtError",
    "ConfigError",
    "DataError",
    "ModelError",
    "SchemaError",
    "VersionError",
    "ART1",
    "DVFA",
    "FuzzyART",
    "EllipsoidART",
    "HypersphereART",
    "BayesianART",
    "GaussianART",
    "SfamState",
    "sfam_fit",
    "sfam_predict",
    "sfam_train_step",
    "TopoParams",
    "TopoState",
]
