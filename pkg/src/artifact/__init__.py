"""Accuracy limits and minimum power of concatenated fault-tolerant quantum computing."""

from . import accounting, crosstalk, ftcore, hardware, noise, optimizer, workloads
from .errors import (
    ArtifactError,
    ConsistencyError,
    Infeasible,
    InvalidArgument,
    OutOfRegime,
    ResourceLimit,
)

__version__ = "0.1.0"

__all__ = [
    "ArtifactError",
    "ConsistencyError",
    "Infeasible",
    "InvalidArgument",
    "OutOfRegime",
    "ResourceLimit",
    "accounting",
    "crosstalk",
    "ftcore",
    "hardware",
    "noise",
    "optimizer",
    "workloads",
]
