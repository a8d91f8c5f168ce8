"""Elements of F-spaces with prescribed distances to nested subspaces."""

from ._core import (
    SCHEMA_VERSION,
    Chain,
    ConfigError,
    Error,
    FNorm,
    InfeasibleTarget,
    InvalidSpec,
    PreconditionError,
    Sequence,
    Unsupported,
    construct_exact,
    construct_sandwich,
    distance,
    dnv,
    rescale,
    run_config,
)

__all__ = [
    "SCHEMA_VERSION",
    "Chain",
    "ConfigError",
    "Error",
    "FNorm",
    "InfeasibleTarget",
    "InvalidSpec",
    "PreconditionError",
    "Sequence",
    "Unsupported",
    "construct_exact",
    "construct_sandwich",
    "distance",
    "dnv",
    "rescale",
    "run_config",
]
