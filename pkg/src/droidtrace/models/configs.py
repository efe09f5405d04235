"""Classifier configurations, one tagged dataclass per family.

These carry every tunable the grid search sweeps. Validation happens at
construction so an invalid grid cell fails fast with a ValueError.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import ClassVar, Optional, Union

SOLVER_LABELS = ("lbfgs", "liblinear", "newton-cg", "sag", "saga")
KNN_METRICS = ("manhattan", "euclidean", "minkowski")
TREE_CRITERIA = ("gini", "entropy")
SVM_KERNELS = ("linear", "poly", "rbf")
GAMMA_MODES = ("auto", "scale")


@dataclass(frozen=True)
class LogRegConfig:
    family: ClassVar[str] = "logreg"
    c: float = 1.0
    # Recorded for reporting only: all labels run the same deterministic
    # full-batch optimizer.
    solver_label: str = "lbfgs"
    max_iter: int = 500
    tol: float = 1e-6

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError(f"c must be > 0, got {self.c}")
        if self.solver_label not in SOLVER_LABELS:
            raise ValueError(f"solver_label must be one of {SOLVER_LABELS}, got {self.solver_label!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol <= 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")


@dataclass(frozen=True)
class KnnConfig:
    family: ClassVar[str] = "knn"
    k: int = 5
    metric: str = "euclidean"
    p: float = 3.0  # minkowski exponent; 1 and 2 are covered by the named metrics

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.metric not in KNN_METRICS:
            raise ValueError(f"metric must be one of {KNN_METRICS}, got {self.metric!r}")
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")


@dataclass(frozen=True)
class TreeConfig:
    family: ClassVar[str] = "tree"
    criterion: str = "gini"
    max_depth: Optional[int] = None

    def __post_init__(self):
        if self.criterion not in TREE_CRITERIA:
            raise ValueError(f"criterion must be one of {TREE_CRITERIA}, got {self.criterion!r}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1 or None, got {self.max_depth}")


@dataclass(frozen=True)
class SvmConfig:
    family: ClassVar[str] = "svm"
    c: float = 1.0
    kernel: str = "linear"
    degree: int = 3
    gamma: Union[str, float] = "scale"
    tol: float = 1e-3
    max_passes: int = 10

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError(f"c must be > 0, got {self.c}")
        if self.kernel not in SVM_KERNELS:
            raise ValueError(f"kernel must be one of {SVM_KERNELS}, got {self.kernel!r}")
        if self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")
        if isinstance(self.gamma, str):
            if self.gamma not in GAMMA_MODES:
                raise ValueError(f"gamma must be 'auto', 'scale', or a positive number")
        elif self.gamma <= 0:
            raise ValueError(f"fixed gamma must be > 0, got {self.gamma}")
        if self.tol <= 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.max_passes < 1:
            raise ValueError(f"max_passes must be >= 1, got {self.max_passes}")


@dataclass(frozen=True)
class MlpConfig:
    family: ClassVar[str] = "mlp"
    alpha: float = 1e-4
    hidden_layers: tuple[int, ...] = (100,)
    max_iter: int = 200
    learning_rate: float = 0.1

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        layers = tuple(int(h) for h in self.hidden_layers)
        object.__setattr__(self, "hidden_layers", layers)
        if not layers or any(h < 1 for h in layers):
            raise ValueError(f"hidden_layers must be non-empty positive ints, got {layers}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")


ModelConfig = Union[LogRegConfig, KnnConfig, TreeConfig, SvmConfig, MlpConfig]

CONFIG_TYPES = {
    "logreg": LogRegConfig,
    "knn": KnnConfig,
    "tree": TreeConfig,
    "svm": SvmConfig,
    "mlp": MlpConfig,
}


def coerce_param(family: str, name: str, value):
    """Normalize a raw (JSON) parameter value for the given field."""
    if family == "mlp" and name == "hidden_layers":
        return tuple(int(h) for h in value)
    return value


def config_from_dict(data: dict) -> ModelConfig:
    payload = dict(data)
    family = payload.pop("family", None)
    if family not in CONFIG_TYPES:
        raise ValueError(f"unknown model family {family!r}")
    cls = CONFIG_TYPES[family]
    valid = {f.name for f in fields(cls)}
    unknown = set(payload) - valid
    if unknown:
        raise ValueError(f"unknown {family} parameter(s): {sorted(unknown)}")
    payload = {k: coerce_param(family, k, v) for k, v in payload.items()}
    return cls(**payload)


def config_to_dict(config: ModelConfig) -> dict:
    out: dict = {"family": config.family}
    for f in fields(config):
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            value = list(value)
        out[f.name] = value
    return out
