"""Nonlinear semigroups of accretive operators with certified convergence rates.

The package builds ``S(t)x = lim (J_{t/n})^n x`` for concrete m-accretive
operators on finite-dimensional smooth spaces, computes explicit thresholds
for the behaviour of ``J_t x`` against ``S(t)x`` as ``t -> 0`` and
``t -> inf``, and checks those thresholds numerically.
"""

from .certificate import Claim, Direction, RateCertificate
from .errors import (
    AccretiveError,
    BudgetExceeded,
    ConfigError,
    DimensionMismatch,
    DomainError,
    ResolventError,
    SnapshotMismatch,
    StepSizeError,
)
from .operator import ConstantOperator, DiagonalOperator, LinearOperator, ScalarFn
from .semigroup import SemigroupEvaluator, cl_rate, equicontinuity_threshold
from .space import SpaceInstance, euclidean, lp

__version__ = "0.1.0"

__all__ = [
    "AccretiveError",
    "BudgetExceeded",
    "Claim",
    "ConfigError",
    "ConstantOperator",
    "DiagonalOperator",
    "DimensionMismatch",
    "Direction",
    "DomainError",
    "LinearOperator",
    "RateCertificate",
    "ResolventError",
    "ScalarFn",
    "SemigroupEvaluator",
    "SnapshotMismatch",
    "SpaceInstance",
    "StepSizeError",
    "cl_rate",
    "equicontinuity_threshold",
    "euclidean",
    "lp",
]
