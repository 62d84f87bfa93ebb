"""Rate certificates: a threshold together with the claim it certifies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError

__all__ = ["Direction", "Claim", "RateCertificate"]


class Direction(str, Enum):
    ALL_T_BELOW = "all_t_below"
    ALL_T_ABOVE = "all_t_above"


class Claim(str, Enum):
    """Every checkable statement a certificate can make.

    The docstring of each rate function states the inequality in full; the
    short form here names the measured quantity.
    """

    RESOLVENT_ROC = "resolvent_roc"  # |Ax| - ||x - J_t x||/t <= eps
    MIYADERA = "miyadera"  # <(S(t)x - x)/t, j(x - x0)> <= <y0, x0 - x>_s + eps
    SEMIGROUP_ROC = "semigroup_roc"  # |Ax| - ||x - S(t)x||/t <= eps
    RES_CAUCHY = "res_cauchy"  # ||A_t x - A_s x|| <= eps, s < t
    RES_SEMI_COMB = "res_semi_comb"  # ||A_t x - (x - S(s)x)/s|| <= eps, s/t small
    PLANT_MAIN = "plant_main"  # ||J_t x - S(t)x||/t <= eps
    REICH_GROWTH = "reich_growth"  # | ||J_t x||/t - d | <= eps
    REICH_ESCAPE = "reich_escape"  # ||J_t x|| >= K
    REICH_DIRECTION = "reich_direction"  # ||z/||z|| + J_t x/||J_t x|| || <= eps
    REICH_CAUCHY = "reich_cauchy"  # ||J_s x/s - J_t x/t|| <= eps
    REICH_MAIN = "reich_main"  # ||J_t x - S(t)x||/t <= eps

    @property
    def direction(self):
        if self.value.startswith("reich"):
            return Direction.ALL_T_ABOVE
        return Direction.ALL_T_BELOW


@dataclass(frozen=True)
class RateCertificate:
    """``(eps, threshold, direction, claim)`` plus the parameters it used.

    ``params`` is a plain-dict snapshot of the rate parameters (``b``, ``n``,
    ``E``, ...), checked against an instance before any verification run.
    """

    epsilon: float
    threshold: float
    direction: Direction
    claim: Claim
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise DomainError("epsilon must be positive")
        if not (self.threshold > 0 and math.isfinite(self.threshold)):
            raise DomainError(f"threshold must be positive and finite, got {self.threshold}")
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "claim", Claim(self.claim))

    def covers(self, t):
        """Whether ``t`` lies on the certified side of the threshold."""
        if self.direction is Direction.ALL_T_BELOW:
            return 0 < t <= self.threshold
        return t >= self.threshold

    def with_threshold(self, threshold):
        """Copy with a different threshold (used to build falsified controls)."""
        return RateCertificate(self.epsilon, threshold, self.direction, self.claim, dict(self.params))

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "threshold": self.threshold,
            "direction": self.direction.value,
            "claim": self.claim.value,
            "params": self.params,
        }
