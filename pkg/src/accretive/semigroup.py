"""Nonlinear semigroups through the Crandall-Liggett exponential formula.

``S(t)x`` is approximated by ``(J_{t/n})^n x``.  The number of compositions
comes from the rate ``ceil(2^(2k+2) T^2 b^2)``, which guarantees
``||S(t)x - (J_{t/n})^n x|| <= 2^-k`` whenever ``t < T`` and the witness
``v in Ax`` has ``||v|| < b``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DomainError
from .operator import ConstantOperator, DiagonalOperator, OperatorInstance
from .space import SpaceInstance

__all__ = [
    "SemigroupEvaluator",
    "StepPlan",
    "cl_rate",
    "equicontinuity_threshold",
    "growth_bound",
]

_EPS = np.finfo(float).eps
# per-step rounding allowance, relative to the trajectory scale
_ROUNDING = 16 * _EPS
_MIN_TOL = 1e-15


def cl_rate(k, b, T):
    """``ceil(2^(2k+2) * T^2 * b^2)``.

    Examples
    --------
    >>> cl_rate(4, 1, 1)
    1024
    >>> cl_rate(4, 2, 3)
    36864
    """
    if not (b > 0 and T > 0):
        raise DomainError("cl_rate needs b > 0 and T > 0")
    if k < 0 or int(k) != k:
        raise DomainError("k must be a nonnegative integer")
    return math.ceil(4.0 ** (int(k) + 1) * float(T) ** 2 * float(b) ** 2)


def equicontinuity_threshold(op, b, m, space):
    """``2^-(m+3) / max(1, A*(b+1))``.

    Time differences below the threshold move ``S(.)q`` by less than
    ``2^-m`` for every ``q`` in the ``b``-ball.
    """
    return 2.0 ** (-(m + 3)) / max(1.0, op.majorant(b + 1, space))


def growth_bound(op, space, x, T):
    """``1 + ||x|| + 2||c|| + T||d_c||`` bounds ``||S(t)x||`` for ``t < T``."""
    c, dc = op.domain_witness()
    return 1.0 + float(space.norm(x)) + 2.0 * float(space.norm(c)) + T * float(space.norm(dc))


@dataclass(frozen=True)
class StepPlan:
    """How ``semigroup_eval`` reaches a requested accuracy.

    ``n`` compositions at resolvent tolerance ``tol``; ``k`` is the
    truncation exponent, ``b`` and ``T`` the bounds fed to ``cl_rate``.
    """

    t: float
    delta: float
    n: int
    k: int
    b: float
    T: float
    tol: float
    exact: bool = False


class SemigroupEvaluator:
    """Evaluate ``S(t)x`` with a guaranteed error.

    Parameters
    ----------
    op : OperatorInstance
    space : SpaceInstance
    resolvent_tol : float
        Relative residual tolerance handed to every resolvent solve.
    max_steps : int
        Largest composition count the evaluator will run for operators that
        need an explicit loop.  Affine operators are iterated by repeated
        squaring and only limited by rounding.
    workers : int
        Thread count for the batch API.
    """

    def __init__(self, op: OperatorInstance, space: SpaceInstance, resolvent_tol=1e-12,
                 max_steps=2**25, workers=1):
        if op.dimension != space.dimension:
            raise DomainError("operator and space dimensions differ")
        self.op = op
        self.space = space
        self.resolvent_tol = float(resolvent_tol)
        self.max_steps = int(max_steps)
        self.workers = int(workers)

    # -- raw iterate ------------------------------------------------------

    def cl_iterate(self, t, x, n, tol=None):
        """``(J_{t/n})^n x``."""
        if t < 0:
            raise DomainError("t must be nonnegative")
        if n < 1:
            raise DomainError("n must be positive")
        tol = self.resolvent_tol if tol is None else tol
        if t == 0:
            return self.op._vec(x).copy()
        return self.op.iterate_resolvent(t / n, x, int(n), tol)

    # -- certified evaluation -------------------------------------------

    def plan(self, t, x, delta):
        """Choose ``n`` and the resolvent tolerance for ``||y - S(t)x|| <= delta``."""
        if not delta > 0:
            raise DomainError("delta must be positive")
        if t < 0:
            raise DomainError("t must be nonnegative")
        x = self.op._vec(x)
        if t == 0 or isinstance(self.op, ConstantOperator):
            return StepPlan(t, delta, 1, 0, 0.0, 0.0, self.resolvent_tol, exact=True)
        vnorm = float(self.space.norm(self.op.apply(x)))
        # only the witness norm enters the truncation error 2t|Ax|/sqrt(n)
        b = vnorm * (1 + 1e-12) if vnorm > 0 else 1e-300
        T = t * (1 + 1e-12)
        k = max(0, math.ceil(math.log2(2.0 / delta)))
        n = max(cl_rate(k, b, T), math.ceil(t / self.op.lambda0) + 1 if math.isfinite(self.op.lambda0) else 1, 8)
        if isinstance(self.op, DiagonalOperator) and n > self.max_steps:
            raise BudgetExceeded(n, self.max_steps)
        # resolvent errors pass through n nonexpansive maps
        scale = max(1.0, float(self.space.norm(x)) + t * vnorm)
        tol = self.resolvent_tol
        if n * (tol + _ROUNDING) * scale > delta / 2:
            tol = delta / (2 * n * scale) - _ROUNDING
            if tol < _MIN_TOL:
                raise BudgetExceeded(
                    n, self.max_steps,
                    f"delta={delta:g} needs n={n} compositions, more than rounding allows",
                )
        return StepPlan(t, delta, n, k, b, T, tol)

    def semigroup_eval(self, t, x, delta):
        """Return ``y`` with ``||y - S(t)x|| <= delta``."""
        return self.evaluate(t, x, delta)[0]

    def evaluate(self, t, x, delta):
        """Like ``semigroup_eval`` but also return the ``StepPlan`` used."""
        x = self.op._vec(x)
        p = self.plan(t, x, delta)
        if t == 0:
            return x.copy(), p
        if p.exact:
            return x - t * self.op.q, p
        return self.cl_iterate(t, x, p.n, p.tol), p

    def evaluate_grid(self, ts, x, delta):
        """``semigroup_eval`` over a grid of times; results keep grid order."""
        ts = [float(t) for t in ts]
        if self.workers <= 1 or len(ts) < 2:
            return [self.evaluate(t, x, delta) for t in ts]
        with ThreadPoolExecutor(self.workers) as pool:
            return list(pool.map(lambda t: self.evaluate(t, x, delta), ts))

    def trajectory(self, t_max, x, delta, steps=None):
        """Sample ``S(t)x`` on ``steps + 1`` equispaced times in ``[0, t_max]``."""
        if t_max < 0:
            raise DomainError("t_max must be nonnegative")
        steps = 20 if steps is None else int(steps)
        ts = np.linspace(0.0, t_max, steps + 1)
        return ts, self.evaluate_grid(ts, x, delta)
