"""High-precision closed forms for ``S(t)x`` and ``J_t x``.

Every shipped operator has an explicit flow: linear operators through the
matrix exponential of an augmented generator, diagonal ones coordinatewise
by separating variables, constants by translation.  Values are computed with
mpmath at a working precision that grows with ``|log10 t|`` so that the tiny
differences ``J_t x - S(t)x`` (of order ``t^2``) survive.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

from .errors import DomainError
from .operator import ConstantOperator, DiagonalOperator, LinearOperator

__all__ = ["ExactOracle", "supports"]


def supports(op):
    return isinstance(op, (LinearOperator, DiagonalOperator, ConstantOperator))


def _digits(*times):
    worst = max((abs(math.log10(t)) for t in times if t > 0), default=0.0)
    return int(30 + 2 * worst)


def _flow_scalar(fn, t, x):
    """Solution at time ``t`` of ``y' = -f(y)``, ``y(0) = x``."""
    if fn.type == "linear":
        a, c = mp.mpf(fn.slope), mp.mpf(fn.offset)
        if a == 0:
            return x - c * t
        return (x + c / a) * mp.exp(-a * t) - c / a
    if fn.type == "power":
        a, p = mp.mpf(fn.coef), mp.mpf(fn.exp)
        if a == 0 or x == 0:
            return x
        if p == 1:
            return x * mp.exp(-a * t)
        mag = (abs(x) ** (1 - p) + a * (p - 1) * t) ** (-1 / (p - 1))
        return mp.sign(x) * mag
    a = mp.mpf(fn.coef)
    if a == 0:
        return x
    return -mp.log(mp.exp(-x) + a * t)


def _resolvent_scalar(fn, lam, x):
    """Solution ``y`` of ``y + lam*f(y) = x``."""
    if fn.type == "linear":
        a, c = mp.mpf(fn.slope), mp.mpf(fn.offset)
        return (x - lam * c) / (1 + lam * a)
    if fn.type == "power":
        a, p = mp.mpf(fn.coef), mp.mpf(fn.exp)
        if a == 0 or x == 0:
            return x
        if p == 1:
            return x / (1 + lam * a)
        s, r = mp.sign(x), abs(x)
        g = lambda y: y + lam * a * y**p - r
        dg = lambda y: 1 + lam * a * p * y ** (p - 1)
        # g is increasing and convex on [0, r]; Newton from the right is monotone
        y = r
        for _ in range(10_000):
            step = g(y) / dg(y)
            y_new = max(y - step, mp.mpf(0))
            if abs(y_new - y) <= abs(y) * mp.mpf(10) ** (-mp.mp.dps + 3):
                y = y_new
                break
            y = y_new
        return s * y
    a = mp.mpf(fn.coef)
    if a == 0:
        return x
    return x - mp.lambertw(lam * a * mp.exp(x)).real


class ExactOracle:
    """Reference values for one operator in one space."""

    def __init__(self, op, space):
        if not supports(op):
            raise DomainError(f"no closed form for operator kind {op.kind!r}")
        self.op = op
        self.space = space

    def _mpvec(self, x):
        return [mp.mpf(float(v)) for v in np.asarray(x, dtype=float).ravel()]

    def norm(self, v):
        if self.space.is_hilbert:
            return mp.sqrt(mp.fsum(c * c for c in v))
        p = mp.mpf(self.space.p)
        return mp.fsum(abs(c) ** p for c in v) ** (1 / p)

    def semigroup(self, t, x):
        """``S(t)x`` as a list of mpf (call inside a ``workdps`` block)."""
        t = mp.mpf(t)
        xv = self._mpvec(x)
        op = self.op
        if isinstance(op, ConstantOperator):
            return [xi - t * qi for xi, qi in zip(xv, self._mpvec(op.q))]
        if isinstance(op, DiagonalOperator):
            return [_flow_scalar(fn, t, xi) for fn, xi in zip(op.fns, xv)]
        d = op.dimension
        B = mp.zeros(d + 1, d + 1)
        for i in range(d):
            for j in range(d):
                B[i, j] = -t * mp.mpf(op.M[i, j])
            B[i, d] = -t * mp.mpf(op.q[i])
        E = mp.expm(B)
        return [mp.fsum(E[i, j] * xv[j] for j in range(d)) + E[i, d] for i in range(d)]

    def resolvent(self, lam, x):
        lam = mp.mpf(lam)
        xv = self._mpvec(x)
        op = self.op
        if isinstance(op, ConstantOperator):
            return [xi - lam * qi for xi, qi in zip(xv, self._mpvec(op.q))]
        if isinstance(op, DiagonalOperator):
            return [_resolvent_scalar(fn, lam, xi) for fn, xi in zip(op.fns, xv)]
        d = op.dimension
        A = mp.eye(d) + lam * mp.matrix(op.M.tolist())
        rhs = mp.matrix([xi - lam * mp.mpf(qi) for xi, qi in zip(xv, op.q)])
        y = mp.lu_solve(A, rhs)
        return [y[i] for i in range(d)]

    # -- quantities used by the certificate checks --------------------------

    def gap_ratio(self, t, x):
        """``||J_t x - S(t)x|| / t``."""
        with mp.workdps(_digits(t)):
            j = self.resolvent(t, x)
            s = self.semigroup(t, x)
            return float(self.norm([a - b for a, b in zip(j, s)]) / mp.mpf(t))

    def resolvent_quotient(self, t, x):
        """``||x - J_t x|| / t``."""
        with mp.workdps(_digits(t)):
            xv = self._mpvec(x)
            j = self.resolvent(t, x)
            return float(self.norm([a - b for a, b in zip(xv, j)]) / mp.mpf(t))

    def semigroup_quotient(self, t, x):
        """``||x - S(t)x|| / t``."""
        with mp.workdps(_digits(t)):
            xv = self._mpvec(x)
            s = self.semigroup(t, x)
            return float(self.norm([a - b for a, b in zip(xv, s)]) / mp.mpf(t))

    def yosida_gap(self, t, s, x):
        """``||A_t x - A_s x||``."""
        with mp.workdps(_digits(t, s)):
            xv = self._mpvec(x)
            jt, js = self.resolvent(t, x), self.resolvent(s, x)
            t, s = mp.mpf(t), mp.mpf(s)
            return float(self.norm([(xi - a) / t - (xi - b) / s for xi, a, b in zip(xv, jt, js)]))

    def yosida_semigroup_gap(self, t, s, x):
        """``||A_t x - (x - S(s)x)/s||``."""
        with mp.workdps(_digits(t, s)):
            xv = self._mpvec(x)
            jt, ss = self.resolvent(t, x), self.semigroup(s, x)
            t, s = mp.mpf(t), mp.mpf(s)
            return float(self.norm([(xi - a) / t - (xi - b) / s for xi, a, b in zip(xv, jt, ss)]))

    def resolvent_growth(self, t, x):
        """``||J_t x|| / t``."""
        with mp.workdps(_digits(t)):
            return float(self.norm(self.resolvent(t, x)) / mp.mpf(t))

    def resolvent_direction_gap(self, s, t, x):
        """``||J_s x / s - J_t x / t||``."""
        with mp.workdps(_digits(s, t)):
            js, jt = self.resolvent(s, x), self.resolvent(t, x)
            s, t = mp.mpf(s), mp.mpf(t)
            return float(self.norm([a / s - b / t for a, b in zip(js, jt)]))

    def semigroup_float(self, t, x):
        with mp.workdps(_digits(t)):
            return np.array([float(v) for v in self.semigroup(t, x)])

    def resolvent_float(self, lam, x):
        with mp.workdps(_digits(lam)):
            return np.array([float(v) for v in self.resolvent(lam, x)])
