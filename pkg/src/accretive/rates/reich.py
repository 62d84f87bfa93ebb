"""Rates for the large-time behaviour of resolvents and the semigroup.

With ``d = inf{||z|| : z in ran A}`` the resolvents satisfy
``J_t x / t -> -v_x`` where ``v_x`` is the unique element of minimal norm in
the closure of the range, and ``||J_t x - S(t)x|| / t -> 0``.  The functions
below turn range data ``(d, f, E, D)`` into explicit thresholds.

Every rate here needs the full range condition, so operators with a finite
``lambda0`` are refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..certificate import Claim, Direction, RateCertificate
from ..errors import DomainError
from ..operator import RangeData

__all__ = [
    "ReichParams",
    "phi_inf",
    "psi_escape",
    "phi1_reich",
    "phi2_reich",
    "phi2_reich_unsmoothed",
    "unique_limit_gap",
    "reich_rate",
    "reich_certificates",
    "v_limit",
]


@dataclass(frozen=True)
class ReichParams:
    """Parameters for the large-time rates.

    Parameters
    ----------
    b : int
        Bound with ``b >= ||x||, ||v||``.
    eta : callable
        Modulus of uniform convexity.
    range : RangeData
        ``d_inf``, the witness bound ``f`` and the integer bound ``E``.
    E : int, optional
        Overrides ``range.E``; must satisfy ``E >= d_inf``.
    D : float, optional
        Positive lower bound on ``d_inf`` for the unsmoothed rates.
    """

    b: int
    eta: Callable
    range: RangeData
    E: Optional[int] = None
    D: Optional[float] = None
    snapshot: Optional[dict] = None

    def __post_init__(self):
        if int(self.b) != self.b or self.b < 1:
            raise DomainError("b must be a positive integer")
        E = self.range.E if self.E is None else self.E
        if int(E) != E or E < 1 or E < self.range.d_inf:
            raise DomainError("E must be a positive integer with E >= d_inf")
        object.__setattr__(self, "E", int(E))
        D = self.D if self.D is not None else self.range.D
        if D is not None and not (0 < D <= self.range.d_inf):
            raise DomainError("D must satisfy 0 < D <= d_inf")
        object.__setattr__(self, "D", D)

    @property
    def f(self):
        return self.range.f

    @property
    def d(self):
        return self.range.d_inf

    @classmethod
    def for_instance(cls, op, space, x, b=None, E=None, D=None):
        if math.isfinite(op.lambda0):
            raise DomainError("large-time rates need the full range condition")
        x = op._vec(x)
        need_b = max(float(space.norm(x)), float(space.norm(op.apply(x))))
        if b is None:
            b = max(1, math.ceil(need_b))
        elif b < need_b:
            raise DomainError(f"b={b} is below max(||x||, ||Ax||)={need_b:g}")
        rd = op.range_data(space)
        snap = {
            "b": int(b),
            "E": int(rd.E if E is None else E),
            "D": D,
            "d_inf": rd.d_inf,
            "space": space.descriptor(),
            "operator": op.descriptor(),
        }
        return cls(b=int(b), eta=space.eta, range=rd, E=E, D=D, snapshot=snap)


def _check(eps):
    if not eps > 0:
        raise DomainError("eps must be positive")


def phi_inf(eps, b, f):
    """``8(b + f(eps/2)) / eps``.

    Certifies ``| ||J_t x||/t - d | <= eps`` for every ``t >= phi_inf``.

    >>> phi_inf(1.0, 2, lambda e: 3)
    40.0
    """
    _check(eps)
    return 8.0 * (b + f(eps / 2)) / eps


def psi_escape(K, b, D):
    """``(b + K) / D``; for ``d >= D > 0`` and ``t >= psi``, ``||J_t x|| >= K``."""
    if not D > 0:
        raise DomainError("the escape rate needs D > 0")
    return (b + K) / D


def phi1_reich(eps, b, D, c, eta, f):
    """Direction rate for a near-minimal range witness ``z in Ay``.

    If ``||z|| <= d + 2d eta(eps/2)`` and ``c >= ||y||, ||z||`` then for all
    ``t >= phi1``: ``||z/||z|| + J_t x/||J_t x|| || <= eps``, where::

        phi1 = max{psi(c+1, b, D), psi((4/eps + 1)c, b, D),
                   (c + b) / g, phi_inf(g, b, f)}
        g    = D (2 eta(min{eps/2, 2}))^2 / 18
    """
    _check(eps)
    if not (D > 0 and c >= 0):
        raise DomainError("D must be positive and c nonnegative")
    g = D * (2.0 * eta(min(eps / 2, 2.0))) ** 2 / 18.0
    return max(
        psi_escape(c + 1, b, D),
        psi_escape((4.0 / eps + 1.0) * c, b, D),
        (c + b) / g,
        phi_inf(g, b, f),
    )


def phi2_reich_unsmoothed(eps, D, p):
    """Cauchy rate at infinity given a lower bound ``D <= d``::

        max{phi_inf(eps/3), phi1(eps/6E, b, D, f(2D eta(min{eps/12E, 2})), eta, f)}
    """
    _check(eps)
    if not D > 0:
        raise DomainError("D must be positive")
    E, f = p.E, p.f
    c = f(2.0 * D * p.eta(min(eps / (12 * E), 2.0)))
    return max(phi_inf(eps / 3, p.b, f), phi1_reich(eps / (6 * E), p.b, D, c, p.eta, f))


def phi2_reich(eps, p):
    """Cauchy rate at infinity without a lower bound on ``d``::

        max{phi_inf(eps/4), phi_inf(eps/3),
            phi1(eps/6E, b, eps/4, f(eps eta(min{eps/12E, 2})/2), eta, f)}

    Certifies ``||J_s x/s - J_t x/t|| <= eps`` for all ``s, t >= phi2``.
    """
    _check(eps)
    E, f = p.E, p.f
    c = f(eps * p.eta(min(eps / (12 * E), 2.0)) / 2)
    return max(
        phi_inf(eps / 4, p.b, f),
        phi_inf(eps / 3, p.b, f),
        phi1_reich(eps / (6 * E), p.b, eps / 4, c, p.eta, f),
    )


def unique_limit_gap(eps, p):
    """``min{eps eta(min{eps/(16(E+1)), 2})/4, eps/8}``.

    Any ``z in Ay`` with ``||z|| <= d + gap`` lies within ``eps`` of ``v_x``.
    """
    _check(eps)
    return min(eps * p.eta(min(eps / (16 * (p.E + 1)), 2.0)) / 4, eps / 8)


def _witness_level(eps, p):
    return min(eps * p.eta(min((eps / 8) / (16 * (p.E + 1)), 2.0)) / 32, eps / 64)


def _cert(eps, thr, claim, p, **extra):
    params = dict(p.snapshot or {"b": p.b, "E": p.E})
    params.update(extra)
    return RateCertificate(eps, thr, Direction.ALL_T_ABOVE, claim, params)


def reich_rate(eps, p):
    """``Phi = max{(4/eps)(b + f(m)), (8/eps) f(m), phi2(eps/2)}`` with
    ``m = min{eps eta(min{(eps/8)/(16(E+1)), 2})/32, eps/64}``.

    Certifies ``||J_t x - S(t)x||/t <= eps`` for every ``t >= Phi``.
    """
    _check(eps)
    fm = p.f(_witness_level(eps, p))
    thr = max(4.0 / eps * (p.b + fm), 8.0 / eps * fm, phi2_reich(eps / 2, p))
    return _cert(eps, thr, Claim.REICH_MAIN, p)


def reich_certificates(eps, p, K=None):
    """Certificates for the growth, Cauchy and main claims.

    Escape and direction certificates need ``D`` and are added when it is
    set; ``K`` defaults to ``2b + 1``.
    """
    out = {
        Claim.REICH_GROWTH: _cert(eps, phi_inf(eps, p.b, p.f), Claim.REICH_GROWTH, p),
        Claim.REICH_CAUCHY: _cert(eps, phi2_reich(eps, p), Claim.REICH_CAUCHY, p),
        Claim.REICH_MAIN: reich_rate(eps, p),
    }
    if p.D is not None:
        K = 2 * p.b + 1 if K is None else K
        out[Claim.REICH_ESCAPE] = _cert(
            eps, psi_escape(K, p.b, p.D), Claim.REICH_ESCAPE, p, K=K
        )
        # witness with ||z|| - d <= 2 D eta(eps/2) <= 2 d eta(eps/2)
        level = 2.0 * p.D * p.eta(min(eps / 2, 2.0))
        c = p.f(level)
        out[Claim.REICH_DIRECTION] = _cert(
            eps,
            phi1_reich(eps, p.b, p.D, c, p.eta, p.f),
            Claim.REICH_DIRECTION,
            p,
            witness_level=level,
        )
    return out


def v_limit(op, x, eps, p, tol=1e-12):
    """``-J_T x / T`` at ``T = phi2_reich(eps/2)``, within ``eps`` of ``v_x``."""
    T = phi2_reich(eps / 2, p)
    return -np.asarray(op.resolvent(T, x, tol)) / T
