"""Rates for the small-time comparison of resolvents and the semigroup.

The end product is ``plant_rate``: a threshold ``Phi(eps)`` such that

    ||J_t x - S(t)x|| / t <= eps     for all t in (0, Phi(eps)]

in a uniformly convex space, for every ``x`` with ``||x||, ||Ax|| <= b``.
The intermediate rates certify the ingredients and are exposed so they can
be checked one by one.

All rates drop their ``min{., lambda0/2}`` comparand when ``lambda0`` is
infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from ..certificate import Claim, Direction, RateCertificate
from ..errors import DomainError

__all__ = [
    "PlantParams",
    "phi1",
    "psi_miyadera",
    "phi2",
    "phi2_unsmoothed",
    "phi3",
    "phi3_unsmoothed",
    "phi4",
    "phi4_unsmoothed",
    "plant_rate",
    "plant_certificates",
]


@dataclass(frozen=True)
class PlantParams:
    """Parameters shared by all small-time rates.

    Parameters
    ----------
    b : int
        Bound with ``b >= ||x||, ||v||`` for the point ``x`` and ``v in Ax``.
    n : int
        Bound with ``n >= ||c||, ||d_c||, lambda0`` for a graph point
        ``(c, d_c)`` (and ``n >= 1``).
    eta : callable
        Modulus of uniform convexity, nondecreasing on ``(0, 2]``.
    omega : callable
        ``omega(b, eps)``, modulus for the semi-inner product.
    phi : callable
        ``phi(eps, b)``, modulus of uniform continuity for ``|A.|``.
    lambda0 : float
        Range-condition bound; ``inf`` when unrestricted.
    c_lb : float, optional
        Lower bound ``c <= |Ax|`` for the unsmoothed variants.
    snapshot : dict, optional
        Provenance copied into every certificate.
    """

    b: int
    n: int
    eta: Callable
    omega: Callable
    phi: Callable
    lambda0: float = math.inf
    c_lb: Optional[float] = None
    snapshot: Optional[dict] = None

    def __post_init__(self):
        if int(self.b) != self.b or self.b < 1 or int(self.n) != self.n or self.n < 1:
            raise DomainError("b and n must be positive integers")
        if not self.lambda0 > 0:
            raise DomainError("lambda0 must be positive")
        if self.c_lb is not None and not self.c_lb > 0:
            raise DomainError("c_lb must be positive")

    @property
    def big_b(self):
        """``b + 2n + 3n^2``, the bound on every point the proofs touch."""
        return self.b + 2 * self.n + 3 * self.n**2

    @classmethod
    def for_instance(cls, op, space, x, b=None, n=None, c_lb=None):
        """Parameters read off a concrete operator, space and starting point."""
        x = op._vec(x)
        need_b = max(float(space.norm(x)), float(space.norm(op.apply(x))))
        if b is None:
            b = max(1, math.ceil(need_b))
        elif b < need_b:
            raise DomainError(f"b={b} is below max(||x||, ||Ax||)={need_b:g}")
        c, dc = op.domain_witness()
        need_n = max(float(space.norm(c)), float(space.norm(dc)))
        if math.isfinite(op.lambda0):
            need_n = max(need_n, op.lambda0)
        if n is None:
            n = max(1, math.ceil(need_n))
        elif n < need_n:
            raise DomainError(f"n={n} is below the witness bound {need_n:g}")
        snap = {
            "b": int(b),
            "n": int(n),
            "lambda0": op.lambda0 if math.isfinite(op.lambda0) else None,
            "space": space.descriptor(),
            "operator": op.descriptor(),
            "omega_empirical": space.omega_is_empirical,
        }
        return cls(
            b=int(b),
            n=int(n),
            eta=space.eta,
            omega=space.semi_inner_modulus,
            phi=lambda eps, bb: op.bracket_modulus(eps, bb, space),
            lambda0=op.lambda0,
            c_lb=c_lb,
            snapshot=snap,
        )


def _check(eps):
    if not eps > 0:
        raise DomainError("eps must be positive")


def _cap(p, *vals):
    """``min{vals, lambda0/2}``, dropping the cap for unbounded ``lambda0``."""
    if math.isfinite(p.lambda0):
        return min(*vals, p.lambda0 / 2)
    return min(vals)


def phi1(eps, p):
    """``min{phi(eps, b+2n+3n^2)/b, lambda0/2}``.

    Certifies ``|Ax| - ||x - J_t x||/t <= eps`` for ``t in (0, phi1]``.
    """
    _check(eps)
    return _cap(p, p.phi(eps, p.big_b) / p.b)


def psi_miyadera(eps, b, omega):
    """``omega(2b, eps) / (2b)``.

    For graph points ``(x, v)``, ``(x0, y0)`` bounded by ``b`` and
    ``t in (0, psi]``: ``<(S(t)x - x)/t, j(x - x0)> <= <y0, x0 - x>_s + eps``.
    """
    if not (eps > 0 and b > 0):
        raise DomainError("psi needs eps, b > 0")
    return omega(2 * b, eps) / (2 * b)


def phi2_unsmoothed(eps, c, p):
    """Semigroup rate when ``|Ax| >= c``::

        psi(eps*c*min{phi1(min{eps/2, c/2}), lambda0/2}/4, b+2n+3n^2, omega)
    """
    _check(eps)
    if not c > 0:
        raise DomainError("c must be positive")
    inner = _cap(p, phi1(min(eps / 2, c / 2), p))
    return psi_miyadera(eps * c * inner / 4, p.big_b, p.omega)


def phi2(eps, p):
    """``psi(eps^2 min{phi1(eps/2), lambda0/2}/4, b+2n+3n^2, omega)``.

    Certifies ``|Ax| - ||x - S(t)x||/t <= eps`` for ``t in (0, phi2]``.
    Equal to ``phi2_unsmoothed(eps, eps, p)``.
    """
    _check(eps)
    inner = _cap(p, phi1(eps / 2, p))
    return psi_miyadera(eps * eps * inner / 4, p.big_b, p.omega)


def phi3_unsmoothed(eps, c, p):
    """Cauchy rate for the Yosida approximates when ``|Ax| >= c``::

        min{phi1(eps/3), phi1(eta(min{eps/3b, 2}) c/2), phi1(c/2), lambda0/2}
    """
    _check(eps)
    if not c > 0:
        raise DomainError("c must be positive")
    e = p.eta(min(eps / (3 * p.b), 2.0))
    return _cap(p, phi1(eps / 3, p), phi1(e * c / 2, p), phi1(c / 2, p))


def phi3(eps, p):
    """``phi3_unsmoothed`` with ``c = eps/2``.

    Certifies ``||A_t x - A_s x|| <= eps`` for ``t in (0, phi3]`` and
    ``s in (0, t)``.
    """
    return phi3_unsmoothed(eps, eps / 2, p)


def phi4_unsmoothed(eps, c, p):
    """Rate comparing ``A_t x`` with ``(x - S(s)x)/s`` when ``|Ax| >= c``::

        min{phi1(eps/3), phi2(eps/3), phi1(eta(min{eps,2}) c/4),
            sqrt(phi2(c/2)), eta(min{eps,2}) c/(8b), 1, lambda0/2}
    """
    _check(eps)
    if not c > 0:
        raise DomainError("c must be positive")
    e = p.eta(min(eps, 2.0))
    return _cap(
        p,
        phi1(eps / 3, p),
        phi2(eps / 3, p),
        phi1(e * c / 4, p),
        math.sqrt(phi2(c / 2, p)),
        e * c / (8 * p.b),
        1.0,
    )


def phi4(eps, p):
    """``phi4_unsmoothed`` with ``c = eps/2``.

    Certifies ``||A_t x - (x - S(s)x)/s|| <= eps`` whenever both ``t`` and
    ``s/t`` lie in ``(0, phi4]``.
    """
    return phi4_unsmoothed(eps, eps / 2, p)


def _cert(eps, thr, claim, p, **extra):
    params = dict(p.snapshot or {"b": p.b, "n": p.n})
    params.update(extra)
    return RateCertificate(eps, thr, Direction.ALL_T_BELOW, claim, params)


def plant_rate(eps, p):
    """``Phi(eps) = (min{phi3(eps/2), phi4(eps/2)})^2``.

    Certifies ``||J_t x - S(t)x||/t <= eps`` for every ``t in (0, Phi]``.
    """
    _check(eps)
    thr = min(phi3(eps / 2, p), phi4(eps / 2, p)) ** 2
    return _cert(eps, thr, Claim.PLANT_MAIN, p)


def plant_certificates(eps, p):
    """Certificates for every intermediate claim plus the final one."""
    return {
        Claim.RESOLVENT_ROC: _cert(eps, phi1(eps, p), Claim.RESOLVENT_ROC, p),
        Claim.MIYADERA: _cert(
            eps, psi_miyadera(eps, p.b, p.omega), Claim.MIYADERA, p, miyadera_b=p.b
        ),
        Claim.SEMIGROUP_ROC: _cert(eps, phi2(eps, p), Claim.SEMIGROUP_ROC, p),
        Claim.RES_CAUCHY: _cert(eps, phi3(eps, p), Claim.RES_CAUCHY, p),
        Claim.RES_SEMI_COMB: _cert(eps, phi4(eps, p), Claim.RES_SEMI_COMB, p),
        Claim.PLANT_MAIN: plant_rate(eps, p),
    }
