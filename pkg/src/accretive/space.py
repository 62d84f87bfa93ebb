"""Finite-dimensional smooth normed spaces.

Two families are provided: Euclidean space and ``l_p^d`` with ``1 < p < inf``.
Both are smooth, so the normalized duality map is single valued and the
semi-inner product ``<y, x>_s`` is simply ``<y, j(x)>``.

All vector arguments may carry leading batch axes; the coordinates live on
the last axis.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError

__all__ = ["SpaceInstance", "euclidean", "lp", "as_vector"]


def as_vector(x, dim=None):
    """Return ``x`` as a finite float64 array, checking its last dimension."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if dim is not None and arr.shape[-1] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {arr.shape[-1]}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("vector entries must be finite")
    return arr


def _lp_norm(x, p):
    # scale by the max entry so |x_i|^p neither overflows nor underflows
    a = np.abs(x)
    m = a.max(axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    s = np.sum((a / safe) ** p, axis=-1) ** (1.0 / p)
    return s * m[..., 0]


@dataclass(frozen=True)
class SpaceInstance:
    """A smooth finite-dimensional normed space.

    Parameters
    ----------
    dimension : int
        Number of coordinates ``d >= 1``.
    norm_kind : {"euclidean", "lp"}
    p : float
        Exponent for ``"lp"``; ignored (and fixed to 2) for ``"euclidean"``.
    """

    dimension: int
    norm_kind: str = "euclidean"
    p: float = 2.0

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise DomainError("dimension must be a positive integer")
        if self.norm_kind == "euclidean":
            object.__setattr__(self, "p", 2.0)
        elif self.norm_kind == "lp":
            if not (1.0 < float(self.p) < math.inf):
                raise DomainError("lp spaces need 1 < p < inf")
            object.__setattr__(self, "p", float(self.p))
        else:
            raise DomainError(f"unknown norm kind {self.norm_kind!r}")

    # -- descriptors -------------------------------------------------------

    @property
    def is_hilbert(self):
        return self.p == 2.0

    @property
    def omega_is_empirical(self):
        """True when ``semi_inner_modulus`` comes from sampling, not a proof."""
        return not self.is_hilbert

    def descriptor(self):
        if self.norm_kind == "euclidean":
            return {"norm": "euclidean"}
        return {"norm": "lp", "p": self.p}

    def _check(self, x):
        return as_vector(x, self.dimension)

    # -- norm, duality -----------------------------------------------------

    def norm(self, x):
        x = self._check(x)
        if self.is_hilbert:
            return np.linalg.norm(x, axis=-1)[()]
        return _lp_norm(x, self.p)[()]

    def duality_map(self, x):
        """Return ``j(x)``, the unique element of the duality set ``J(x)``.

        For ``l_p``, ``j(x)_i = ||x||^(2-p) |x_i|^(p-1) sgn(x_i)`` and
        ``j(0) = 0``.
        """
        x = self._check(x)
        if self.is_hilbert:
            return x.copy()
        p = self.p
        nx = np.asarray(self.norm(x))[..., None]
        safe = np.where(nx > 0, nx, 1.0)
        # written as ||x|| * (|x_i|/||x||)^(p-1) to stay finite for tiny x
        return np.where(nx > 0, safe * np.abs(x / safe) ** (p - 1) * np.sign(x), 0.0)

    def pairing(self, y, f):
        """Evaluate the dual pairing ``<y, f>`` for ``f`` in the dual space."""
        return np.sum(self._check(y) * self._check(f), axis=-1)[()]

    def dual_norm(self, f):
        f = self._check(f)
        if self.is_hilbert:
            return np.linalg.norm(f, axis=-1)[()]
        return _lp_norm(f, self.p / (self.p - 1.0))[()]

    def semi_inner(self, y, x):
        """``<y, x>_s = <y, j(x)>`` (the supremum is attained uniquely)."""
        return self.pairing(y, self.duality_map(x))

    # -- geometry moduli ---------------------------------------------------

    def ucx_modulus(self, eps):
        """Modulus of uniform convexity ``eta(eps)`` on ``(0, 2]``.

        Euclidean: ``1 - sqrt(1 - (eps/2)^2)``.  For ``p >= 2`` the Clarkson
        bound ``1 - (1 - (eps/2)^p)^(1/p)``; for ``1 < p < 2`` the quadratic
        lower bound ``(p - 1) eps^2 / 16``.
        """
        e = np.asarray(eps, dtype=float)
        if np.any(~(e > 0)) or np.any(e > 2.0):
            raise DomainError("eta is defined on (0, 2]")
        p = self.p
        if p == 2.0:
            h = (e / 2.0) ** 2
            val = h / (1.0 + np.sqrt(1.0 - h))  # cancellation-free form
        elif p > 2.0:
            with np.errstate(divide="ignore"):  # e = 2 hits log1p(-1); masked below
                val = -np.expm1(np.log1p(-((e / 2.0) ** p)) / p)
            val = np.where(e >= 2.0, 1.0, val)
        else:
            val = (p - 1.0) * e**2 / 16.0
        return np.minimum(val, 1.0)[()]

    def eta(self, eps):
        """``ucx_modulus(min(eps, 2))``, the clamped form used in all rates."""
        return self.ucx_modulus(np.minimum(eps, 2.0))

    def clarkson_angle(self, a, b):
        """``||a/||a|| - b/||b||||`` for nonzero ``a`` and ``b``."""
        a = self._check(a)
        b = self._check(b)
        na = np.asarray(self.norm(a))
        nb = np.asarray(self.norm(b))
        if np.any(na == 0) or np.any(nb == 0):
            raise DomainError("Clarkson angle needs nonzero vectors")
        return np.minimum(self.norm(a / na[..., None] - b / nb[..., None]), 2.0)[()]

    def semi_inner_modulus(self, b, eps):
        """Modulus ``omega(b, eps)`` of uniform continuity for ``<z, .>_s``.

        Whenever ``||x||, ||z|| <= b`` and ``||x - y|| <= omega(b, eps)`` we
        have ``<z, y>_s <= <z, x>_s + eps``.  Exact (``eps / b``) in Hilbert
        space; calibrated by sampling with a safety factor 1/2 otherwise.
        """
        if not (b > 0 and eps > 0):
            raise DomainError("omega needs b > 0 and eps > 0")
        if self.is_hilbert:
            return eps / b
        const, alpha = self._holder_constant()
        # homogeneity: reduce to the unit ball, then cap the radius at b
        r = (eps / (b * b * const)) ** (1.0 / alpha)
        return 0.5 * b * min(r, 1.0)

    def _holder_constant(self):
        return _calibrate_duality_holder(self.p, self.dimension)


@functools.lru_cache(maxsize=None)
def _calibrate_duality_holder(p, dim, samples=20000, seed=12345):
    """Estimate ``C`` with ``||j(y) - j(x)||_q <= C ||x - y||^alpha``.

    ``alpha = min(1, p - 1)``; ``x`` ranges over the unit ball and
    ``||x - y|| <= 1``.
    """
    s = SpaceInstance(dim, "lp", p)
    rng = np.random.default_rng(seed)
    alpha = min(1.0, p - 1.0)
    x = rng.standard_normal((samples, dim))
    # sparse coordinates are where |t|^(p-1) is least regular
    x[rng.random((samples, dim)) < 0.3] = 0.0
    x *= (rng.random(samples) ** (1.0 / dim) / np.maximum(s.norm(x), 1e-300))[:, None]
    w = rng.standard_normal((samples, dim))
    w /= s.norm(w)[:, None]
    r = 10.0 ** rng.uniform(-6, 0, samples)
    y = x + r[:, None] * w
    dj = s.dual_norm(s.duality_map(y) - s.duality_map(x))
    dist = s.norm(x - y)
    const = float(np.max(dj / dist**alpha))
    return max(const, 1.0), alpha


def euclidean(dim):
    return SpaceInstance(dim, "euclidean")


def lp(dim, p):
    return SpaceInstance(dim, "lp", p)
