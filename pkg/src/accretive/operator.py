"""Single-valued m-accretive operators on R^d with their resolvents.

Three kinds are shipped:

``LinearOperator``
    ``A x = M x + q`` with ``M`` positive semidefinite (Euclidean) or
    diagonally dominant with nonnegative diagonal (``l_p``).
``DiagonalOperator``
    ``(A x)_i = f_i(x_i)`` with nondecreasing scalar ``f_i``.
``ConstantOperator``
    ``A x = q``.

All domains are the whole space and every step size is admissible, so
``lambda0`` is infinite unless set explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from . import _diag
from .errors import DomainError, ResolventError, StepSizeError
from .space import SpaceInstance, as_vector

DEFAULT_TOL = 1e-12
NEWTON_BUDGET = 200

__all__ = [
    "OperatorInstance",
    "LinearOperator",
    "DiagonalOperator",
    "ConstantOperator",
    "ScalarFn",
    "RangeData",
    "BracketData",
    "from_descriptor",
]


@dataclass(frozen=True)
class RangeData:
    """Quantitative data on ``d = inf{||z|| : z in ran A}``.

    ``witness(eps)`` returns a graph point ``(y, z)`` with
    ``||y||, ||z|| <= f(eps)`` and ``||z|| - d_inf <= eps``; ``f`` is
    nonincreasing.  ``E`` is an integer upper bound for ``d_inf`` and ``D``,
    when given, a positive lower bound.
    """

    d_inf: float
    f: Callable[[float], float]
    E: int
    witness: Callable[[float], tuple] = field(repr=False)
    D: Optional[float] = None


@dataclass(frozen=True)
class BracketData:
    """``|A.|`` together with a modulus of uniform continuity ``phi(eps, b)``."""

    value_at: Callable
    phi: Callable[[float, float], float]


def _residual_ok(y, lam, ay, x, tol):
    # ||r||_1 bounds every l_p norm, ||x||_inf is below every l_p norm
    r = y + lam * ay - x
    return np.sum(np.abs(r)) <= tol * max(1.0, float(np.max(np.abs(x))))


def _antitone(g, cap):
    """Running maximum of ``g`` over a doubling ladder from ``eps`` to ``cap``."""

    def f(eps):
        if not eps > 0:
            raise DomainError("f needs eps > 0")
        best = g(min(eps, cap))
        e = eps
        while e < cap:
            best = max(best, g(e))
            e *= 2.0
        return best

    return f


class OperatorInstance:
    """Common interface of the shipped operators.

    Subclasses provide ``apply``, ``resolvent``, ``lipschitz_bound``,
    ``majorant`` and ``range_data``; everything else is derived here.
    """

    kind = "abstract"

    def __init__(self, dimension, lambda0=math.inf):
        if lambda0 <= 0:
            raise DomainError("lambda0 must be positive")
        self.dimension = int(dimension)
        self.lambda0 = float(lambda0)

    # interface ----------------------------------------------------------

    def apply(self, x):
        raise NotImplementedError

    def resolvent(self, lam, x, tol=DEFAULT_TOL):
        raise NotImplementedError

    def lipschitz_bound(self, b, space):
        raise NotImplementedError

    def majorant(self, b, space):
        """Upper bound for ``||A x||`` over the closed ``b``-ball."""
        raise NotImplementedError

    def range_data(self, space):
        raise NotImplementedError

    def descriptor(self):
        raise NotImplementedError

    def check_accretive(self, space):
        """Raise ``DomainError`` if the operator is not accretive in ``space``."""

    # derived ------------------------------------------------------------

    @property
    def bounded_range_condition(self):
        return math.isfinite(self.lambda0)

    def _vec(self, x):
        return as_vector(x, self.dimension)

    def _check_step(self, lam):
        if lam < 0:
            raise DomainError("step size must be nonnegative")
        if lam >= self.lambda0:
            raise StepSizeError(f"step {lam} is not below lambda0={self.lambda0}")

    def domain_witness(self):
        """A graph point ``(c, d_c)`` certifying that the domain is nonempty."""
        c = np.zeros(self.dimension)
        return c, self.apply(c)

    def iterate_resolvent(self, lam, x, n, tol=DEFAULT_TOL):
        """``(J_lam)^n x`` by plain composition."""
        y = self._vec(x).copy()
        for _ in range(int(n)):
            y = self.resolvent(lam, y, tol)
        return y

    def yosida(self, lam, x, tol=DEFAULT_TOL):
        if not lam > 0:
            raise DomainError("Yosida approximate needs lam > 0")
        x = self._vec(x)
        return (x - self.resolvent(lam, x, tol)) / lam

    def bracket_norm(self, x, space):
        """``|Ax| = lim ||x - J_t x|| / t``; equals ``||Ax||`` here."""
        return float(space.norm(self.apply(x)))

    def bracket_modulus(self, eps, b, space):
        """``phi(eps, b) = eps / max(1, L(b))`` with ``L`` the local Lipschitz bound."""
        if not (eps > 0 and b > 0):
            raise DomainError("bracket modulus needs eps, b > 0")
        return eps / max(1.0, self.lipschitz_bound(b, space))

    def bracket_data(self, space):
        return BracketData(
            value_at=lambda x: self.bracket_norm(x, space),
            phi=lambda eps, b: self.bracket_modulus(eps, b, space),
        )

    def graph_contains(self, x, u, tol, space):
        return bool(space.norm(self.apply(x) - self._vec(u)) <= tol)


class ConstantOperator(OperatorInstance):
    kind = "constant"

    def __init__(self, q, lambda0=math.inf):
        self.q = as_vector(q).copy()
        self.q.setflags(write=False)
        super().__init__(self.q.shape[-1], lambda0)

    def apply(self, x):
        x = self._vec(x)
        return np.broadcast_to(self.q, x.shape).copy()

    def resolvent(self, lam, x, tol=DEFAULT_TOL):
        self._check_step(lam)
        x = self._vec(x)
        return x if lam == 0 else x - lam * self.q

    def iterate_resolvent(self, lam, x, n, tol=DEFAULT_TOL):
        self._check_step(lam)
        return self._vec(x) - (n * lam) * self.q

    def lipschitz_bound(self, b, space):
        return 0.0

    def majorant(self, b, space):
        return float(space.norm(self.q))

    def range_data(self, space):
        dq = float(space.norm(self.q))
        y0 = np.zeros(self.dimension)
        return RangeData(
            d_inf=dq,
            f=lambda eps: dq,
            E=math.ceil(dq) + 1,
            witness=lambda eps: (y0.copy(), self.q.copy()),
        )

    def descriptor(self):
        return {"kind": "constant", "q": self.q.tolist()}


class LinearOperator(OperatorInstance):
    """``A x = M x + q``.

    In Euclidean space ``M`` needs a positive semidefinite symmetric part; in
    ``l_p`` it must be diagonally dominant (rows and columns) with a
    nonnegative diagonal, which makes ``exp(-tM)`` an ``l_p`` contraction.
    """

    kind = "linear_psd"

    def __init__(self, matrix, q=None, lambda0=math.inf):
        M = np.array(matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DomainError("matrix must be square")
        if not np.all(np.isfinite(M)):
            raise DomainError("matrix entries must be finite")
        super().__init__(M.shape[0], lambda0)
        self.M = M
        self.M.setflags(write=False)
        self.q = np.zeros(self.dimension) if q is None else as_vector(q, self.dimension).copy()
        self.q.setflags(write=False)
        sym = 0.5 * (M + M.T)
        if np.min(np.linalg.eigvalsh(sym)) < -1e-12 * max(1.0, np.abs(M).max()):
            raise DomainError("matrix is not positive semidefinite")

    def check_accretive(self, space):
        if space.is_hilbert:
            return
        M = self.M
        off = np.abs(M - np.diag(np.diag(M)))
        diag = np.diag(M)
        slack = 1e-12 * max(1.0, np.abs(M).max())
        if np.any(diag < -slack) or np.any(diag + slack < off.sum(axis=1)) or np.any(
            diag + slack < off.sum(axis=0)
        ):
            raise DomainError("in l_p the matrix must be diagonally dominant")

    def apply(self, x):
        x = self._vec(x)
        return x @ self.M.T + self.q

    def _factor(self, lam):
        return scipy.linalg.lu_factor(np.eye(self.dimension) + lam * self.M)

    def resolvent(self, lam, x, tol=DEFAULT_TOL):
        self._check_step(lam)
        x = self._vec(x)
        if lam == 0:
            return x
        lu = self._factor(lam)
        y = scipy.linalg.lu_solve(lu, x - lam * self.q)
        if not _residual_ok(y, lam, self.apply(y), x, tol):
            y = y + scipy.linalg.lu_solve(lu, x - lam * self.q - y - lam * (y @ self.M.T))
            if not _residual_ok(y, lam, self.apply(y), x, tol):
                raise ResolventError("linear resolvent residual above tolerance")
        return y

    def affine_step(self, lam):
        """``(R, r)`` with ``J_lam y = R y + r``."""
        lu = self._factor(lam)
        R = scipy.linalg.lu_solve(lu, np.eye(self.dimension))
        r = -lam * scipy.linalg.lu_solve(lu, self.q)
        return R, r

    def iterate_resolvent(self, lam, x, n, tol=DEFAULT_TOL):
        """``(J_lam)^n x`` through binary powering of the affine step map."""
        self._check_step(lam)
        x = self._vec(x)
        n = int(n)
        if lam == 0 or n == 0:
            return x.copy()
        R, r = self.affine_step(lam)
        # acc = identity map; base = one step; combine by composition
        accR, accr = np.eye(self.dimension), np.zeros(self.dimension)
        baseR, baser = R, r
        while n:
            if n & 1:
                accR, accr = baseR @ accR, baseR @ accr + baser
            n >>= 1
            if n:
                baseR, baser = baseR @ baseR, baseR @ baser + baser
        return x @ accR.T + accr

    def operator_norm(self, space):
        if space.is_hilbert:
            return float(np.linalg.norm(self.M, 2))
        # Riesz-Thorin between the l_1 and l_inf operator norms
        n1 = np.abs(self.M).sum(axis=0).max()
        ninf = np.abs(self.M).sum(axis=1).max()
        return float(n1 ** (1.0 / space.p) * ninf ** (1.0 - 1.0 / space.p))

    def lipschitz_bound(self, b, space):
        return self.operator_norm(space)

    def majorant(self, b, space):
        return self.operator_norm(space) * b + float(space.norm(self.q))

    def range_data(self, space):
        M, q = self.M, self.q
        y, *_ = np.linalg.lstsq(M, -q, rcond=None)
        z = M @ y + q
        in_range = np.max(np.abs(z)) <= 1e-12 * max(1.0, np.abs(q).max())
        if not space.is_hilbert and not in_range:
            raise DomainError("range infimum in l_p is only supported when q lies in ran M")
        if in_range:
            z = np.zeros_like(z)
        d = float(space.norm(z))
        bound = max(float(space.norm(y)), float(space.norm(M @ y + q)))
        return RangeData(
            d_inf=d,
            f=lambda eps: bound,
            E=math.ceil(d) + 1,
            witness=lambda eps: (y.copy(), M @ y + q),
        )

    def descriptor(self):
        return {"kind": "linear_psd", "matrix": self.M.tolist(), "q": self.q.tolist()}


@dataclass(frozen=True)
class ScalarFn:
    """Nondecreasing scalar function for a diagonal operator coordinate.

    ``type`` is ``"linear"`` (``slope*y + offset``), ``"power"``
    (``coef*sgn(y)*|y|**exp``) or ``"exp"`` (``coef*exp(y)``).
    """

    type: str
    slope: float = 1.0
    offset: float = 0.0
    exp: float = 1.0
    coef: float = 1.0

    def encode(self):
        if self.type == "linear":
            return _diag.LINEAR, self.slope, self.offset
        if self.type == "power":
            return _diag.POWER, self.coef, self.exp
        if self.type == "exp":
            return _diag.EXP, self.coef, 0.0
        raise DomainError(f"unknown scalar function type {self.type!r}")

    def is_monotone(self):
        if self.type == "linear":
            return self.slope >= 0
        if self.type == "power":
            return self.coef >= 0 and self.exp >= 1
        return self.coef >= 0

    def __call__(self, y):
        code, a, c = self.encode()
        return _diag.fval(code, a, c, float(y))[0]

    def derivative_bound(self, b):
        """``sup |f'|`` on ``[-b, b]``."""
        if self.type == "linear":
            return abs(self.slope)
        if self.type == "power":
            return abs(self.coef) * self.exp * b ** (self.exp - 1.0) if self.exp > 1 else abs(self.coef)
        return abs(self.coef) * math.exp(b)

    def sup_abs(self, b):
        """``sup |f|`` on ``[-b, b]`` (attained at an endpoint)."""
        return max(abs(self(b)), abs(self(-b)))

    def range_witness(self, delta):
        """A point ``y`` with ``|f(y)| <= inf|f| + delta``; returns ``(inf|f|, y)``."""
        if self.type == "linear":
            if self.slope != 0:
                return 0.0, -self.offset / self.slope
            return abs(self.offset), 0.0
        if self.type == "power" or self.coef == 0:
            return 0.0, 0.0
        a = abs(self.coef)
        return 0.0, math.log(min(delta, a / math.e) / a)

    def descriptor(self):
        if self.type == "linear":
            return {"type": "linear", "slope": self.slope, "offset": self.offset}
        if self.type == "power":
            return {"type": "power", "exp": self.exp, "coef": self.coef}
        return {"type": "exp", "coef": self.coef}


class DiagonalOperator(OperatorInstance):
    """``(A x)_i = f_i(x_i)`` with nondecreasing ``f_i``.

    ``strict=False`` admits non-monotone functions; such operators are not
    accretive and exist only as negative controls.
    """

    kind = "diagonal"

    def __init__(self, fns, lambda0=math.inf, strict=True):
        fns = tuple(f if isinstance(f, ScalarFn) else ScalarFn(**f) for f in fns)
        if not fns:
            raise DomainError("need at least one coordinate function")
        if strict and not all(f.is_monotone() for f in fns):
            raise DomainError("coordinate functions must be nondecreasing")
        super().__init__(len(fns), lambda0)
        self.fns = fns
        enc = [f.encode() for f in fns]
        self._codes = np.array([e[0] for e in enc], dtype=np.int64)
        self._a = np.array([e[1] for e in enc], dtype=float)
        self._c = np.array([e[2] for e in enc], dtype=float)

    def apply(self, x):
        x = self._vec(x)
        if x.ndim == 1:
            return _diag.apply_vec(self._codes, self._a, self._c, x)
        flat = x.reshape(-1, self.dimension)
        out = np.stack([_diag.apply_vec(self._codes, self._a, self._c, row) for row in flat])
        return out.reshape(x.shape)

    def resolvent(self, lam, x, tol=DEFAULT_TOL):
        self._check_step(lam)
        x = self._vec(x)
        if lam == 0:
            return x
        y, ok = _diag.resolvent_vec(self._codes, self._a, self._c, float(lam), x, tol, NEWTON_BUDGET)
        if not ok:
            raise ResolventError(f"Newton/bisection did not converge for lam={lam}")
        return y

    def iterate_resolvent(self, lam, x, n, tol=DEFAULT_TOL):
        return self.iterate_batch(np.array([lam]), self._vec(x)[None, :], n, tol)[0]

    def iterate_batch(self, lams, xs, n, tol=DEFAULT_TOL):
        """``(J_{lams[k]})^n xs[k]`` for every row ``k``."""
        lams = np.asarray(lams, dtype=float)
        for lam in lams:
            self._check_step(lam)
        xs = np.array(xs, dtype=float, ndmin=2)
        out, failures = _diag.cl_iterate_batch(
            self._codes, self._a, self._c, lams, xs, int(n), tol, NEWTON_BUDGET
        )
        if failures:
            raise ResolventError("Newton/bisection failed during composition")
        return out

    def check_accretive(self, space):
        # coordinatewise nondecreasing maps are accretive in every l_p
        bad = [i for i, f in enumerate(self.fns) if not f.is_monotone()]
        if bad:
            raise DomainError(f"coordinate functions {bad} are not nondecreasing")

    def lipschitz_bound(self, b, space):
        # |x_i| <= ||x||_p <= b for every p
        return max(f.derivative_bound(b) for f in self.fns)

    def majorant(self, b, space):
        return float(space.norm(np.array([f.sup_abs(b) for f in self.fns])))

    def range_data(self, space):
        dim = self.dimension
        infs = np.array([f.range_witness(1.0)[0] for f in self.fns])
        d = float(space.norm(infs))

        def witness(eps):
            # per-coordinate excess eps/dim keeps ||z|| - d <= eps in every l_p
            y = np.array([f.range_witness(eps / dim)[1] for f in self.fns])
            return y, self.apply(y)

        def g(eps):
            y, z = witness(eps)
            return max(float(space.norm(y)), float(space.norm(z)))

        return RangeData(d_inf=d, f=_antitone(g, 1.0), E=math.ceil(d) + 1, witness=witness)

    def descriptor(self):
        return {"kind": "diagonal", "fns": [f.descriptor() for f in self.fns]}


def from_descriptor(desc, strict=True):
    """Build an operator from its JSON descriptor."""
    kind = desc.get("kind")
    lam0 = desc.get("lambda0", math.inf)
    if lam0 is None:
        lam0 = math.inf
    if kind == "constant":
        return ConstantOperator(desc["q"], lam0)
    if kind == "linear_psd":
        return LinearOperator(desc["matrix"], desc.get("q"), lam0)
    if kind == "diagonal":
        return DiagonalOperator(desc["fns"], lam0, strict=strict)
    raise DomainError(f"unknown operator kind {kind!r}")
