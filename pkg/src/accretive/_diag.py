"""Compiled kernels for coordinatewise (diagonal) operators.

Each coordinate carries a scalar function encoded as ``(code, a, c)``:

* ``LINEAR``: ``f(y) = a*y + c``
* ``POWER``:  ``f(y) = a*sgn(y)*|y|**c``  (``c >= 1``)
* ``EXP``:    ``f(y) = a*exp(y)``

The resolvent solves ``y + lam*f(y) = x`` per coordinate by Newton's method,
safeguarded by bisection on the bracket between ``x`` and ``x - lam*f(x)``.
"""

import numba
import numpy as np

LINEAR, POWER, EXP = 0, 1, 2

_EPS = np.finfo(np.float64).eps


@numba.njit(cache=True)
def fval(code, a, c, y):
    if code == LINEAR:
        return a * y + c, a
    if code == POWER:
        s = abs(y)
        if c == 1.0:
            return a * y, a
        v = a * s**c
        d = a * c * s ** (c - 1.0)
        return (v if y >= 0 else -v), d
    e = a * np.exp(y)
    return e, e


@numba.njit(cache=True)
def solve_scalar(code, a, c, lam, x, tol, maxit):
    """Return ``(y, ok)`` with ``|y + lam*f(y) - x| <= tol`` when ``ok``."""
    if lam == 0.0:
        return x, True
    fx, dfx = fval(code, a, c, x)
    if fx == 0.0:
        return x, True
    lo = x - lam * fx
    hi = x
    if lo > hi:
        lo, hi = hi, lo
    if hi - lo > 1e3 * (1.0 + abs(x)):
        # the a-priori bracket is useless (steep f); walk from x with doubling steps
        sgn = -1.0 if fx > 0.0 else 1.0
        step = 1.0 + abs(x) * 1e-3
        near = x
        while step < hi - lo:
            z = x + sgn * step
            gz = z + lam * fval(code, a, c, z)[0] - x
            if gz == 0.0:
                return z, True
            if (gz > 0.0) == (fx > 0.0):
                near = z
                step *= 2.0
            else:
                if sgn < 0.0:
                    lo, hi = z, near
                else:
                    lo, hi = near, z
                break
    y = x - lam * fx / (1.0 + lam * dfx)
    if not (lo <= y <= hi):
        y = 0.5 * (lo + hi)
    for _ in range(maxit):
        fy, dfy = fval(code, a, c, y)
        g = y + lam * fy - x
        scale = abs(x) + abs(y) + lam * abs(fy)
        if abs(g) <= tol or abs(g) <= 8.0 * _EPS * scale:
            return y, True
        if g > 0.0:
            hi = y
        else:
            lo = y
        dg = 1.0 + lam * dfy
        ynew = y - g / dg if dg > 0.0 else 0.5 * (lo + hi)
        if not (lo < ynew < hi):
            ynew = 0.5 * (lo + hi)
        if ynew == y:
            break
        y = ynew
    fy, dfy = fval(code, a, c, y)
    g = y + lam * fy - x
    return y, abs(g) <= tol or abs(g) <= 8.0 * _EPS * (abs(x) + abs(y) + lam * abs(fy))


@numba.njit(cache=True)
def apply_vec(codes, a, c, x):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = fval(codes[i], a[i], c[i], x[i])[0]
    return out


@numba.njit(cache=True)
def resolvent_vec(codes, a, c, lam, x, tol, maxit):
    d = x.shape[0]
    out = np.empty_like(x)
    scale = 1.0
    for i in range(d):
        scale = max(scale, abs(x[i]))
    tol_i = tol * scale / d
    for i in range(d):
        yi, ok = solve_scalar(codes[i], a[i], c[i], lam, x[i], tol_i, maxit)
        if not ok:
            return out, False
        out[i] = yi
    return out, True


@numba.njit(cache=True, nogil=True)
def cl_iterate_batch(codes, a, c, lams, xs, n, tol, maxit):
    """``(J_lam)^n x`` for each row of ``xs`` with its own step ``lams[k]``.

    Returns the iterates and the number of rows whose solver failed.
    """
    m, d = xs.shape
    out = xs.copy()
    failures = 0
    for k in range(m):
        lam = lams[k]
        y = out[k]
        for _ in range(n):
            scale = 1.0
            for i in range(d):
                scale = max(scale, abs(y[i]))
            tol_i = tol * scale / d
            for i in range(d):
                yi, ok = solve_scalar(codes[i], a[i], c[i], lam, y[i], tol_i, maxit)
                if not ok:
                    failures += 1
                    break
                y[i] = yi
        out[k] = y
    return out, failures
