"""Empirical verification of rate certificates and structural inequalities.

Certificates are universally quantified statements; here they are
falsified, or not, on explicit grids.  Every sample records the route used
to evaluate it:

``numeric``
    float resolvents and the Crandall-Liggett iterate, with a propagated
    error budget that must stay below the additive slack ``kappa``;
``exact``
    closed forms evaluated in high precision (see ``exact``);
``capped``
    neither route was affordable; the sample is reported, not judged.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import mpmath as mp
import numpy as np

from .certificate import Claim, Direction, RateCertificate
from .errors import (
    AccretiveError,
    BudgetExceeded,
    DomainError,
    ResolventError,
    SnapshotMismatch,
)
from .exact import ExactOracle, _digits, supports
from .operator import OperatorInstance
from .semigroup import SemigroupEvaluator, growth_bound
from .space import SpaceInstance

__all__ = [
    "Slack",
    "SamplingPlan",
    "Instance",
    "VerificationReport",
    "EmpiricalThreshold",
    "verify_certificate",
    "empirical_threshold",
    "basic_properties",
    "duality_suite",
    "semigroup_properties",
    "semigroup_law_check",
    "clarkson_integral_check",
    "axiom_suite",
]

_EPS = np.finfo(float).eps
CL_COST_CAP = 2**22


@dataclass(frozen=True)
class Slack:
    """Pass iff ``observed <= eps * (1 + sigma) + kappa``."""

    sigma: float = 0.05
    kappa: float = 1e-7

    def bound(self, eps):
        return eps * (1.0 + self.sigma) + self.kappa


@dataclass(frozen=True)
class SamplingPlan:
    """Where to sample.

    ``all_t_below`` certificates are sampled on ``[thr*10^-decades, thr]``,
    ``all_t_above`` ones on ``[thr, above_factor*thr]``; ``samples`` and
    ``seed`` drive the random point sampling of the structural suites.
    """

    grid: str = "geometric"
    per_decade: int = 32
    decades: float = 4.0
    above_factor: float = 64.0
    samples: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.grid not in ("geometric", "uniform"):
            raise DomainError(f"unknown grid kind {self.grid!r}")
        if self.per_decade < 1 or self.decades <= 0 or self.above_factor <= 1:
            raise DomainError("grid density and span must be positive")

    def span(self, lo, hi):
        count = max(2, int(math.ceil(math.log10(hi / lo) * self.per_decade)) + 1)
        if self.grid == "geometric":
            return np.geomspace(lo, hi, count)
        return np.linspace(lo, hi, count + 1)[1:] if lo == 0 else np.linspace(lo, hi, count)

    def t_grid(self, threshold, direction):
        direction = Direction(direction)
        if direction is Direction.ALL_T_BELOW:
            return self.span(threshold * 10.0 ** (-self.decades), threshold)
        return self.span(threshold, threshold * self.above_factor)

    def rng(self, salt=0):
        return np.random.default_rng([int(self.seed), int(salt)])

    def to_dict(self):
        return {
            "grid": self.grid,
            "per_decade": self.per_decade,
            "decades": self.decades,
            "above_factor": self.above_factor,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Instance:
    """An operator in a space together with a starting point."""

    op: OperatorInstance
    space: SpaceInstance
    x: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.op.dimension != self.space.dimension:
            raise DomainError("operator and space dimensions differ")
        object.__setattr__(self, "x", self.op._vec(self.x).copy())

    @cached_property
    def oracle(self):
        return ExactOracle(self.op, self.space) if supports(self.op) else None

    @cached_property
    def v(self):
        return self.op.apply(self.x)

    def norm(self, y):
        return float(self.space.norm(y))

    def descriptor(self):
        return {
            "label": self.label,
            "space": self.space.descriptor(),
            "operator": self.op.descriptor(),
            "x0": self.x.tolist(),
        }


@dataclass
class VerificationReport:
    """Per-sample observations against certified bounds.

    ``rows`` holds one dict per sample with at least ``observed``,
    ``bound`` and ``verdict`` (``pass``, ``fail`` or ``capped``).
    """

    claim: str
    instance: dict
    rows: list
    slack: Slack
    header: dict = field(default_factory=dict)
    conservativeness_ratio: Optional[float] = None
    negative_control: bool = False
    notes: list = field(default_factory=list)

    @property
    def grid(self):
        return [{k: r[k] for k in r if k not in ("observed", "bound", "verdict")} for r in self.rows]

    @property
    def observed(self):
        return [r["observed"] for r in self.rows]

    @property
    def bound(self):
        return [r["bound"] for r in self.rows]

    @property
    def verdicts(self):
        return [r["verdict"] for r in self.rows]

    @property
    def evaluated(self):
        return sum(v != "capped" for v in self.verdicts)

    @property
    def failures(self):
        return sum(v == "fail" for v in self.verdicts)

    @property
    def passed(self):
        return self.evaluated > 0 and self.failures == 0

    @property
    def max_budget(self):
        return max((r.get("budget", 0.0) for r in self.rows), default=0.0)

    def to_dict(self):
        return {
            "claim": self.claim,
            "instance": self.instance,
            "header": self.header,
            "slack": {"sigma": self.slack.sigma, "kappa": self.slack.kappa},
            "negative_control": self.negative_control,
            "passed": self.passed,
            "evaluated": self.evaluated,
            "failures": self.failures,
            "max_budget": self.max_budget,
            "conservativeness_ratio": self.conservativeness_ratio,
            "notes": list(self.notes),
            "rows": self.rows,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), sort_keys=True, default=_jsonable, **kw)

    def summary_row(self):
        obs = [o for o, v in zip(self.observed, self.verdicts) if v != "capped"]
        return {
            "claim": self.claim,
            "label": self.instance.get("label", ""),
            "epsilon": self.header.get("epsilon", ""),
            "threshold": self.header.get("threshold", ""),
            "samples": len(self.rows),
            "evaluated": self.evaluated,
            "failures": self.failures,
            "max_observed": max(obs) if obs else "",
            "verdict": "pass" if self.passed else "fail",
            "negative_control": self.negative_control,
        }


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (Claim, Direction)):
        return o.value
    raise TypeError(f"not serializable: {type(o)}")


# ---------------------------------------------------------------------------
# certificate checks
# ---------------------------------------------------------------------------


def _check_snapshot(cert, inst):
    p = cert.params
    need_b = max(inst.norm(inst.x), inst.norm(inst.v))
    if "b" in p and p["b"] < need_b:
        raise SnapshotMismatch(f"certificate assumes b={p['b']} but max(||x||, ||Ax||)={need_b:g}")
    if "n" in p:
        c, dc = inst.op.domain_witness()
        need_n = max(inst.norm(c), inst.norm(dc))
        if p["n"] < need_n:
            raise SnapshotMismatch(f"certificate assumes n={p['n']} but the witness needs {need_n:g}")
    if "operator" in p and p["operator"] != inst.op.descriptor():
        raise SnapshotMismatch("certificate was computed for a different operator")
    if "space" in p and p["space"] != inst.space.descriptor():
        raise SnapshotMismatch("certificate was computed for a different space")
    if "E" in p or p.get("D") is not None:
        d = inst.op.range_data(inst.space).d_inf
        if "E" in p and p["E"] < d:
            raise SnapshotMismatch(f"certificate assumes E={p['E']} below d={d:g}")
        if p.get("D") is not None and p["D"] > d:
            raise SnapshotMismatch(f"certificate assumes D={p['D']} above d={d:g}")


class _Pieces:
    """Fetch ``J_t x`` and ``S(t)x`` by the cheapest sound route.

    Returns lists of mpf together with an absolute error bound in the
    space norm.  Must be called inside an ``mp.workdps`` block when the
    exact route is taken.
    """

    def __init__(self, inst, eps, slack, tol):
        self.inst = inst
        self.eps = eps
        self.slack = slack
        self.tol = tol
        self.ev = SemigroupEvaluator(inst.op, inst.space, resolvent_tol=tol, max_steps=CL_COST_CAP)

    def resolvent_error(self):
        # residual in l_1 bounds the error in every l_p; add rounding of y
        scale = max(1.0, float(np.max(np.abs(self.inst.x))))
        return (self.tol + 4 * _EPS) * scale * self.inst.space.dimension

    def semigroup_plan(self, t):
        delta = min(self.slack.kappa, self.eps) * t / 4
        try:
            p = self.ev.plan(t, self.inst.x, delta)
        except BudgetExceeded:
            return None
        return p if p.n <= CL_COST_CAP else None

    def numeric(self, kind, t):
        x = self.inst.x
        if kind == "J":
            y = self.inst.op.resolvent(t, x, self.tol)
            return [mp.mpf(float(c)) for c in y], self.resolvent_error()
        p = self.semigroup_plan(t)
        y = self.ev.cl_iterate(t, x, p.n, p.tol) if not p.exact else self.ev.semigroup_eval(t, x, p.delta)
        return [mp.mpf(float(c)) for c in y], p.delta

    def exact(self, kind, t):
        o = self.inst.oracle
        return (o.resolvent(t, self.inst.x) if kind == "J" else o.semigroup(t, self.inst.x)), 0.0

    def numeric_cost(self, needs):
        """Error budget of the numeric route, or ``None`` if unaffordable."""
        total = 0.0
        for kind, t, weight in needs:
            if kind == "J":
                total += self.resolvent_error() * weight
            else:
                p = self.semigroup_plan(t)
                if p is None:
                    return None
                total += p.delta * weight
        return total


def _mpnorm(inst, v):
    if inst.space.is_hilbert:
        return mp.sqrt(mp.fsum(c * c for c in v))
    p = mp.mpf(inst.space.p)
    return mp.fsum(abs(c) ** p for c in v) ** (1 / p)


def _sub(a, b):
    return [u - w for u, w in zip(a, b)]


def _scale(a, s):
    return [u * s for u in a]


def _claim_samples(cert, inst, plan, rng):
    """``(params, needs, formula, bound_kind)`` for every sample of ``cert``.

    ``needs`` lists ``(kind, time, weight)`` with ``weight`` the factor the
    piece's error is multiplied by in the measured quantity.
    """
    claim, thr, eps = cert.claim, cert.threshold, cert.epsilon
    ts = plan.t_grid(thr, cert.direction)
    xm = [mp.mpf(float(c)) for c in inst.x]
    N = lambda v: _mpnorm(inst, v)
    vnorm = inst.norm(inst.v)
    out = []

    if claim in (Claim.PLANT_MAIN, Claim.REICH_MAIN):
        for t in ts:
            out.append(({"t": t}, [("J", t, 1 / t), ("S", t, 1 / t)],
                        lambda P, t=t: N(_sub(P[0], P[1])) / t, "eps"))
    elif claim is Claim.RESOLVENT_ROC:
        for t in ts:
            out.append(({"t": t}, [("J", t, 1 / t)],
                        lambda P, t=t: vnorm - N(_sub(xm, P[0])) / t, "eps"))
    elif claim is Claim.SEMIGROUP_ROC:
        for t in ts:
            out.append(({"t": t}, [("S", t, 1 / t)],
                        lambda P, t=t: vnorm - N(_sub(xm, P[0])) / t, "eps"))
    elif claim is Claim.RES_CAUCHY:
        for t in ts:
            for s in (t / 2, t * 1e-3):
                out.append(({"t": t, "s": s}, [("J", t, 1 / t), ("J", s, 1 / s)],
                            lambda P, t=t, s=s: N(_sub(_scale(_sub(xm, P[0]), 1 / mp.mpf(t)),
                                                       _scale(_sub(xm, P[1]), 1 / mp.mpf(s)))), "eps"))
    elif claim is Claim.RES_SEMI_COMB:
        for t in ts:
            for s in (t * thr, t * thr * 1e-2):
                out.append(({"t": t, "s": s}, [("J", t, 1 / t), ("S", s, 1 / s)],
                            lambda P, t=t, s=s: N(_sub(_scale(_sub(xm, P[0]), 1 / mp.mpf(t)),
                                                       _scale(_sub(xm, P[1]), 1 / mp.mpf(s)))), "eps"))
    elif claim is Claim.MIYADERA:
        b = cert.params.get("miyadera_b", cert.params.get("b"))
        for x0 in _graph_points_in_ball(inst, b, 3, rng):
            y0 = inst.op.apply(x0)
            w = inst.space.duality_map(inst.x - x0)
            wm = [mp.mpf(float(c)) for c in w]
            base = float(np.dot(y0, w))
            wn = float(inst.space.dual_norm(w))
            for t in ts:
                out.append(({"t": t, "x0": x0.tolist()}, [("S", t, wn / t)],
                            lambda P, t=t, wm=wm, base=base: mp.fsum(
                                (a - b_) * c for a, b_, c in zip(P[0], xm, wm)) / t + base, "eps"))
    elif claim is Claim.REICH_GROWTH:
        d = inst.op.range_data(inst.space).d_inf
        for t in ts:
            out.append(({"t": t}, [("J", t, 1 / t)],
                        lambda P, t=t: abs(N(P[0]) / t - d), "eps"))
    elif claim is Claim.REICH_ESCAPE:
        K = cert.params["K"]
        for t in ts:
            out.append(({"t": t}, [("J", t, 1.0)], lambda P: K - N(P[0]), "zero"))
    elif claim is Claim.REICH_DIRECTION:
        level = cert.params["witness_level"]
        _, z = inst.op.range_data(inst.space).witness(level)
        zm = [mp.mpf(float(c)) for c in z]
        zn = N(zm)
        for t in ts:
            jn = inst.norm(inst.op.resolvent(t, inst.x))
            out.append(({"t": t}, [("J", t, 2.0 / jn if jn > 0 else math.inf)],
                        lambda P: N([a / zn + b_ / N(P[0]) for a, b_ in zip(zm, P[0])]), "eps"))
    elif claim is Claim.REICH_CAUCHY:
        pairs = [(ts[0], t) for t in ts[1:]] + list(zip(ts[1:-1], ts[2:]))
        for s, t in pairs:
            out.append(({"s": s, "t": t}, [("J", s, 1 / s), ("J", t, 1 / t)],
                        lambda P, s=s, t=t: N(_sub(_scale(P[0], 1 / mp.mpf(s)),
                                                   _scale(P[1], 1 / mp.mpf(t)))), "eps"))
    else:  # pragma: no cover - every Claim member is handled above
        raise DomainError(f"unsupported claim {claim}")
    return out


def _graph_points_in_ball(inst, b, count, rng):
    pts = []
    for _ in range(50 * count):
        if len(pts) == count:
            break
        u = rng.standard_normal(inst.space.dimension)
        u *= rng.uniform(0.1, 1.0) * b / inst.norm(u)
        for _ in range(40):
            if inst.norm(inst.op.apply(u)) <= b:
                pts.append(u)
                break
            u = u / 2
    return pts


def _evaluate_sample(sample, pieces, inst, kappa, bound):
    params, needs, formula, _ = sample
    times = [t for _, t, _ in needs]
    cost = pieces.numeric_cost(needs)
    row = dict(params)
    try:
        with mp.workdps(_digits(*times)):
            if cost is not None and cost <= kappa / 2:
                got = [pieces.numeric(k, t) for k, t, _ in needs]
                route, budget = "numeric", cost
            elif inst.oracle is not None:
                got = [pieces.exact(k, t) for k, t, _ in needs]
                route, budget = "exact", 0.0
            else:
                row.update(observed=float("nan"), bound=bound, verdict="capped", route="capped")
                return row
            value = float(formula([g[0] for g in got]))
    except ResolventError as exc:
        row.update(observed=float("inf"), bound=bound, verdict="fail", route="error", error=str(exc))
        return row
    row.update(
        observed=value,
        bound=bound,
        verdict="pass" if value <= bound else "fail",
        route=route,
        budget=budget,
    )
    return row


def verify_certificate(cert: RateCertificate, inst: Instance, plan=None, slack=None, *,
                       tol=1e-12, workers=1, conservativeness=True, negative_control=False):
    """Sample the certified side of ``cert`` and compare with its bound.

    Raises
    ------
    SnapshotMismatch
        If the certificate's parameters do not hold for ``inst``.
    """
    plan = plan or SamplingPlan()
    slack = slack or Slack()
    _check_snapshot(cert, inst)
    samples = _claim_samples(cert, inst, plan, plan.rng(1))
    pieces = _Pieces(inst, cert.epsilon, slack, tol)

    def run(sample):
        bound = slack.bound(cert.epsilon) if sample[3] == "eps" else slack.kappa
        return _evaluate_sample(sample, pieces, inst, slack.kappa, bound)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(run, samples))
    else:
        rows = [run(s) for s in samples]

    report = VerificationReport(
        claim=cert.claim.value,
        instance=inst.descriptor(),
        rows=rows,
        slack=slack,
        header={
            "epsilon": cert.epsilon,
            "threshold": cert.threshold,
            "direction": cert.direction.value,
            "params": {k: v for k, v in cert.params.items() if k not in ("operator", "space")},
            "plan": plan.to_dict(),
            "resolvent_tol": tol,
        },
        negative_control=negative_control,
    )
    if not report.evaluated:
        report.notes.append("no sample could be evaluated (all cost-capped)")
    if conservativeness and cert.claim in _SINGLE_T and inst.oracle is not None:
        est = empirical_threshold(inst, cert.claim, cert.epsilon, cert.direction,
                                  SamplingPlan(per_decade=4))
        if est.status == "found":
            report.conservativeness_ratio = (
                est.t_star / cert.threshold
                if cert.direction is Direction.ALL_T_BELOW
                else cert.threshold / est.t_star
            )
        else:
            report.notes.append(f"empirical threshold: {est.status}")
    return report


# ---------------------------------------------------------------------------
# empirical thresholds
# ---------------------------------------------------------------------------

_SINGLE_T = {
    Claim.PLANT_MAIN: Direction.ALL_T_BELOW,
    Claim.RESOLVENT_ROC: Direction.ALL_T_BELOW,
    Claim.SEMIGROUP_ROC: Direction.ALL_T_BELOW,
    Claim.REICH_MAIN: Direction.ALL_T_ABOVE,
    Claim.REICH_GROWTH: Direction.ALL_T_ABOVE,
}
_ALIASES = {"plant": Claim.PLANT_MAIN, "reich": Claim.REICH_MAIN}


@dataclass(frozen=True)
class EmpiricalThreshold:
    """Outcome of ``empirical_threshold``.

    ``status`` is ``found``, ``always_below`` (the quantity never exceeded
    eps on the probed range; ``t_star`` is the range end) or
    ``never_below`` (``t_star`` is nan).
    """

    t_star: float
    status: str
    probes: int


def _single_t_quantity(inst, claim):
    o = inst.oracle
    if o is None:
        raise DomainError("empirical thresholds need a closed-form instance")
    vnorm = inst.norm(inst.v)
    if claim in (Claim.PLANT_MAIN, Claim.REICH_MAIN):
        return lambda t: o.gap_ratio(t, inst.x)
    if claim is Claim.RESOLVENT_ROC:
        return lambda t: vnorm - o.resolvent_quotient(t, inst.x)
    if claim is Claim.SEMIGROUP_ROC:
        return lambda t: vnorm - o.semigroup_quotient(t, inst.x)
    d = inst.op.range_data(inst.space).d_inf
    return lambda t: abs(o.resolvent_growth(t, inst.x) - d)


def empirical_threshold(inst, quantity, eps, direction=None, plan=None, lo=1e-12, hi=1e4,
                        bisections=60):
    """Largest (``all_t_below``) or smallest (``all_t_above``) admissible ``t``.

    The quantity is scanned on a geometric grid over ``[lo, hi]``; the first
    grid cell where it exceeds ``eps`` is refined by bisection in ``log t``.
    """
    claim = _ALIASES.get(quantity) or Claim(quantity)
    if claim not in _SINGLE_T:
        raise DomainError(f"no single-time quantity for {claim.value}")
    direction = Direction(direction) if direction is not None else _SINGLE_T[claim]
    plan = plan or SamplingPlan()
    q = _single_t_quantity(inst, claim)
    ts = np.geomspace(lo, hi, max(2, int(math.ceil(math.log10(hi / lo) * plan.per_decade)) + 1))
    if direction is Direction.ALL_T_ABOVE:
        ts = ts[::-1]
    probes = 0
    prev = None
    for t in ts:
        probes += 1
        if q(t) > eps:
            break
        prev = t
    else:
        return EmpiricalThreshold(float(ts[-1]), "always_below", probes)
    if prev is None:
        return EmpiricalThreshold(float("nan"), "never_below", probes)
    good, bad = math.log(prev), math.log(t)
    for _ in range(bisections):
        mid = 0.5 * (good + bad)
        probes += 1
        if q(math.exp(mid)) <= eps:
            good = mid
        else:
            bad = mid
    return EmpiricalThreshold(math.exp(good), "found", probes)


# ---------------------------------------------------------------------------
# structural suites
# ---------------------------------------------------------------------------


class _Tally:
    """Collect the worst scaled violation per named check."""

    def __init__(self, tol):
        self.tol = tol
        self.worst = {}
        self.count = {}
        self.errors = {}

    def add(self, name, lhs, rhs, scale=1.0):
        viol = (np.asarray(lhs) - rhs) / np.maximum(1.0, scale)
        self.worst[name] = max(self.worst.get(name, -math.inf), float(np.max(viol)))
        self.count[name] = self.count.get(name, 0) + int(np.size(viol))

    def error(self, name, exc):
        self.errors.setdefault(name, str(exc))
        self.count[name] = self.count.get(name, 0) + 1

    def rows(self):
        out = []
        for name in sorted(set(self.worst) | set(self.errors)):
            if name in self.errors:
                out.append({"check": name, "samples": self.count[name], "observed": math.inf,
                            "bound": self.tol, "verdict": "fail", "error": self.errors[name]})
            else:
                w = self.worst[name]
                out.append({"check": name, "samples": self.count[name], "observed": w,
                            "bound": self.tol, "verdict": "pass" if w <= self.tol else "fail"})
        return out


def _random_points(rng, n, dim, radius):
    x = rng.standard_normal((n, dim))
    return x * (radius * rng.uniform(0.05, 1.0, n) / np.linalg.norm(x, axis=1))[:, None]


def basic_properties(op, space, plan=None, tol=1e-8, radius=2.0):
    """Resolvent and Yosida inequalities on seeded random samples.

    Covers uniqueness, firm and plain nonexpansiveness, extensionality, the
    resolvent identity, the step comparison, the ``2/gamma`` Lipschitz bound
    and the bound by ``||Ax||``, plus accretivity (norm and duality forms),
    continuity of the resolvent at zero and the ``|A.|`` modulus.
    """
    plan = plan or SamplingPlan()
    rng = plan.rng(2)
    T = _Tally(tol)
    N = space.norm
    X = _random_points(rng, plan.samples, space.dimension, radius)
    Y = _random_points(rng, plan.samples, space.dimension, radius)
    lams = 10.0 ** rng.uniform(-2, 1, plan.samples)
    gams = 10.0 ** rng.uniform(-2, 1, plan.samples)
    rs = rng.uniform(0.0, 3.0, plan.samples) + 1e-3
    for x, y, lam, gam, r in zip(X, Y, lams, gams, rs):
        lam = min(lam, op.lambda0 / 2)
        gam = min(gam, op.lambda0 / 2)
        u, w = op.apply(x), op.apply(y)
        sc = 1.0 + N(x) + N(y) + N(u) + N(w)
        # accretivity of the graph itself needs no resolvent
        T.add("accretive_norm", N(x - y), N(x - y + lam * (u - w)), sc)
        T.add("accretive_duality", 0.0, space.pairing(u - w, space.duality_map(x - y)), sc * sc)
        try:
            Jx, Jy = op.resolvent(gam, x), op.resolvent(gam, y)
            T.add("1_uniqueness", N(op.resolvent(gam, x + gam * u) - x), 0.0, sc)
            T.add("2_firmly_nonexpansive", N(Jx - Jy), N(r * (x - y) + (1 - r) * (Jx - Jy)), sc)
            T.add("3_nonexpansive", N(Jx - Jy), N(x - y), sc)
            x2, gam2 = (x * 3.0) / 3.0, (gam * 7.0) / 7.0
            T.add("4_extensional", N(op.resolvent(gam2, x2) - Jx), 0.0, sc)
            Jlx = op.resolvent(lam, x)
            mid = (gam / lam) * x + (1 - gam / lam) * Jlx
            T.add("5_resolvent_identity", N(Jlx - op.resolvent(gam, mid)), 0.0, sc * (1 + gam / lam))
            T.add("6_step_comparison", N(x - Jx), (2 + gam / lam) * N(x - Jlx), sc * (1 + gam / lam))
            Ax, Ay = (x - Jx) / gam, (y - Jy) / gam
            T.add("7_yosida_lipschitz", N(Ax - Ay), 2.0 / gam * N(x - y), sc / gam)
            T.add("8_yosida_bound", N(Ax), N(u), sc / gam)
            T.add("8_resolvent_displacement", N(x - Jx), gam * N(u), sc)
            # |Ax| = ||u|| here, so the bracket bounds reduce to item 8
            eps0 = 0.5
            t0 = eps0 / max(1.0, N(u))
            T.add("resolvent_at_zero", N(x - op.resolvent(t0, x)), eps0, sc)
        except AccretiveError as exc:
            T.error("resolvent", exc)
        b = max(N(x), N(y)) + 1.0
        dphi = op.bracket_modulus(1.0, b, space)
        z = x + dphi * (y - x) / max(N(y - x), 1e-300) * rng.uniform(0, 1)
        T.add("bracket_modulus", op.bracket_norm(x, space) - op.bracket_norm(z, space), 1.0, sc)
    return T.rows()


def duality_suite(space, plan=None, tol=1e-9, samples=None):
    """Duality-map and semi-inner-product axioms on seeded random vectors.

    Vectorised over ``samples`` draws (default ``plan.samples``).
    """
    plan = plan or SamplingPlan()
    n = samples or plan.samples
    rng = plan.rng(3)
    T = _Tally(tol)
    d = space.dimension
    N, j, pair, si = space.norm, space.duality_map, space.pairing, space.semi_inner

    x = rng.standard_normal((n, d)) * 10.0 ** rng.uniform(-2, 1, (n, 1))
    y = rng.standard_normal((n, d)) * 10.0 ** rng.uniform(-2, 1, (n, 1))
    z = rng.standard_normal((n, d))
    a, bb = rng.standard_normal(n), rng.standard_normal(n)
    nx, ny, nz = N(x), N(y), N(z)
    jx = j(x)

    T.add("J_norm_identity", np.abs(pair(x, jx) - nx**2), 0.0, np.maximum(nx**2, 1.0))
    T.add("J_dual_bound", np.abs(pair(y, jx)), nx * ny, np.maximum(nx * ny, 1.0))
    lin = pair(a[:, None] * y + bb[:, None] * z, jx) - a * pair(y, jx) - bb * pair(z, jx)
    T.add("J_linear", np.abs(lin), 0.0, np.maximum(nx * (np.abs(a) * ny + np.abs(bb) * nz), 1.0))

    al, be = np.abs(a), np.abs(bb)
    hom = si(al[:, None] * y, be[:, None] * x) - al * be * si(y, x)
    T.add("semi_1_homogeneous", np.abs(hom), 0.0, np.maximum(al * be * nx * ny, 1.0))
    aff = si(a[:, None] * x + y, x) - (a * nx**2 + si(y, x))
    T.add("semi_2_affine", np.abs(aff), 0.0, np.maximum(np.abs(a) * nx**2 + nx * ny, 1.0))
    T.add("semi_3_bounded", np.abs(si(y, x)), nx * ny, np.maximum(nx * ny, 1.0))
    T.add("semi_4_dominates_selection", pair(y, jx), si(y, x), np.maximum(nx * ny, 1.0))

    t = 10.0 ** rng.uniform(-3, 1, n)
    dq = nx * (N(x + t[:, None] * y) - nx) / t
    T.add("difference_quotient", pair(y, jx), dq, np.maximum(nx * ny, 1.0))

    # accretivity transfer: <y, j(x)> >= 0 implies ||x|| <= ||x + lam y||
    lam = 10.0 ** rng.uniform(-3, 1, n)
    mask = pair(y, jx) >= 0
    if np.any(mask):
        T.add("accretivity_transfer", nx[mask], N(x[mask] + lam[mask, None] * y[mask]),
              np.maximum(nx[mask], 1.0))

    ux, uy = x / nx[:, None], y / ny[:, None]
    e = np.minimum(N(ux - uy), 2.0)
    keep = e > 0
    T.add("duality_gap_modulus", 2.0 * space.eta(e[keep]), 1.0 - pair(uy[keep], j(ux[keep])))

    # midpoint definition of the convexity modulus
    T.add("ucx_definition", N((ux[keep] + uy[keep]) / 2), 1.0 - space.eta(e[keep]))

    alpha = space.clarkson_angle(x, y)
    T.add("clarkson_angle", np.abs(nx * alpha - N(x - y)), np.abs(nx - ny), np.maximum(nx + ny, 1.0))
    s = x + y
    ns = N(s)
    ok = ns > 0
    ang = space.clarkson_angle(s[ok], x[ok])
    ok2 = ang > 0
    T.add(
        "clarkson_sum",
        ns[ok][ok2],
        (1 - 2 * space.eta(ang[ok2])) * nx[ok][ok2] + ny[ok][ok2],
        np.maximum(nx[ok][ok2] + ny[ok][ok2], 1.0),
    )

    # modulus for <z, .>_s: sample inside the b-ball at the modulus distance
    b = 10.0 ** rng.uniform(-1, 1, n)
    eps = 10.0 ** rng.uniform(-3, 0, n)
    xx = rng.standard_normal((n, d))
    xx *= (b * rng.uniform(0, 1, n) / N(xx))[:, None]
    zz = rng.standard_normal((n, d))
    zz *= (b * rng.uniform(0, 1, n) / N(zz))[:, None]
    w = rng.standard_normal((n, d))
    om = np.array([space.semi_inner_modulus(bi, ei) for bi, ei in zip(b, eps)])
    w *= (om * rng.uniform(0, 1, n) / N(w))[:, None]
    T.add("semi_5_modulus", si(zz, xx + w), si(zz, xx) + eps, np.maximum(b * b, 1.0))
    return T.rows()


def semigroup_properties(op, space, plan=None, delta=1e-2, radius=0.5, t_max=0.25, samples=None):
    """Semigroup inequalities evaluated through ``semigroup_eval``.

    Each inequality is judged with the summed evaluation budget as slack.
    """
    plan = plan or SamplingPlan()
    n = samples or max(1, plan.samples // 20)
    rng = plan.rng(4)
    ev = SemigroupEvaluator(op, space)
    N = space.norm
    rows = []
    worst = {}

    def add(name, lhs, rhs, budget):
        viol = lhs - rhs - budget
        worst[name] = max(worst.get(name, -math.inf), viol)

    X = _random_points(rng, n, space.dimension, radius)
    Y = _random_points(rng, n, space.dimension, radius)
    try:
        for x, y in zip(X, Y):
            t, s = rng.uniform(0, t_max, 2)
            v = op.apply(x)
            St, Ss = ev.semigroup_eval(t, x, delta), ev.semigroup_eval(s, x, delta)
            add("1_lipschitz_in_t", N(St - Ss), 2 * abs(t - s) * N(v), 2 * delta)
            add("2_nonexpansive", N(St - ev.semigroup_eval(t, y, delta)), N(x - y), 2 * delta)
            k = 2
            h = 2.0 ** (-(k + 2)) / max(1.0, N(v))
            t2 = min(t + h * rng.uniform(0, 1), t + h)
            add("3_time_modulus", N(St - ev.semigroup_eval(t2, x, delta)), 2.0**-k, 2 * delta)
            inner = ev.semigroup_eval(s, x, delta / 4)
            add("5_semigroup_law", N(ev.semigroup_eval(t + s, x, delta / 4)
                                     - ev.semigroup_eval(t, inner, delta / 4)), 0.0, 3 * delta / 4)
            add("growth_bound", N(St), growth_bound(op, space, x, t_max), delta)
            # Yosida norms do not grow along a resolvent orbit
            lam = t / 16 if t > 0 else 1e-3
            yk = x
            a0 = N(op.yosida(lam, yk))
            for _ in range(16):
                yk = op.resolvent(lam, yk)
                add("yosida_monotone_orbit", N(op.yosida(lam, yk)), a0, 1e-10 * (1 + a0) / lam)
    except (AccretiveError, BudgetExceeded) as exc:
        rows.append({"check": "semigroup_eval", "samples": n, "observed": math.inf,
                     "bound": 0.0, "verdict": "fail", "error": str(exc)})
    for name in sorted(worst):
        rows.append({"check": name, "samples": n, "observed": worst[name], "bound": 0.0,
                     "verdict": "pass" if worst[name] <= 0 else "fail"})
    return rows


def semigroup_law_check(op, space, x, pairs, eps_num=1e-4):
    """``||S(t+s)x - S(t)S(s)x|| <= eps_num`` with the budget split in three.

    ``S(t+s)x`` and ``S(s)x`` are evaluated to ``eps_num/3``; the inner point
    is then re-entered and moved by ``S(t)`` to ``eps_num/3``.
    Nonexpansiveness makes the three errors add.
    """
    ev = SemigroupEvaluator(op, space)
    d = eps_num / 3
    rows = []
    for t, s in pairs:
        y1, p1 = ev.evaluate(t + s, x, d)
        y2, p2 = ev.evaluate(s, x, d)
        y3, p3 = ev.evaluate(t, y2, d)
        gap = float(space.norm(y1 - y3))
        rows.append({"t": float(t), "s": float(s), "observed": gap, "bound": eps_num,
                     "verdict": "pass" if gap <= eps_num else "fail",
                     "n_used": [p1.n, p2.n, p3.n]})
    return rows


def clarkson_integral_check(inst, lam, t, nodes=129, slack=None):
    """``||J_lam x - S(t)x|| <= (1 - t/lam)||x - J_lam x|| + (2/lam) int_0^t ||x - S(s)x|| ds``.

    The integral is a composite Simpson sum; since ``s -> ||x - S(s)x||`` is
    ``||Ax||``-Lipschitz the quadrature error is at most ``2 ||Ax|| h t``
    and is added to the slack together with the evaluation errors.
    """
    if not (lam > 0 and t >= 0):
        raise DomainError("need lam > 0 and t >= 0")
    if nodes < 3 or nodes % 2 == 0:
        raise DomainError("Simpson needs an odd node count >= 3")
    slack = slack or Slack()
    x, N = inst.x, inst.norm
    vn = N(inst.v)
    if inst.oracle is not None:
        S = lambda s: inst.oracle.semigroup_float(s, x) if s > 0 else x
        J = inst.oracle.resolvent_float(lam, x)
        delta = 4 * _EPS * max(1.0, N(x) + t * vn)
    else:
        ev = SemigroupEvaluator(inst.op, inst.space)
        delta = slack.kappa / 4
        S = lambda s: ev.semigroup_eval(s, x, delta)
        J = inst.op.resolvent(lam, x)
    ss = np.linspace(0.0, t, nodes)
    g = np.array([N(x - S(s)) for s in ss])
    h = t / (nodes - 1)
    w = np.ones(nodes)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    integral = h / 3 * float(np.dot(w, g))
    quad_err = 2 * vn * h * t
    lhs = N(J - S(t))
    rhs = (1 - t / lam) * N(x - J) + 2 / lam * integral
    budget = 2 * delta * (1 + 2 * t / lam) + 2 / lam * quad_err + slack.kappa
    row = {"lam": lam, "t": t, "nodes": nodes, "observed": lhs - rhs, "bound": budget,
           "verdict": "pass" if lhs - rhs <= budget else "fail", "quadrature_error": quad_err}
    return VerificationReport("clarkson_integral", inst.descriptor(), [row], slack,
                              header={"lam": lam, "t": t, "nodes": nodes})


def axiom_suite(space, op, plan=None, negative_control=False, semigroup=True):
    """Every structural check for one space/operator pair in one report."""
    plan = plan or SamplingPlan()
    rows = [dict(r, group="space") for r in duality_suite(space, plan)]
    rows += [dict(r, group="operator") for r in basic_properties(op, space, plan)]
    if semigroup:
        rows += [dict(r, group="semigroup") for r in semigroup_properties(op, space, plan)]
    try:
        op.check_accretive(space)
    except DomainError as exc:
        rows.append({"check": "accretive_structure", "samples": 1, "observed": math.inf,
                     "bound": 0.0, "verdict": "fail", "error": str(exc), "group": "operator"})
    inst = {"space": space.descriptor(), "operator": op.descriptor()}
    return VerificationReport("axioms", inst, rows, Slack(),
                              header={"plan": plan.to_dict()}, negative_control=negative_control)
