"""Acceptance criteria, one test each.

Every test records a one-line verdict that the session summary prints (see
``conftest.pytest_terminal_summary``); running this file directly prints the
same lines.
"""

import math
import time
from contextlib import contextmanager

import mpmath as mp
import numpy as np
import pytest

from accretive.cli import negative_controls
from accretive.operator import ConstantOperator, DiagonalOperator, LinearOperator
from accretive.rates import plant, reich
from accretive.semigroup import SemigroupEvaluator, cl_rate
from accretive.space import euclidean, lp
from accretive.verify import (
    Instance,
    SamplingPlan,
    Slack,
    basic_properties,
    duality_suite,
    empirical_threshold,
    semigroup_law_check,
    verify_certificate,
)

from conftest import M2, make_ops

RESULTS = {}


@contextmanager
def criterion(num, title, budget_s):
    """Time a criterion and record ``PASS``/``FAIL`` with a detail string."""
    info = {"detail": ""}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget_s
        verdict = "PASS" if ok and within else "FAIL"
        extra = "" if within else f" (over the {budget_s:g}s budget)"
        RESULTS[num] = f"criterion {num} [{verdict}] {title}: {info['detail']} in {elapsed:.2f}s{extra}"
    assert within, RESULTS[num]


def _rows_pass(rows):
    return [r for r in rows if r["verdict"] != "pass"]


def test_criterion_1_cl_rate_soundness():
    with criterion(1, "Crandall-Liggett rate", 1.0) as info:
        ev = SemigroupEvaluator(DiagonalOperator([{"type": "linear", "slope": 1.0}]), euclidean(1))
        ns = [cl_rate(k, 1, 1) for k in (0, 4, 8)]
        assert ns == [4, 1024, 262144]
        worst = -math.inf
        for k, n in zip((0, 4, 8), ns):
            for t in (0.1, 0.5, 0.9):
                err = abs(ev.cl_iterate(t, [1.0], n)[0] - math.exp(-t))
                # the iterate against its closed form (1 + t/n)^-n, evaluated without rounding
                exact = float((1 + mp.mpf(t) / n) ** -n)
                assert abs(ev.cl_iterate(t, [1.0], n)[0] - exact) <= n * 1e-15
                assert err <= 2.0**-k + 1e-12
                worst = max(worst, err / 2.0**-k)
        info["detail"] = f"n={ns}, worst error/2^-k={worst:.3g}"


def test_criterion_2_basic_properties():
    with criterion(2, "resolvent and Yosida properties", 10.0) as info:
        plan = SamplingPlan(samples=100, seed=0)
        total, bad = 0, []
        for space in (euclidean(2), lp(2, 3.0)):
            for name, op in make_ops().items():
                rows = basic_properties(op, space, plan, tol=1e-8)
                items = {r["check"] for r in rows if r["check"][0].isdigit()}
                assert {c.split("_")[0] for c in items} >= set("12345678")
                total += sum(r["samples"] for r in rows)
                bad += [(space.descriptor(), name, r["check"]) for r in _rows_pass(rows)]
        info["detail"] = f"{total} checks over 6 instances, {len(bad)} failing"
        assert not bad, bad


def test_criterion_3_semigroup_law():
    with criterion(3, "semigroup law", 60.0) as info:
        rng = np.random.default_rng(3)
        cases = [
            (LinearOperator(M2), euclidean(2), [0.01, -0.01]),
            (DiagonalOperator([{"type": "power", "exp": 3}, {"type": "power", "exp": 3, "coef": 0.5}]),
             lp(2, 3.0), [0.3, -0.25]),
            (ConstantOperator([1.0, -2.0]), euclidean(2), [0.5, 0.5]),
        ]
        worst, count = 0.0, 0
        for op, space, x in cases:
            pairs = rng.uniform(0.0, 0.25, (20, 2))
            rows = semigroup_law_check(op, space, x, pairs, eps_num=1e-4)
            count += len(rows)
            worst = max(worst, max(r["observed"] for r in rows))
            assert not _rows_pass(rows), _rows_pass(rows)
        info["detail"] = f"{count} pairs, worst gap {worst:.2e} <= 1e-4"


def _plant_instances():
    return [
        Instance(LinearOperator(M2, [0.5, -0.5]), euclidean(2), [0.3, -0.2], "linear_psd"),
        Instance(DiagonalOperator([{"type": "power", "exp": 3}, {"type": "exp", "coef": 0.5}]),
                 euclidean(2), [0.5, -0.3], "diagonal"),
    ]


def test_criterion_4_plant_soundness():
    with criterion(4, "small-time rate soundness", 300.0) as info:
        plan = SamplingPlan(per_decade=32)
        slack = Slack(sigma=0.05, kappa=1e-7)
        n_rows, worst, failed = 0, -math.inf, []
        for inst in _plant_instances():
            p = plant.PlantParams.for_instance(inst.op, inst.space, inst.x)
            for eps in (0.5, 0.25, 0.1):
                rep = verify_certificate(plant.plant_rate(eps, p), inst, plan, slack,
                                         conservativeness=False)
                n_rows += rep.evaluated
                worst = max(worst, max(rep.observed) / eps)
                if not rep.passed:
                    failed.append((inst.label, eps))
        info["detail"] = f"{n_rows} sampled t, worst observed/eps={worst:.3g}"
        assert not failed, failed


def test_criterion_5_reich_soundness():
    with criterion(5, "large-time rate soundness", 300.0) as info:
        plan = SamplingPlan(per_decade=32, above_factor=64)
        slack = Slack(sigma=0.05, kappa=1e-7)
        cases = [
            (Instance(ConstantOperator([1.0, 0.0]), euclidean(2), [0.2, 0.1], "constant"), 1.0),
            (Instance(LinearOperator(np.eye(2)), euclidean(2), [0.5, -0.5], "identity"), None),
        ]
        n_rows, failed = 0, []
        for inst, D in cases:
            p = reich.ReichParams.for_instance(inst.op, inst.space, inst.x, D=D)
            for eps in (1.0, 0.5, 0.25):
                certs = reich.reich_certificates(eps, p)
                for claim in ("reich_main", "reich_growth"):
                    rep = verify_certificate(certs[claim], inst, plan, slack, conservativeness=False)
                    n_rows += rep.evaluated
                    if not rep.passed:
                        failed.append((inst.label, eps, claim))
        info["detail"] = f"{n_rows} sampled t across d>0 and d=0 instances"
        assert not failed, failed


def test_criterion_6_conservativeness():
    with criterion(6, "certified threshold below empirical", 1.0) as info:
        inst = Instance(DiagonalOperator([{"type": "linear", "slope": 1.0}]), euclidean(1), [1.0])
        p = plant.PlantParams.for_instance(inst.op, inst.space, inst.x)
        est = empirical_threshold(inst, "plant", 0.1)
        cert = plant.plant_rate(0.1, p).threshold
        info["detail"] = f"empirical t*={est.t_star:.5g} ({est.status}) vs certified {cert:.3g}"
        assert est.status == "found" and est.t_star >= cert


def test_criterion_7_duality_axioms():
    with criterion(7, "duality and semi-inner axioms", 30.0) as info:
        bad = []
        for space in (euclidean(3), lp(3, 3.0), lp(3, 1.5)):
            rows = duality_suite(space, SamplingPlan(seed=7), tol=1e-9, samples=10_000)
            bad += [(space.p, r["check"], r["observed"]) for r in _rows_pass(rows)]
        info["detail"] = f"10^4 samples x 3 spaces, {len(bad)} failing checks"
        assert not bad, bad


def test_criterion_8_negative_controls():
    with criterion(8, "negative controls fail", 30.0) as info:
        reports = negative_controls(SamplingPlan(), Slack())
        fails = {r.claim: r.failures for r in reports}
        info["detail"] = ", ".join(f"{k}: {v} fail rows" for k, v in fails.items())
        assert all(r.negative_control for r in reports)
        assert all(not r.passed and r.failures >= 1 for r in reports)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
