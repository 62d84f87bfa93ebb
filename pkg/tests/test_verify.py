import json
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from accretive.certificate import Claim
from accretive.errors import SnapshotMismatch
from accretive.operator import ConstantOperator, DiagonalOperator, LinearOperator
from accretive.rates import plant, reich
from accretive.space import euclidean, lp
from accretive.verify import (
    Instance,
    SamplingPlan,
    Slack,
    axiom_suite,
    basic_properties,
    clarkson_integral_check,
    duality_suite,
    empirical_threshold,
    semigroup_law_check,
    verify_certificate,
)

from conftest import M2

FAST = SamplingPlan(per_decade=4, decades=2, samples=40)


def ident():
    return Instance(DiagonalOperator([{"type": "linear", "slope": 1.0}]), euclidean(1), [1.0], "id")


def test_slack_and_plan():
    assert Slack().bound(0.1) == pytest.approx(0.1 * 1.05 + 1e-7)
    g = SamplingPlan(per_decade=2, decades=1).t_grid(1.0, "all_t_below")
    assert g.max() == pytest.approx(1.0) and g.min() == pytest.approx(0.1)
    assert len(g) == 3
    up = SamplingPlan(per_decade=2, above_factor=10).t_grid(2.0, "all_t_above")
    assert up.min() == pytest.approx(2.0) and up.max() == pytest.approx(20.0)


def test_plant_main_passes_on_identity():
    inst = ident()
    p = plant.PlantParams.for_instance(inst.op, inst.space, inst.x)
    rep = verify_certificate(plant.plant_rate(0.1, p), inst, FAST)
    assert rep.passed and rep.evaluated == len(rep.rows)
    assert rep.conservativeness_ratio is None or rep.conservativeness_ratio >= 1.0
    data = json.loads(rep.to_json())
    assert data["claim"] == "plant_main" and data["header"]["threshold"] > 0


@pytest.mark.parametrize("claim", list(plant.plant_certificates(0.5, plant.PlantParams(
    b=1, n=1, eta=lambda e: 1, omega=lambda b, e: e, phi=lambda e, b: e))))
def test_every_plant_claim_passes_on_linear(claim):
    inst = Instance(LinearOperator(M2, [0.5, -0.5]), euclidean(2), [0.3, -0.2])
    p = plant.PlantParams.for_instance(inst.op, inst.space, inst.x)
    rep = verify_certificate(plant.plant_certificates(0.25, p)[claim], inst, FAST,
                             conservativeness=False)
    assert rep.passed, rep.rows[:3]


def test_reich_claims_pass_on_constant():
    inst = Instance(ConstantOperator([1.0, 0.0]), euclidean(2), [0.2, 0.1])
    p = reich.ReichParams.for_instance(inst.op, inst.space, inst.x, D=1.0)
    for cert in reich.reich_certificates(0.5, p).values():
        rep = verify_certificate(cert, inst, FAST, conservativeness=False)
        assert rep.passed, cert.claim


def test_falsified_rate_fails():
    inst = ident()
    p = plant.PlantParams.for_instance(inst.op, inst.space, inst.x)
    cert = plant.plant_certificates(0.1, p)[Claim.RESOLVENT_ROC]
    rep = verify_certificate(cert.with_threshold(cert.threshold * 100), inst, FAST,
                             conservativeness=False, negative_control=True)
    assert not rep.passed and rep.failures > 0


def test_snapshot_mismatch():
    inst = ident()
    p = plant.PlantParams.for_instance(inst.op, inst.space, inst.x)
    other = Instance(DiagonalOperator([{"type": "linear", "slope": 2.0}]), euclidean(1), [1.0])
    with pytest.raises(SnapshotMismatch):
        verify_certificate(plant.plant_rate(0.1, p), other, FAST)


def test_empirical_threshold_identity():
    # closed form: (e^-t - 1/(1+t))/t = eps has one root in t > 0
    t_true = brentq(lambda t: (1 / (1 + t) - math.exp(-t)) / t - 0.1, 1e-6, 1.0, xtol=1e-15)
    est = empirical_threshold(ident(), "plant", 0.1)
    assert est.status == "found"
    assert est.t_star == pytest.approx(t_true, rel=1e-9)
    assert est.t_star == pytest.approx(0.33082, abs=1e-5)


def test_empirical_threshold_reich_direction():
    inst = Instance(ConstantOperator([1.0]), euclidean(1), [0.5])
    # ||J_t x||/t - 1 = |0.5 - t|/t - 1 ... growth: | |0.5 - t|/t - 1 | <= eps once t >= 0.5/(2+... )
    est = empirical_threshold(inst, Claim.REICH_GROWTH, 0.1)
    assert est.status == "found"
    assert est.t_star == pytest.approx(5.0, rel=1e-9)


def test_duality_suite_passes(space2):
    rows = duality_suite(space2, samples=2000)
    assert all(r["verdict"] == "pass" for r in rows), [r for r in rows if r["verdict"] != "pass"]
    names = {r["check"] for r in rows}
    assert {"duality_gap_modulus", "clarkson_angle", "clarkson_sum", "semi_4_dominates_selection"} <= names


def test_basic_properties_pass(ops, space2):
    for op in ops.values():
        rows = basic_properties(op, space2, SamplingPlan(samples=30))
        assert all(r["verdict"] == "pass" for r in rows), [r for r in rows if r["verdict"] != "pass"]
        assert len({r["check"] for r in rows if r["check"][0].isdigit()}) >= 8


def test_non_accretive_operator_fails_axioms():
    op = DiagonalOperator([{"type": "linear", "slope": -1.0}], strict=False)
    rep = axiom_suite(euclidean(1), op, SamplingPlan(samples=30), negative_control=True,
                      semigroup=False)
    assert not rep.passed
    bad = {r["check"] for r in rep.rows if r["verdict"] == "fail"}
    assert "accretive_norm" in bad and "accretive_structure" in bad


def test_semigroup_law_check():
    op = DiagonalOperator([{"type": "power", "exp": 3}])
    rows = semigroup_law_check(op, euclidean(1), [0.3], [(0.05, 0.02), (0.01, 0.1)], eps_num=1e-3)
    assert all(r["verdict"] == "pass" for r in rows)


def test_clarkson_integral_inequality():
    inst = Instance(DiagonalOperator([{"type": "power", "exp": 3}, {"type": "exp", "coef": 0.5}]),
                    euclidean(2), [0.5, -0.3])
    for lam, t in [(1.0, 0.5), (0.2, 0.1), (2.0, 2.0)]:
        assert clarkson_integral_check(inst, lam, t).passed


def test_lp_instance_uses_calibrated_omega():
    inst = Instance(LinearOperator(M2), lp(2, 3.0), [0.3, -0.2])
    p = plant.PlantParams.for_instance(inst.op, inst.space, inst.x)
    assert p.snapshot["omega_empirical"] is True
    rep = verify_certificate(plant.plant_certificates(0.5, p)[Claim.MIYADERA], inst, FAST,
                             conservativeness=False)
    assert rep.passed
