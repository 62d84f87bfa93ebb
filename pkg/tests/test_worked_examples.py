"""Small hand-evaluated examples for each public function."""

import math

import numpy as np
import pytest

from accretive.certificate import Claim
from accretive.operator import ConstantOperator, DiagonalOperator, LinearOperator, RangeData
from accretive.rates import plant, reich
from accretive.semigroup import SemigroupEvaluator, equicontinuity_threshold
from accretive.space import euclidean, lp
from accretive.verify import (
    Instance,
    SamplingPlan,
    basic_properties,
    clarkson_integral_check,
    empirical_threshold,
    verify_certificate,
)

FAST = SamplingPlan(per_decade=4, decades=2, samples=30)


def cube():
    return DiagonalOperator([{"type": "power", "exp": 3}])


# spaces -------------------------------------------------------------------

def test_norm_examples():
    assert euclidean(2).norm([3.0, 4.0]) == 5.0
    assert lp(2, 3.0).norm([0.0, 0.0]) == 0.0
    assert lp(2, 3.0).norm([1.0, 1.0]) == pytest.approx(2 ** (1 / 3))


def test_duality_examples():
    np.testing.assert_allclose(euclidean(2).duality_map([1.0, 2.0]), [1.0, 2.0])
    x = np.array([0.3, -1.7])
    np.testing.assert_allclose(lp(2, 2.0).duality_map(x), x, rtol=1e-15)
    np.testing.assert_allclose(lp(2, 4.0).duality_map([1.0, 1.0]), [2**-0.5, 2**-0.5], rtol=1e-14)
    assert lp(2, 4.0).semi_inner([1.0, 0.0], [1.0, 1.0]) == pytest.approx(2**-0.5)


def test_modulus_examples():
    assert euclidean(2).eta(2.0) == 1.0
    assert euclidean(2).eta(1.0) == pytest.approx(1 - math.sqrt(3) / 2)
    assert lp(2, 2.0).eta(0.7) == euclidean(2).eta(0.7)
    s = euclidean(2)
    assert s.clarkson_angle([1.0, 0.0], [1.0, 0.0]) == 0.0
    assert s.clarkson_angle([1.0, 0.0], [-1.0, 0.0]) == 2.0
    assert s.clarkson_angle([1.0, 0.0], [0.0, 1.0]) == pytest.approx(math.sqrt(2))
    assert s.semi_inner_modulus(2.0, 1.0) == 0.5
    assert s.semi_inner_modulus(1.0, 1.0) == 1.0


# operators ------------------------------------------------------------------

def test_apply_and_resolvent_examples():
    np.testing.assert_array_equal(ConstantOperator([1.0, -1.0]).apply([5.0, 5.0]), [1.0, -1.0])
    np.testing.assert_array_equal(LinearOperator(np.eye(2)).apply([2.0, 0.0]), [2.0, 0.0])
    assert cube().apply([2.0])[0] == 8.0
    ident = DiagonalOperator([{"type": "linear", "slope": 1.0}])
    assert cube().resolvent(0.0, [2.0])[0] == 2.0
    assert ident.resolvent(1.0, [2.0])[0] == 1.0
    assert cube().resolvent(1.0, [2.0])[0] == pytest.approx(1.0, abs=1e-13)


def test_yosida_examples():
    ident = DiagonalOperator([{"type": "linear", "slope": 1.0}])
    assert ident.yosida(1.0, [2.0])[0] == 1.0
    np.testing.assert_allclose(ConstantOperator([3.0, 1.0]).yosida(0.7, [1.0, 1.0]), [3.0, 1.0])
    zero = DiagonalOperator([{"type": "linear", "slope": 0.0}])
    assert zero.yosida(2.0, [4.0])[0] == 0.0


def test_bracket_examples():
    s = euclidean(2)
    assert ConstantOperator([3.0, 4.0]).bracket_norm([9.0, 9.0], s) == 5.0
    assert DiagonalOperator([{"type": "linear", "slope": 0.0}] * 2).bracket_norm([1.0, 1.0], s) == 0.0
    assert LinearOperator(np.eye(2)).bracket_norm([3.0, 4.0], s) == 5.0
    # A_lam x stays below |Ax|
    op, x = LinearOperator(np.eye(2)), np.array([3.0, 4.0])
    assert s.norm(op.yosida(0.5, x)) <= op.bracket_norm(x, s)


def test_range_examples():
    s = euclidean(2)
    assert ConstantOperator([1.0, 0.0]).range_data(s).d_inf == 1.0
    rd = LinearOperator(np.eye(2)).range_data(s)
    assert rd.d_inf == 0.0
    y, z = rd.witness(0.1)
    assert s.norm(z) <= 0.1 and rd.f(0.1) <= 0.1
    # exp: e^y <= eps at y = ln(eps)
    rd = DiagonalOperator([{"type": "exp", "coef": 1.0}]).range_data(euclidean(1))
    assert rd.d_inf == 0.0
    for eps in (1e-3, 0.1):
        assert rd.f(eps) == pytest.approx(max(abs(math.log(eps)), eps))


def test_graph_examples():
    s = euclidean(2)
    assert ConstantOperator([1.0, 2.0]).graph_contains([7.0, -3.0], [1.0, 2.0], 0.0, s)
    assert not LinearOperator(np.eye(2)).graph_contains([1.0, 0.0], [0.0, 1.0], 1e-12, s)
    assert cube().graph_contains([2.0], [8.0], 0.0, euclidean(1))


# semigroup ------------------------------------------------------------------

def test_iterate_examples():
    ev = SemigroupEvaluator(ConstantOperator([1.0, 2.0]), euclidean(2))
    np.testing.assert_allclose(ev.cl_iterate(1.0, [0.5, 0.5], 10), [-0.5, -1.5])
    np.testing.assert_array_equal(ev.cl_iterate(0.0, [0.5, 0.5], 10), [0.5, 0.5])
    assert ev.semigroup_eval(0.0, [0.5, 0.5], 1e-9).tolist() == [0.5, 0.5]


def test_equicontinuity_examples():
    s = euclidean(1)
    assert equicontinuity_threshold(ConstantOperator([1.0]), 1.0, 0, s) == 0.125
    assert equicontinuity_threshold(ConstantOperator([4.0]), 1.0, 1, s) == 1 / 64


# small-time rates -----------------------------------------------------------

def _params(b=1, n=1, lambda0=math.inf):
    return plant.PlantParams(b=b, n=n, eta=euclidean(1).eta, omega=euclidean(1).semi_inner_modulus,
                             phi=lambda e, bb: e, lambda0=lambda0)


def test_phi1_examples():
    assert plant.phi1(0.25, _params(lambda0=1.0)) == 0.25
    assert plant.phi1(0.9, _params(lambda0=1.0)) == 0.5
    assert plant.phi1(1.0, _params(b=2)) == 0.5


def test_miyadera_examples():
    om = euclidean(1).semi_inner_modulus
    assert plant.psi_miyadera(0.4, 1, om) == pytest.approx(0.1)
    assert plant.psi_miyadera(0.4, 2, om) == pytest.approx(0.4 / 16)


def test_phi2_chain_example():
    # psi(1 * (1/2) / 4, 6) = omega(12, 1/8) / 12 = (1/8) / 12 / 12
    assert plant.phi2(1.0, _params()) == pytest.approx(1 / 1152)


def test_phi3_with_unit_modulus():
    p = plant.PlantParams(b=1, n=1, eta=lambda e: 1.0, omega=lambda b, e: e / b, phi=lambda e, b: e)
    assert plant.phi3(1.0, p) == 0.25


def test_plant_rate_composes():
    p = _params()
    assert plant.plant_rate(1.0, p).threshold == pytest.approx(
        min(plant.phi3(0.5, p), plant.phi4(0.5, p)) ** 2)


# large-time rates -----------------------------------------------------------

def _reich_params(E=1, b=1, f=1.0, d=1.0):
    rd = RangeData(d_inf=d, f=lambda e: f, E=E, witness=lambda e: (None, None))
    return reich.ReichParams(b=b, eta=lambda e: 1.0, range=rd)


def test_phi_inf_examples():
    assert reich.phi_inf(1.0, 2, lambda e: 3.0) == 40.0
    assert reich.phi_inf(2.0, 1, lambda e: 0.0) == 4.0


def test_escape_examples():
    assert reich.psi_escape(10.0, 2, 0.5) == 24.0
    assert reich.psi_escape(0.0, 0, 1.0) == 0.0


def test_direction_example():
    # g = 1 * 4 / 18; terms 3, 4, 2/g = 9, 8 * 4 / g = 144
    assert reich.phi1_reich(2.0, 1, 1.0, 1.0, lambda e: 1.0, lambda e: 3.0) == pytest.approx(144.0)


def test_cauchy_example_two_ways():
    p = _reich_params()
    # phi_inf(3/2) = 32/3, phi_inf(2) = 8; inner direction rate at eps'=1, D=3/2, c=1:
    # g = 1.5 * 4 / 18 = 1/3; terms 2, 4, 6, 8 * 2 * 3 = 48
    assert reich.phi2_reich(6.0, p) == pytest.approx(48.0)
    terms = [8 * 2 / 1.5, 8 * 2 / 2.0,
             max((1 + 1) / 1.5, (1 + 5 * 1) / 1.5, 2 / (1 / 3), 8 * 2 * 3)]
    assert reich.phi2_reich(6.0, p) == pytest.approx(max(terms))


def test_unique_limit_example():
    assert reich.unique_limit_gap(1.0, _reich_params()) == 0.125


def test_v_limit_examples():
    s = euclidean(2)
    op = ConstantOperator([1.0, 0.0])
    p = reich.ReichParams.for_instance(op, s, [0.3, 0.4])
    assert s.norm(reich.v_limit(op, [0.3, 0.4], 0.1, p) - op.q) <= 0.1
    op = LinearOperator(np.eye(2))
    p = reich.ReichParams.for_instance(op, s, [0.3, 0.4])
    assert s.norm(reich.v_limit(op, [0.3, 0.4], 0.1, p)) <= 0.1


# verification -----------------------------------------------------------------

def test_reich_main_on_constant_is_identically_zero():
    inst = Instance(ConstantOperator([1.0, 0.0]), euclidean(2), [0.2, 0.1])
    p = reich.ReichParams.for_instance(inst.op, inst.space, inst.x)
    rep = verify_certificate(reich.reich_rate(1.0, p), inst, FAST, conservativeness=False)
    assert rep.passed and max(rep.observed) == 0.0


def test_plant_main_small_time_taylor_bound():
    inst = Instance(DiagonalOperator([{"type": "linear", "slope": 1.0}]), euclidean(1), [1.0])
    p = plant.PlantParams.for_instance(inst.op, inst.space, inst.x)
    rep = verify_certificate(plant.plant_rate(0.5, p), inst, FAST, conservativeness=False)
    assert rep.passed
    assert all(r["observed"] <= r["t"] / 2 for r in rep.rows)


def test_empirical_threshold_examples():
    const = Instance(ConstantOperator([1.0]), euclidean(1), [0.5])
    assert empirical_threshold(const, "plant", 0.1).status == "always_below"
    ident = Instance(LinearOperator(np.eye(1)), euclidean(1), [1.0])
    est = empirical_threshold(ident, "reich", 0.1)
    assert est.status == "found" and math.isfinite(est.t_star)


def test_basic_properties_examples():
    for op in (LinearOperator(np.eye(2)), DiagonalOperator([{"type": "power", "exp": 3}] * 2)):
        rows = basic_properties(op, euclidean(2), SamplingPlan(samples=30))
        assert all(r["verdict"] == "pass" for r in rows)


def test_clarkson_integral_at_time_zero():
    inst = Instance(cube(), euclidean(1), [0.7])
    rep = clarkson_integral_check(inst, 0.5, 0.0, nodes=3)
    assert rep.passed and rep.rows[0]["observed"] == pytest.approx(0.0, abs=1e-15)
