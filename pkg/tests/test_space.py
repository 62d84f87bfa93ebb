import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from accretive.errors import DimensionMismatch, DomainError
from accretive.space import SpaceInstance, as_vector, euclidean, lp

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vec3 = arrays(np.float64, 3, elements=finite)
spaces = st.sampled_from([euclidean(3), lp(3, 1.5), lp(3, 3.0), lp(3, 6.0)])


def test_norms_match_numpy():
    x = np.array([3.0, -4.0, 12.0])
    assert euclidean(3).norm(x) == pytest.approx(13.0)
    assert lp(3, 3.0).norm(x) == pytest.approx(np.linalg.norm(x, 3))
    assert lp(3, 1.5).norm(x) == pytest.approx(np.linalg.norm(x, 1.5))


def test_lp_norm_is_overflow_safe():
    x = np.array([1e300, 1e300])
    assert lp(2, 4.0).norm(x) == pytest.approx(1e300 * 2 ** 0.25)


def test_construction_errors():
    with pytest.raises(DomainError):
        SpaceInstance(0)
    with pytest.raises(DomainError):
        lp(2, 1.0)
    with pytest.raises(DomainError):
        SpaceInstance(2, "sup")
    with pytest.raises(DimensionMismatch):
        euclidean(2).norm([1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        as_vector([np.nan])


@settings(max_examples=200, deadline=None)
@given(spaces, vec3, vec3)
def test_duality_map_axioms(space, x, y):
    jx = space.duality_map(x)
    nx, ny = space.norm(x), space.norm(y)
    assert space.pairing(x, jx) == pytest.approx(nx**2, rel=1e-12, abs=1e-300)
    assert space.dual_norm(jx) == pytest.approx(nx, rel=1e-9, abs=1e-12)
    assert abs(space.pairing(y, jx)) <= nx * ny * (1 + 1e-12) + 1e-12


def test_duality_map_is_homogeneous(rng):
    s = lp(4, 3.0)
    x = rng.standard_normal(4)
    np.testing.assert_allclose(s.duality_map(2.5 * x), 2.5 * s.duality_map(x), rtol=1e-13)
    np.testing.assert_allclose(s.duality_map(-x), -s.duality_map(x), rtol=1e-13)


def test_euclidean_duality_is_identity(rng):
    x = rng.standard_normal(3)
    np.testing.assert_allclose(euclidean(3).duality_map(x), x)


def test_eta_closed_forms():
    e = np.array([0.1, 1.0, 2.0])
    np.testing.assert_allclose(euclidean(2).ucx_modulus(e), 1 - np.sqrt(1 - e**2 / 4), rtol=1e-12)
    np.testing.assert_allclose(lp(2, 4.0).ucx_modulus(e), 1 - (1 - (e / 2) ** 4) ** 0.25, rtol=1e-12)
    np.testing.assert_allclose(lp(2, 1.5).ucx_modulus(e), 0.5 * e**2 / 16)
    assert euclidean(2).eta(5.0) == euclidean(2).ucx_modulus(2.0)
    with pytest.raises(DomainError):
        euclidean(2).ucx_modulus(0.0)


@pytest.mark.parametrize("space", [euclidean(2), lp(2, 3.0), lp(2, 1.5)])
def test_eta_is_a_uniform_convexity_modulus(space, rng):
    # midpoints of unit vectors at distance eps lie in the ball of radius 1 - eta(eps)
    u = rng.standard_normal((5000, 2))
    v = rng.standard_normal((5000, 2))
    u /= space.norm(u)[:, None]
    v /= space.norm(v)[:, None]
    e = space.norm(u - v)
    keep = e > 1e-3
    mid = space.norm((u[keep] + v[keep]) / 2)
    assert np.all(mid <= 1 - space.eta(e[keep]) + 1e-12)


def test_clarkson_angle_bounds(rng):
    s = lp(3, 3.0)
    a, b = rng.standard_normal((2, 50, 3))
    ang = s.clarkson_angle(a, b)
    assert np.all((ang >= 0) & (ang <= 2))
    assert s.clarkson_angle(a[0], -2 * a[0]) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        s.clarkson_angle(np.zeros(3), a[0])


def test_semi_inner_modulus():
    assert euclidean(2).semi_inner_modulus(4.0, 0.5) == 0.125
    s = lp(2, 3.0)
    assert s.omega_is_empirical and not euclidean(2).omega_is_empirical
    w1, w2 = s.semi_inner_modulus(1.0, 0.01), s.semi_inner_modulus(1.0, 0.1)
    assert 0 < w1 <= w2


def test_semi_inner_modulus_holds_on_samples(rng):
    s = lp(2, 3.0)
    b, eps = 2.0, 0.05
    w = s.semi_inner_modulus(b, eps)
    z = rng.uniform(-1, 1, (4000, 2)) * b / math.sqrt(2)
    x = rng.uniform(-1, 1, (4000, 2)) * b / math.sqrt(2)
    d = rng.standard_normal((4000, 2))
    d *= (w * rng.uniform(0, 1, 4000) / s.norm(d))[:, None]
    assert np.all(s.semi_inner(z, x + d) <= s.semi_inner(z, x) + eps + 1e-12)


def test_descriptor_round_trip():
    s = lp(3, 4.0)
    assert SpaceInstance(**{"dimension": 3, "norm_kind": "lp", "p": 4.0}) == s
    assert s.descriptor()["p"] == 4.0
