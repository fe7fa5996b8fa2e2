import numpy as np
import pytest
from hypothesis import given, strategies as st

from ndflab import (
    BernsteinTriplet,
    EuclideanPower,
    FromTriplet,
    LevyTriplet,
    Log1p,
    Power,
    SpecError,
    Subordinated,
    eval_bernstein,
    eval_psi,
    eval_psi_many,
    kernel_kpsi,
    metric_dpsi,
    subordinate,
)
from ndflab.core import (
    DimensionMismatch,
    bernstein_from_json,
    bernstein_to_json,
    ndf_from_json,
    ndf_to_json,
)
from randgen import random_bernstein, random_ndf_spec


def test_eval_bernstein_examples():
    assert eval_bernstein(Power(1.0), 3.5) == 3.5
    assert eval_bernstein(Log1p(), 0.0) == 0.0
    f = BernsteinTriplet(a=0.0, b=0.0, atoms=((1.0, 1.0),))
    assert eval_bernstein(f, 1.0) == pytest.approx(1.0 - np.exp(-1.0), abs=1e-15)


def test_eval_bernstein_rejects_negative_argument():
    with pytest.raises(ValueError):
        eval_bernstein(Log1p(), -0.1)


def test_bernstein_triplet_value_at_zero_is_a():
    f = BernsteinTriplet(a=0.25, b=1.0, atoms=((2.0, 0.5),))
    assert eval_bernstein(f, 0.0) == 0.25


def test_bernstein_validation():
    with pytest.raises(SpecError):
        BernsteinTriplet(a=-1.0)
    with pytest.raises(SpecError):
        BernsteinTriplet(atoms=((0.0, 1.0),))
    with pytest.raises(SpecError):
        Power(0.0)
    with pytest.raises(SpecError):
        Power(1.5)


def test_eval_psi_examples():
    quad = FromTriplet(LevyTriplet(q=2.0 * np.eye(2)))
    assert eval_psi(quad, [3.0, 4.0]) == pytest.approx(25.0, abs=1e-12)

    one_atom = FromTriplet(LevyTriplet(q=np.zeros((1, 1)), atoms=(([1.0], 1.0),)))
    assert eval_psi(one_atom, np.pi) == pytest.approx(2.0, abs=1e-12)

    assert eval_psi(EuclideanPower(1.0, 2), [3.0, 4.0]) == pytest.approx(5.0)

    quad_1 = Subordinated(Power(0.5), quad)
    assert eval_psi(quad_1, [3.0, 4.0]) == pytest.approx(5.0, rel=1e-12)


def test_eval_psi_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        eval_psi(EuclideanPower(1.0, 2), [1.0, 2.0, 3.0])


def test_killing_constant_rejected():
    with pytest.raises(SpecError):
        FromTriplet(LevyTriplet(q=np.eye(1), a=0.5))


def test_subordinate_examples():
    quad = FromTriplet(LevyTriplet(q=2.0 * np.eye(1)))
    psi = subordinate(Power(1.0), quad)
    assert eval_psi(psi, 3.0) == eval_psi(quad, 3.0)
    root = subordinate(Power(0.5), quad)
    assert eval_psi(root, -4.0) == pytest.approx(4.0)
    assert eval_psi(subordinate(Log1p(), EuclideanPower(2.0, 1)), 0.0) == 0.0


def test_subordinate_rejects_nonzero_f_at_zero():
    with pytest.raises(SpecError):
        subordinate(BernsteinTriplet(a=1.0), EuclideanPower(1.0, 1))


def test_metric_examples():
    psi = EuclideanPower(2.0, 2)
    assert metric_dpsi(psi, [1.0, 2.0], [1.0, 2.0]) == 0.0
    assert metric_dpsi(psi, [1.0, 0.0], [0.0, 0.0]) == pytest.approx(1.0)
    assert metric_dpsi(EuclideanPower(1.0, 1), 4.0, 0.0) == pytest.approx(2.0)


def test_kernel_examples():
    psi = EuclideanPower(1.5, 1)
    assert kernel_kpsi(psi, 3.0, 0.0) == 0.0
    assert kernel_kpsi(psi, 1.0, 1.0) == pytest.approx(2.0**1.5)
    assert kernel_kpsi(EuclideanPower(1.0, 1), 1.0, -1.0) == pytest.approx(-2.0)


def test_evenness_and_zero_battery():
    rng = np.random.default_rng(11)
    for _ in range(100):
        dim = int(rng.integers(1, 4))
        psi = random_ndf_spec(rng, dim)
        pts = rng.normal(scale=3.0, size=(100, dim))
        np.testing.assert_array_equal(eval_psi_many(psi, pts), eval_psi_many(psi, -pts))
        assert abs(eval_psi(psi, np.zeros(dim))) <= 1e-14
        assert np.all(eval_psi_many(psi, pts) >= 0.0)


def test_metric_axioms_battery():
    rng = np.random.default_rng(12)
    for _ in range(100):
        dim = int(rng.integers(1, 4))
        psi = random_ndf_spec(rng, dim)
        for _ in range(100):
            xi, eta, zeta = rng.normal(scale=2.0, size=(3, dim))
            assert metric_dpsi(psi, xi, eta) == pytest.approx(metric_dpsi(psi, eta, xi), abs=1e-14)
            assert metric_dpsi(psi, xi, zeta) <= (
                metric_dpsi(psi, xi, eta) + metric_dpsi(psi, eta, zeta) + 1e-10
            )


def test_sqrt_psi_subadditive():
    rng = np.random.default_rng(13)
    for _ in range(100):
        dim = int(rng.integers(1, 4))
        psi = random_ndf_spec(rng, dim)
        xi, eta = rng.normal(scale=2.0, size=(2, dim))
        lhs = np.sqrt(eval_psi(psi, xi + eta))
        rhs = np.sqrt(eval_psi(psi, xi)) + np.sqrt(eval_psi(psi, eta))
        assert lhs <= rhs + 1e-10


@given(st.tuples(st.floats(0.0, 50.0), st.floats(0.0, 50.0), st.floats(0.0, 50.0)),
       st.integers(0, 2**32 - 1))
def test_bernstein_monotone_concave(lams, seed):
    l1, l2, l3 = sorted(lams)
    f = random_bernstein(np.random.default_rng(seed))
    v1, v2, v3 = (eval_bernstein(f, l) for l in (l1, l2, l3))
    assert v1 <= v2 + 1e-12
    # midpoint concavity
    mid = eval_bernstein(f, 0.5 * (l1 + l3))
    assert mid >= 0.5 * (v1 + v3) - 1e-12


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
def test_subordination_matches_euclidean_power(alpha):
    rng = np.random.default_rng(int(alpha * 100))
    for dim in (1, 2, 3):
        quad = FromTriplet(LevyTriplet(q=2.0 * np.eye(dim)))
        via_sub = Subordinated(Power(alpha / 2.0), quad)
        direct = EuclideanPower(alpha, dim)
        pts = rng.normal(scale=3.0, size=(200, dim))
        np.testing.assert_allclose(
            eval_psi_many(via_sub, pts), eval_psi_many(direct, pts), rtol=1e-12
        )


def test_json_round_trip_byte_identical():
    rng = np.random.default_rng(14)
    for _ in range(50):
        psi = random_ndf_spec(rng, int(rng.integers(1, 4)))
        s = ndf_to_json(psi)
        assert ndf_to_json(ndf_from_json(s)) == s
    for _ in range(50):
        f = random_bernstein(rng)
        s = bernstein_to_json(f)
        assert bernstein_to_json(bernstein_from_json(s)) == s


def test_decoded_spec_evaluates_identically():
    rng = np.random.default_rng(15)
    psi = random_ndf_spec(rng, 2)
    clone = ndf_from_json(ndf_to_json(psi))
    pts = rng.normal(size=(50, 2))
    np.testing.assert_array_equal(eval_psi_many(psi, pts), eval_psi_many(clone, pts))
