"""Tests for hhgeom.functional."""
from math import factorial

import numpy as np
import pytest

from hhgeom.bodies import box, cube
from hhgeom.functional import (
    ConcaveFn,
    ConvexGauge,
    GaugeOfConcave,
    check_classical_hh,
    check_cor_alpha,
    check_hh_center_of_mass,
    check_thm2,
    check_thm3,
    eval_concave,
    four_point,
    four_point_gap,
    gauge_eval,
    grundmann_moller_rule,
    hh_rhs,
    hh_rhs_quadrature,
    integrate_exp_affine,
    integrate_gauge_concave,
    integrate_polynomial,
    monte_carlo_moments,
    supporting_affine,
    weighted_centroid,
)
from hhgeom.polytope import hull
from hhgeom.utils import PreconditionError
from hhgeom.verify import construct_equality_thm2, construct_equality_thm3

GAUGES = [
    ConvexGauge.power(1),
    ConvexGauge.power(2),
    ConvexGauge.power(2.5),
    ConvexGauge.exp_minus_one(),
    ConvexGauge.max_affine([(0, 0), (1, -0.5), (3, -2)]),
]


@pytest.fixture
def interval():
    return cube(1)


@pytest.fixture
def square():
    return cube(2)


def tent(square):
    """min(2 - x1, 2 + x1), whose mean over the square is 1.5."""
    return ConcaveFn(slopes=[[-1.0, 0.0], [1.0, 0.0]], intercepts=[2.0, 2.0], domain=square)


def test_eval_concave(interval, square):
    f = ConcaveFn.affine(interval, [1.0], 1.0)

    assert eval_concave(f, [0.0]) == pytest.approx(1)
    assert eval_concave(f, [-1.0]) == pytest.approx(0)
    assert eval_concave(tent(square), [0.0, 0.0]) == pytest.approx(2)

    with pytest.raises(ValueError):
        eval_concave(f, [2.0])


def test_concave_fn_must_be_nonnegative(interval):
    with pytest.raises(PreconditionError, match="f >= 0 on C"):
        ConcaveFn.affine(interval, [2.0], 1.0)

    assert ConcaveFn.affine(interval, [2.0], 1.0, allow_negative=True).vertex_minimum == pytest.approx(-1)


def test_envelope(square):
    points = np.random.default_rng(0).uniform(-1, 1, size=(40, 2))
    points = np.vstack([points, square.vertices, [[0.0, -1.0], [0.0, 1.0]]])
    f = tent(square)
    envelope = ConcaveFn.envelope(points, f(points), domain=square)

    assert np.allclose(envelope(points), f(points), atol=1e-9)
    assert len(envelope.pieces) == 2

    affine = ConcaveFn.envelope(points, 1 + points @ [0.5, 0.25], domain=square)
    assert affine.is_affine


def test_supporting_affine(square):
    f = tent(square)
    points = np.random.default_rng(1).uniform(-1, 1, size=(100, 2))

    for x in ([0.5, 0.2], [-0.3, 0.9]):
        g = supporting_affine(f, x)
        assert np.all(g(points) >= f(points) - 1e-12)
        assert g(x)[0] == pytest.approx(f(x)[0])


def test_gauges():
    assert gauge_eval(ConvexGauge.power(2), 3) == pytest.approx(9)
    assert gauge_eval(ConvexGauge.exp_minus_one(), 0) == 0
    assert ConvexGauge.max_affine([(1, 3), (2, 1)]).pieces == ((1.0, 0.0), (2.0, -2.0))

    with pytest.raises(ValueError):
        gauge_eval(ConvexGauge.power(2), -1)

    with pytest.raises(ValueError):
        ConvexGauge.power(0.5)

    with pytest.raises(ValueError):
        ConvexGauge.max_affine([(0, 1)])

    with pytest.raises(ValueError):
        ConvexGauge(kind="log")


@pytest.mark.parametrize("phi", GAUGES)
def test_gauges_are_monotone_and_satisfy_four_point(phi):
    rng = np.random.default_rng(2)
    t = np.linspace(0, 5, 101)

    assert phi(0.0) == pytest.approx(0)
    assert np.all(np.diff(phi(t)) >= -1e-12)

    for _ in range(1000):
        a, gamma = rng.uniform(0, 2), rng.uniform(1, 3)
        r = rng.uniform(0, 0.999) * a / gamma
        assert four_point(phi, a, r, gamma)


def test_four_point_gap():
    assert four_point_gap(ConvexGauge.power(2), 1, 0.5, 2) == pytest.approx(1.5)

    with pytest.raises(ValueError):
        four_point_gap(ConvexGauge.power(2), 1, 1, 2)


def test_hh_rhs_closed_forms():
    assert hh_rhs(ConvexGauge.power(2), 1) == pytest.approx(4 / 3)
    assert hh_rhs(ConvexGauge.exp_minus_one(), 1) == pytest.approx((np.e**2 - 1) / 2 - 1)
    assert hh_rhs(ConvexGauge.power(3), 0) == 0

    for alpha in (1, 1.5, 2, 3):
        assert hh_rhs(ConvexGauge.power(alpha), 1) == pytest.approx(2**alpha / (alpha + 1))


@pytest.mark.parametrize("phi", GAUGES)
@pytest.mark.parametrize("f0", [0.3, 1.0, 2.5])
def test_hh_rhs_matches_quadrature(phi, f0):
    assert hh_rhs(phi, f0) == pytest.approx(hh_rhs_quadrature(phi, f0), rel=1e-9)
    assert hh_rhs(phi, f0) >= float(phi(f0)) - 1e-12


@pytest.mark.parametrize("order,s", [(1, 0), (2, 1), (3, 2), (4, 1)])
def test_grundmann_moller_weights(order, s):
    nodes, weights = grundmann_moller_rule(order, s)

    assert weights.sum() == pytest.approx(1 / factorial(order))
    assert np.allclose(nodes.sum(axis=1), 1)


def test_integrate_polynomial():
    triangle = hull([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    integral = integrate_polynomial(triangle, lambda points: points[:, 0] ** 2 * points[:, 1], degree=3)

    assert float(integral) == pytest.approx(1 / 60)
    assert float(integrate_polynomial(cube(3), lambda points: points[:, 0] ** 2, degree=2)) == pytest.approx(8 / 3)


def test_integrate_exp_affine():
    assert integrate_exp_affine(box([0.0], [1.0]), np.array([1.0]), 0.0) == pytest.approx(np.e - 1)
    assert integrate_exp_affine(cube(2), np.array([0.5, 0.5]), 0.0) == pytest.approx(
        4 * (np.e - 2 + np.exp(-1)), rel=1e-12
    )


def test_integrate_gauge_concave_exact(interval, square):
    f = ConcaveFn.affine(square, [0.5, 0.5], 1.0)
    estimate = integrate_gauge_concave(square, f, ConvexGauge.power(2), samples=1000, seed=0)

    assert estimate.method == "exact"
    assert estimate.value == pytest.approx(7 / 6)

    g = ConcaveFn.affine(interval, [1.0], 1.0)
    for alpha in (1, 2, 3):
        value = integrate_gauge_concave(interval, g, ConvexGauge.power(alpha), samples=1000, seed=0).value
        assert value == pytest.approx(2**alpha / (alpha + 1))

    zero = ConcaveFn.constant(square, 0.0)
    assert integrate_gauge_concave(square, zero, ConvexGauge.power(2), samples=1000, seed=0).value == 0


def test_integrate_gauge_concave_monte_carlo(interval, square):
    capped = ConcaveFn(slopes=[[0.5, 0.5], [0.0, 0.0]], intercepts=[1.0, 10.0], domain=square)
    estimate = integrate_gauge_concave(square, capped, ConvexGauge.power(2), samples=100_000, seed=3)

    assert estimate.method == "monte_carlo"
    assert abs(estimate.value - 7 / 6) <= 5 * estimate.std_error

    g = ConcaveFn.affine(interval, [1.0], 1.0)
    estimate = integrate_gauge_concave(interval, g, ConvexGauge.power(2.5), samples=20_000, seed=4)
    assert abs(estimate.value - 2**2.5 / 3.5) <= 5 * estimate.std_error


def test_monte_carlo_is_deterministic(square):
    integrand = GaugeOfConcave(f=tent(square), phi=ConvexGauge.power(2))
    first = monte_carlo_moments(square, integrand, samples=120_000, seed=5, jobs=1)
    second = monte_carlo_moments(square, integrand, samples=120_000, seed=5, jobs=2)

    assert np.array_equal(first[0], second[0])
    assert np.array_equal(first[1], second[1])

    with pytest.raises(ValueError):
        monte_carlo_moments(square, integrand, samples=10, seed=5)


def test_check_thm2(square):
    f = ConcaveFn.affine(square, [0.5, 0.5], 1.0)
    report = check_thm2(square, f, ConvexGauge.power(2), samples=1000, seed=0)

    assert report.lhs == pytest.approx(7 / 6)
    assert report.rhs == pytest.approx(4 / 3)
    assert report.verdict == "pass"

    constant = ConcaveFn.constant(square, 2.0)
    report = check_thm2(square, constant, ConvexGauge.power(2), samples=1000, seed=0)
    assert report.lhs == pytest.approx(4)
    assert report.rhs == pytest.approx(16 / 3)


@pytest.mark.parametrize("phi", [ConvexGauge.power(1), ConvexGauge.power(3), ConvexGauge.exp_minus_one()])
def test_thm2_equality_on_cylinders(phi):
    C, f = construct_equality_thm2(cube(2))

    assert check_thm2(C, f, phi, samples=1000, seed=0).verdict == "equality"


def test_thm2_requires_symmetric_body():
    C = box([0.0, 0.0], [1.0, 1.0])

    with pytest.raises(PreconditionError, match="C = -C"):
        check_thm2(C, ConcaveFn.constant(C, 1.0), ConvexGauge.power(2), samples=1000, seed=0)


def test_check_cor_alpha(interval, square):
    f = ConcaveFn.affine(interval, [1.0], 1.0)

    assert check_cor_alpha(interval, f, 2, samples=1000, seed=0).ratio == pytest.approx(1)

    with pytest.raises(ValueError):
        check_cor_alpha(interval, f, 0.5, samples=1000, seed=0)

    report = check_cor_alpha(square, tent(square), 1, samples=50_000, seed=1)
    assert report.method["lhs"] == "monte_carlo"
    assert report.rhs == pytest.approx(2)
    assert abs(report.lhs - 1.5) <= 2 * report.tolerance
    assert report.passed


def test_check_thm3(interval, square):
    report = check_thm3(interval, ConcaveFn.affine(interval, [1.0], 1.0, allow_negative=True), 1000, 0)
    assert report.lhs == pytest.approx((np.e**2 - 1) / 2)
    assert report.verdict == "equality"

    report = check_thm3(square, ConcaveFn.affine(square, [0.5, 0.5], 0.0, allow_negative=True), 1000, 0)
    assert report.lhs == pytest.approx(np.e - 2 + np.exp(-1))
    assert report.rhs == pytest.approx(np.sinh(1))
    assert report.verdict == "pass"

    report = check_thm3(square, ConcaveFn.constant(square, -1.0), 1000, 0)
    assert report.verdict == "equality"


def test_thm3_equality_on_cylinders():
    C, u = construct_equality_thm3(cube(2), slope=0.7, intercept=-0.4)

    assert check_thm3(C, u, 1000, 0).verdict == "equality"


def test_check_classical_hh(square):
    report = check_classical_hh(square, tent(square), samples=50_000, seed=2)
    assert report.rhs == pytest.approx(2)
    assert report.passed

    rectangle = box([0.0, 0.0], [2.0, 1.0])
    report = check_classical_hh(rectangle, ConcaveFn.affine(rectangle, [1.0, 1.0], 0.0), 1000, 0)
    assert report.verdict == "equality"
    assert "affine function: equality expected" in report.notes


def test_weighted_centroid(interval, square):
    f = ConcaveFn.affine(interval, [1.0], 1.0)
    assert weighted_centroid(interval, f, 1, samples=1000, seed=0) == pytest.approx([1 / 3])

    assert np.allclose(weighted_centroid(square, ConcaveFn.constant(square, 1.0), 2, 1000, 0), 0, atol=1e-12)
    assert np.allclose(weighted_centroid(square, tent(square), 1, 50_000, 0), 0, atol=0.02)

    with pytest.raises(ValueError):
        weighted_centroid(interval, f, 0, samples=1000, seed=0)


def test_weighted_centroid_of_vanishing_function(square):
    zero = ConcaveFn.constant(square, 0.0)
    with pytest.raises(ValueError, match="vanishing"):
        weighted_centroid(square, zero, 1, samples=1000, seed=0)

    # Not affine, so the Monte Carlo path is taken
    zero = ConcaveFn(slopes=[[0.0, 0.0], [1.0, 0.0]], intercepts=[0.0, 5.0], domain=square)
    with pytest.raises(ValueError, match="vanishing"):
        weighted_centroid(square, zero, 2, samples=1000, seed=0)

    with pytest.raises(ValueError, match="vanishing"):
        check_hh_center_of_mass(square, zero, 1, samples=1000, seed=0)


def test_check_hh_center_of_mass(interval, square):
    f = ConcaveFn.affine(interval, [1.0], 1.0)
    report = check_hh_center_of_mass(interval, f, 1, samples=1000, seed=0)

    assert report.lhs == pytest.approx(1)
    assert report.rhs == pytest.approx(4 / 3)
    assert report.verdict == "pass"

    assert check_hh_center_of_mass(square, ConcaveFn.constant(square, 3.0), 2, 1000, 0).verdict == "equality"
    assert check_hh_center_of_mass(square, tent(square), 2, 50_000, 0).passed
