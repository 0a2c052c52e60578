import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgetangent import base, metrics
from edgetangent.metrics import Route, SimplexMetrics
from edgetangent.numeric import FloatBackend
from edgetangent.simplex import BalloonRadii, EdgeLengthMatrix, boundary_radius, edges_from_radii, symmetric_sums
from edgetangent.verify import random_radii


@st.composite
def realizable_radii(draw, min_n=2, max_n=8):
    """
    Exact radii on a 1/1000 grid, all within a factor of two of each other.
    """
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    ks = draw(st.lists(st.integers(500, 1000), min_size=n + 1, max_size=n + 1))
    return BalloonRadii(tuple(Fraction(k, 1000) for k in ks))


def radii(*values):
    return BalloonRadii.from_values(values)


def test_right_triangle():
    """
    Radii 1, 2, 3 give the 3-4-5 triangle.
    """
    r = radii(1, 2, 3)
    sums = symmetric_sums(r)
    assert metrics.edge_inradius_sq_closed(sums) == 1
    assert metrics.edge_inradius_sq_det(r) == 1
    assert metrics.circumradius_sq_closed(sums) == Fraction(25, 4)
    assert metrics.circumradius_sq_det(r) == Fraction(25, 4)
    assert metrics.circumradius_sq_vol(edges_from_radii(r)) == Fraction(25, 4)
    assert metrics.ratio_R_rho_sq(sums) == Fraction(25, 4)
    assert metrics.volume_sq_from_radii(r, Fraction(1)) == 36
    assert metrics.volume_sq_cm(edges_from_radii(r)) == 36
    assert metrics.og_distance_sq(Fraction(25, 4), edges_from_radii(r)) == Fraction(25, 36)
    assert metrics.inradius(edges_from_radii(r)) == pytest.approx(1.0, rel=1e-12)


def test_equilateral_triangle():
    r = radii(1, 1, 1)
    m = metrics.compute_metrics(r)
    assert m.rho_sq == Fraction(1, 3)
    assert m.R_sq == Fraction(4, 3)
    assert m.V_sq == 3
    assert m.og_sq == 0
    assert m.inradius == pytest.approx(1 / math.sqrt(3), rel=1e-12)


def test_regular_tetrahedron():
    m = metrics.compute_metrics(radii(1, 1, 1, 1))
    assert m.R_sq == Fraction(3, 2)
    assert m.rho_sq == Fraction(1, 2)
    assert m.V_sq == Fraction(8, 9)
    assert m.ratio_R_rho_sq == 3
    assert m.og_sq == 0


def test_regular_ratio():
    """
    Every regular simplex has (R / rho)^2 = 2n / (n - 1).
    """
    for n in range(2, 9):
        m = metrics.compute_metrics(BalloonRadii.from_values([1] * (n + 1)), with_inradius=False)
        assert m.ratio_R_rho_sq == Fraction(2 * n, n - 1)
        assert m.inradius is None


def test_triangle_formulas():
    assert metrics.circumradius_sq_triangle(radii(1, 2, 3)) == Fraction(25, 4)
    edges = EdgeLengthMatrix.from_rows([[0, 3, 4], [3, 0, 5], [4, 5, 0]])
    assert metrics.circumradius_sq_heron(edges) == Fraction(25, 4)
    with pytest.raises(base.InputError):
        metrics.circumradius_sq_triangle(radii(1, 1, 1, 1))
    with pytest.raises(base.DegenerateSimplex):
        metrics.circumradius_sq_heron(EdgeLengthMatrix.from_rows([[0, 1, 2], [1, 0, 3], [2, 3, 0]]))


@given(st.lists(st.integers(1, 1000), min_size=3, max_size=3))
def test_triangle_formula_matches_closed_form(values):
    r = BalloonRadii.from_values(values)
    assert metrics.circumradius_sq_triangle(r) == metrics.circumradius_sq_closed(symmetric_sums(r))
    assert metrics.circumradius_sq_heron(edges_from_radii(r)) == metrics.circumradius_sq_det(r)


def test_corner_tetrahedron():
    """
    The corner of the unit cube: R^2 = 3/4 and r = 1 / (3 + sqrt(3)).
    """
    s = math.sqrt(2.0)
    edges = EdgeLengthMatrix.from_rows([[0, 1, 1, 1], [1, 0, s, s], [1, s, 0, s], [1, s, s, 0]])
    assert FloatBackend.is_close(metrics.circumradius_sq_vol(edges), 0.75)
    assert FloatBackend.is_close(metrics.volume_sq_cm(edges), 1 / 36)
    assert metrics.inradius(edges) == pytest.approx(1 / (3 + math.sqrt(3)), rel=1e-12)


def test_flat_simplex():
    edges = EdgeLengthMatrix.from_rows([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert metrics.volume_sq_cm(edges) == 0
    with pytest.raises(base.DegenerateSimplex):
        metrics.circumradius_sq_vol(edges)
    with pytest.raises(base.DegenerateSimplex):
        metrics.inradius(edges)


def test_not_realizable():
    r = radii(Fraction(1, 10), 1, 1, 1)
    with pytest.raises(base.NotRealizable):
        metrics.edge_inradius_sq_closed(symmetric_sums(r))
    with pytest.raises(base.NotRealizable) as excinfo:
        metrics.compute_metrics(r)
    assert excinfo.value.margin == -37
    assert metrics.volume_sq_cm(edges_from_radii(r)) < 0


def test_negative_og():
    edges = edges_from_radii(radii(1, 2, 3))
    with pytest.raises(base.NegativeOG):
        metrics.og_distance_sq(Fraction(1), edges)
    # float rounding just below zero is clamped
    flat = edges.with_backend("float")
    assert metrics.og_distance_sq(50 / 9 - 1e-15, flat) == 0.0
    with pytest.raises(base.NegativeOG):
        metrics.og_distance_sq(1.0, flat)


def test_compute_metrics_routes():
    m = metrics.compute_metrics(radii(1, 2, 3, 4))
    assert set(m.routes) == {"rho_sq", "R_sq", "V_sq"}
    assert set(m.routes["R_sq"]) == {"closed", "determinant", "volume"}
    assert m.route["R_sq"] is Route.BOTH_AGREE
    assert m.route["og_sq"] is Route.CLOSED
    assert m.disagreements == ()


def test_metrics_document():
    document = metrics.compute_metrics(radii(1, 2, 3)).as_dict()
    assert set(document) == set(SimplexMetrics.KEYS)
    assert document["R_sq"] == "25/4"
    assert document["rho_sq"] == "1"
    assert document["V_sq"] == "36"
    assert document["og_sq"] == "25/36"
    assert document["backend"] == "exact"
    assert document["route"]["V_sq"] == "both-agree"
    assert document["routes"]["R_sq"]["volume"] == "25/4"


def test_float_metrics():
    m = metrics.compute_metrics(BalloonRadii.from_values([1.0, 2.0, 3.0]))
    assert m.backend is FloatBackend
    assert m.R_sq == pytest.approx(6.25, rel=1e-12)
    assert m.og_sq == pytest.approx(25 / 36, rel=1e-9)
    assert m.disagreements == ()
    assert m.as_dict()["R_sq"] == pytest.approx(6.25, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(realizable_radii())
def test_routes_agree_exactly(r):
    m = metrics.compute_metrics(r, with_inradius=False)
    assert m.disagreements == ()
    for values in m.routes.values():
        assert len(set(values.values())) == 1


@settings(max_examples=50, deadline=None)
@given(realizable_radii())
def test_volume_identity(r):
    """
    (n!)^2 V^2 rho^2 = 2^n (n - 1) (prod x_i)^2.
    """
    m = metrics.compute_metrics(r, with_inradius=False)
    n = r.n
    assert math.factorial(n) ** 2 * m.V_sq * m.rho_sq == 2**n * (n - 1) * r.product() ** 2


@settings(max_examples=30, deadline=None)
@given(realizable_radii(max_n=5))
def test_inradius_below_edge_inradius(r):
    """
    The insphere lies inside the edge-tangent sphere.
    """
    m = metrics.compute_metrics(r)
    assert 0 < m.inradius <= math.sqrt(m.rho_sq) * (1 + 1e-12)


def test_small_float_simplices():
    """
    Float degeneracy tests do not depend on the size of the simplex.
    """
    m = metrics.compute_metrics(BalloonRadii((0.1,) * 9, "float"))
    assert m.R_sq == pytest.approx(4 / 225, rel=1e-9)
    assert m.disagreements == ()

    scale = 1e-4
    edges = EdgeLengthMatrix.from_rows([[0.0, 3 * scale, 4 * scale], [3 * scale, 0.0, 5 * scale], [4 * scale, 5 * scale, 0.0]])
    assert metrics.inradius(edges) == pytest.approx(scale, rel=1e-9)
    assert metrics.circumradius_sq_vol(edges) == pytest.approx(6.25 * scale**2, rel=1e-9)


@pytest.mark.parametrize("scale", ["1/1000", "1", "1000"])
def test_float_metrics_scale(scale):
    """
    Scaling the radii by s scales R^2 by s^2 and V^2 by s^(2n) in both
    backends.
    """
    for n in (3, 8):
        values = [Fraction(k, 7) * Fraction(scale) for k in range(3, n + 4)]
        exact = metrics.compute_metrics(BalloonRadii(tuple(values)))
        rough = metrics.compute_metrics(BalloonRadii(tuple(float(v) for v in values), "float"))
        assert rough.disagreements == ()
        assert FloatBackend.is_close(rough.R_sq, float(exact.R_sq), 1e-9)
        assert FloatBackend.is_close(rough.V_sq, float(exact.V_sq), 1e-9)
        assert rough.inradius == pytest.approx(exact.inradius, rel=1e-9)


def test_flat_float_simplex():
    edges = EdgeLengthMatrix.from_rows([[0.0, 1e-5, 2e-5], [1e-5, 0.0, 1e-5], [2e-5, 1e-5, 0.0]])
    assert metrics.is_flat(metrics.volume_sq_cm(edges), edges)
    with pytest.raises(base.DegenerateSimplex):
        metrics.inradius(edges)


def test_routes_every_dimension():
    """
    Seeded instances for n = 2..8: all routes agree exactly and the volume
    identity holds.
    """
    for n in range(2, 9):
        for seed in range(3):
            r = random_radii(n, seed, "log-uniform")
            m = metrics.compute_metrics(r, with_inradius=False)
            assert m.disagreements == ()
            for values in m.routes.values():
                assert len(set(values.values())) == 1
            assert math.factorial(n) ** 2 * m.V_sq * m.rho_sq == 2**n * (n - 1) * r.product() ** 2


def test_volume_vanishes_at_boundary():
    """
    Approaching the boundary radius of (x0, 1, 1, 1) from above, V^2 stays
    positive and shrinks to zero.
    """
    x0 = Fraction(boundary_radius([1, 1, 1], 3))
    volumes = []
    for k in (3, 6, 9, 12):
        edges = edges_from_radii(radii(x0 + Fraction(1, 10**k), 1, 1, 1))
        volumes.append(metrics.volume_sq_cm(edges))
    assert all(v > 0 for v in volumes)
    assert all(a > 100 * b for a, b in zip(volumes, volumes[1:]))
    assert volumes[-1] < Fraction(1, 10**10)

    edges = edges_from_radii(BalloonRadii((float(x0), 1.0, 1.0, 1.0), "float"))
    assert abs(metrics.volume_sq_cm(edges)) < 1e-12
