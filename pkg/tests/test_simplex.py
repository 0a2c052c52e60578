from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgetangent import base
from edgetangent.matrices import build_cayley_menger
from edgetangent.numeric import FloatBackend, determinant
from edgetangent.simplex import (
    BalloonRadii,
    EdgeLengthMatrix,
    boundary_radius,
    edges_from_radii,
    is_realizable,
    radii_from_edges,
    realizability_margin,
    require_realizable,
    symmetric_sums,
)

# radii on a 1/1000 grid within a factor of two of each other are always
# realizable up to n = 16
realizable_radii = st.integers(2, 8).flatmap(
    lambda n: st.lists(st.integers(500, 1000), min_size=n + 1, max_size=n + 1).map(
        lambda ks: BalloonRadii(tuple(Fraction(k, 1000) for k in ks))
    )
)


def edges_345():
    return EdgeLengthMatrix.from_rows([[0, 3, 4], [3, 0, 5], [4, 5, 0]])


def test_balloon_radii():
    r = BalloonRadii.from_values(["1", "2", "3/2"])
    assert r.n == 2
    assert len(r) == 3
    assert r[2] == Fraction(3, 2)
    assert r.product() == 3
    assert r.formatted() == ["1", "2", "3/2"]
    assert r.with_backend("float").x == (1.0, 2.0, 1.5)
    assert BalloonRadii.from_values([1.0, 2.0, 3.0]).backend is FloatBackend


def test_balloon_radii_errors():
    with pytest.raises(base.InputError):
        BalloonRadii((Fraction(1), Fraction(2)))
    with pytest.raises(base.InputError) as excinfo:
        BalloonRadii.from_values([1, -2, 3])
    assert excinfo.value.index == 1
    with pytest.raises(base.InputError):
        BalloonRadii.from_values([1, 2, 3], n=3)
    with pytest.raises(base.InputError):
        BalloonRadii.from_values(["1", "x", "3"])


def test_edge_matrix():
    a = edges_345()
    assert a.n == 2
    assert a[0, 1] == 3
    assert a.pairs() == [(0, 1), (0, 2), (1, 2)]
    assert a.sum_of_squares() == 50
    assert a.squared()[1, 2] == 25
    assert a.face(2).n == 1
    assert a.face(2)[0, 1] == 3
    assert EdgeLengthMatrix.from_pairs(2, {(0, 1): 3, (0, 2): 4, (2, 1): 5}) == a


def test_edge_matrix_errors():
    with pytest.raises(base.InputError) as excinfo:
        EdgeLengthMatrix.from_rows([[0, 3, 4], [3, 0, 5], [4, 6, 0]])
    assert excinfo.value.index == (1, 2)
    with pytest.raises(base.InputError):
        EdgeLengthMatrix.from_rows([[1, 3], [3, 0]])
    with pytest.raises(base.InputError):
        EdgeLengthMatrix.from_rows([[0, -3], [-3, 0]])
    with pytest.raises(base.InputError):
        EdgeLengthMatrix.from_pairs(2, {(0, 1): 3, (0, 2): 4})


def test_edges_from_radii():
    a = edges_from_radii(BalloonRadii.from_values([1, 2, 3]))
    assert a == edges_345()


def test_radii_from_edges():
    """
    The 3-4-5 triangle has balloon radii 1, 2, 3.
    """
    r = radii_from_edges(edges_345())
    assert r.x == (1, 2, 3)


def test_not_circumscriptible():
    """
    A tetrahedron with one edge stretched has no edge-tangent sphere; the
    first mismatched edge is reported.
    """
    rows = [[0, 10, 2, 2], [10, 0, 2, 2], [2, 2, 0, 2], [2, 2, 2, 0]]
    with pytest.raises(base.NotCircumscriptible) as excinfo:
        radii_from_edges(EdgeLengthMatrix.from_rows(rows))
    error = excinfo.value
    assert error.index == (0, 1)
    assert error.expected == 10
    assert error.actual == Fraction(22, 3)
    assert error.details()["index"] == [0, 1]
    assert str(error).startswith("At (0, 1):")


def test_negative_radius():
    # 1, 1, 3 breaks the triangle inequality
    with pytest.raises(base.NotCircumscriptible) as excinfo:
        radii_from_edges(EdgeLengthMatrix.from_rows([[0, 1, 1], [1, 0, 3], [1, 3, 0]]))
    assert excinfo.value.index == 0


def test_radii_from_segment():
    with pytest.raises(base.InputError):
        radii_from_edges(EdgeLengthMatrix.from_rows([[0, 1], [1, 0]]))


def test_float_round_trip():
    r = BalloonRadii.from_values([0.1, 0.2, 0.3, 0.4])
    recovered = radii_from_edges(edges_from_radii(r))
    assert all(FloatBackend.is_close(a, b) for a, b in zip(r, recovered))


@settings(deadline=None)
@given(realizable_radii)
def test_exact_round_trip(r):
    assert radii_from_edges(edges_from_radii(r)) == r


def test_symmetric_sums():
    s = symmetric_sums(BalloonRadii.from_values([1, 2, 3]))
    assert (s.M, s.N, s.P, s.Q) == (6, 14, Fraction(11, 6), Fraction(49, 36))
    assert (s.X1, s.X2, s.X3) == (12, 2, 22)
    assert s.margin == 2
    assert s.discriminant == 100
    assert s.as_dict()["P"] == "11/6"


def test_realizability():
    assert is_realizable(BalloonRadii.from_values([1, 2, 3])) == (True, 2)
    result = is_realizable(BalloonRadii.from_values(["1/10", 1, 1, 1]))
    assert not result.realizable
    assert result.margin == -37
    with pytest.raises(base.NotRealizable) as excinfo:
        require_realizable(BalloonRadii.from_values(["1/10", 1, 1, 1]))
    assert excinfo.value.margin == -37
    assert excinfo.value.details()["margin"] == "-37"


@given(st.lists(st.integers(1, 10**6), min_size=3, max_size=3))
def test_triangles_always_realizable(values):
    assert realizability_margin(BalloonRadii.from_values(values)) > 0


@settings(deadline=None)
@given(realizable_radii)
def test_grid_radii_realizable(r):
    assert is_realizable(r).realizable


def test_boundary_radius():
    """
    The boundary radius puts the margin at zero; larger radii are
    realizable, smaller ones are not.
    """
    x0 = boundary_radius([1, 1, 1], 3)
    assert abs(x0 - 1 / (3 + 12**0.5)) < 1e-15
    assert abs(x0 - (2 * 3**0.5 - 3) / 3) < 1e-15
    margin = realizability_margin(BalloonRadii((x0, 1.0, 1.0, 1.0), "float"))
    assert abs(margin) < 1e-12
    assert is_realizable(BalloonRadii.from_values([Fraction(x0 * 1.01), 1, 1, 1])).realizable
    assert not is_realizable(BalloonRadii.from_values([Fraction(x0 * 0.99), 1, 1, 1])).realizable


def test_boundary_radius_with_margin():
    x0 = boundary_radius([1, 1, 1], 3, 0.5)
    margin = realizability_margin(BalloonRadii((x0, 1.0, 1.0, 1.0), "float"))
    assert FloatBackend.is_close(margin, 0.5, 1e-9)


def test_boundary_radius_errors():
    with pytest.raises(ValueError):
        boundary_radius([1, 1], 2)
    with pytest.raises(ValueError):
        boundary_radius([1, 1], 3)


def test_realizability_matches_cayley_menger_sign():
    """
    For any positive radii, P^2 - (n-1)Q > 0 exactly when
    (-1)^(n+1) |CM| > 0.
    """
    rng = np.random.default_rng(20)
    for n in range(3, 9):
        seen = set()
        for draw in range(150):
            # alternate narrow draws (always realizable) with wide ones
            low, high = (2.7, 3.0) if draw % 2 else (2.0, 4.0)
            ks = np.rint(10.0 ** rng.uniform(low, high, n + 1)).astype(int)
            r = BalloonRadii(tuple(Fraction(int(k), 1000) for k in ks))
            cm = determinant(build_cayley_menger(edges_from_radii(r)))
            realizable = is_realizable(r).realizable
            assert realizable == ((-1) ** (n + 1) * cm > 0)
            seen.add(realizable)
        assert seen == {True, False}, n
