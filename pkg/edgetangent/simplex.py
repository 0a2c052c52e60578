"""
Balloon radii, edge lengths and the symmetric sums of a circumscriptible
simplex.

An n-simplex has a sphere tangent to all of its edges exactly when there are
positive balloon radii x_0..x_n with a_ij = x_i + x_j.  Given the edges the
radii are unique:

    x_i = (n * sum_{j != i} a_ij - sum_{j < k} a_jk) / (n (n - 1))

so deciding circumscriptibility is a recompute-and-compare check.
"""

import math
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

from . import base
from .base import InputError, NotCircumscriptible, NotRealizable, logger
from .numeric import ExactBackend, FloatBackend, SquareMatrix, from_rows


def _backend_of_values(values, backend):
    if backend is not None:
        return base.backend_for(backend)
    return FloatBackend if any(isinstance(v, float) for v in values) else ExactBackend


# ------------------------------- BalloonRadii ---------------------------------
@dataclass(frozen=True)
class BalloonRadii:
    """
    The balloon radii x_0..x_n of a circumscriptible n-simplex.

    @ivar x:
        Tuple of n + 1 positive scalars.
    @ivar backend:
        Backend class of every radius.
    """

    x: tuple
    backend: type = ExactBackend

    def __post_init__(self):
        backend = base.backend_for(self.backend)
        try:
            x = tuple(backend.coerce(v) for v in self.x)
        except base.NumericError as e:
            raise InputError(e.msg)
        if len(x) < 3:
            raise InputError(f"Need at least 3 radii (n >= 2), got {len(x)}")
        for i, value in enumerate(x):
            if not value > 0:
                raise InputError(f"Balloon radius {value} is not positive", i)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "backend", backend)

    @classmethod
    def from_values(cls, values, n=None, backend=None):
        """Build radii from numbers or "p/q" strings, checking n if given."""
        values = list(values)
        backend = _backend_of_values(values, backend)
        try:
            parsed = [backend.parse(v) for v in values]
        except base.NumericError as e:
            raise InputError(e.msg)
        if n is not None and len(parsed) != n + 1:
            raise InputError(f"n = {n} needs {n + 1} radii, got {len(parsed)}")
        return cls(tuple(parsed), backend)

    @property
    def n(self):
        return len(self.x) - 1

    def __len__(self):
        return len(self.x)

    def __iter__(self):
        return iter(self.x)

    def __getitem__(self, i):
        return self.x[i]

    def product(self):
        return math.prod(self.x, start=self.backend.one())

    def with_backend(self, name):
        target = base.backend_for(name)
        if target is self.backend:
            return self
        convert = float if target is FloatBackend else Fraction
        return BalloonRadii(tuple(convert(v) for v in self.x), target)

    def formatted(self):
        return [self.backend.format(v) for v in self.x]


# ------------------------------ EdgeLengthMatrix ------------------------------
@dataclass(frozen=True)
class EdgeLengthMatrix:
    """
    Symmetric matrix of edge lengths a_ij with zero diagonal.

    Dimension n >= 1 is admitted so facets of triangles (segments) can be
    measured; circumscriptibility itself needs n >= 2.
    """

    a: SquareMatrix

    def __post_init__(self):
        a = self.a
        if a.order < 2:
            raise InputError("An edge matrix needs at least two vertices")
        for i in range(a.order):
            if a.entry(i, i) != 0:
                raise InputError(f"Diagonal entry {a.entry(i, i)} is not zero", (i, i))
            for j in range(i + 1, a.order):
                if a.entry(i, j) != a.entry(j, i):
                    raise InputError(f"Edge matrix is not symmetric: {a.entry(i, j)} != {a.entry(j, i)}", (i, j))
                if not a.entry(i, j) > 0:
                    raise InputError(f"Edge length {a.entry(i, j)} is not positive", (i, j))

    @classmethod
    def from_rows(cls, rows, backend=None):
        rows = [list(row) for row in rows]
        backend = _backend_of_values([v for row in rows for v in row], backend)
        try:
            return cls(from_rows([[backend.parse(v) for v in row] for row in rows], backend))
        except base.NumericError as e:
            raise InputError(e.msg)

    @classmethod
    def from_pairs(cls, n, lengths, backend=None):
        """Build from a dict {(i, j): a_ij} covering every pair i < j."""
        backend = _backend_of_values(list(lengths.values()), backend)
        rows = [[backend.zero()] * (n + 1) for _ in range(n + 1)]
        for i, j in _pairs(n):
            value = lengths.get((i, j), lengths.get((j, i)))
            if value is None:
                raise InputError("Missing edge length", (i, j))
            rows[i][j] = rows[j][i] = value
        return cls.from_rows(rows, backend)

    @property
    def n(self):
        return self.a.order - 1

    @property
    def backend(self):
        return self.a.backend

    def __getitem__(self, key):
        return self.a[key]

    def pairs(self):
        return _pairs(self.n)

    def squared(self):
        return self.a.map(lambda v: v * v)

    def sum_of_squares(self):
        return sum((self.a.entry(i, j) ** 2 for i, j in self.pairs()), self.backend.zero())

    def face(self, drop):
        """Edge matrix of the facet opposite vertex drop."""
        return EdgeLengthMatrix(self.a.submatrix(drop))

    def with_backend(self, name):
        return EdgeLengthMatrix(self.a.with_backend(name))

    def formatted(self):
        return [[self.backend.format(v) for v in row] for row in self.a.rows()]


def _pairs(n):
    return [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]


# ------------------------------- SymmetricSums --------------------------------
@dataclass(frozen=True)
class SymmetricSums:
    """
    M = sum x_i, N = sum x_i^2, P = sum 1/x_i, Q = sum 1/x_i^2 together with

        X1 = M P - (n - 1)(n - 3)
        X2 = P^2 - (n - 1) Q        (the realizability margin)
        X3 = M^2 - (n - 1) N
    """

    n: int
    M: object
    N: object
    P: object
    Q: object
    X1: object
    X2: object
    X3: object

    @property
    def margin(self):
        return self.X2

    @property
    def discriminant(self):
        """X1^2 - X2 X3, the common numerator of the circumradius formulas."""
        return self.X1 * self.X1 - self.X2 * self.X3

    def as_dict(self, backend=ExactBackend):
        return {k: backend.format(getattr(self, k)) for k in ("M", "N", "P", "Q", "X1", "X2", "X3")}


# --------------------------------- Operations ---------------------------------
def edges_from_radii(radii):
    """a_ij = x_i + x_j off the diagonal, zero on it."""
    x = radii.x
    zero = radii.backend.zero()
    rows = [[zero if i == j else x[i] + x[j] for j in range(len(x))] for i in range(len(x))]
    return EdgeLengthMatrix(from_rows(rows, radii.backend))


def radii_from_edges(edges, tolerance=base.REL_TOL):
    """
    Recover the balloon radii of an edge matrix, or raise NotCircumscriptible.

    The reconstruction x_i + x_j is compared with every a_ij first (exactly
    for rationals, within tolerance for floats), so an inconsistent edge set
    is reported by its first mismatched edge; positivity is checked after.
    """
    n = edges.n
    if n < 2:
        raise InputError(f"Circumscriptibility needs n >= 2, got n = {n}")
    backend = edges.backend
    a = edges.a
    total = sum((a.entry(i, j) for i, j in edges.pairs()), backend.zero())
    denominator = backend.constant(n * (n - 1))
    x = []
    for i in range(n + 1):
        incident = sum((a.entry(i, j) for j in range(n + 1) if j != i), backend.zero())
        x.append((n * incident - total) / denominator)

    for i, j in edges.pairs():
        rebuilt = x[i] + x[j]
        if not backend.is_close(rebuilt, a.entry(i, j), tolerance):
            if base.DEBUG:
                logger.debug("edge (%d, %d): %s rebuilt as %s", i, j, a.entry(i, j), rebuilt)
            raise NotCircumscriptible(
                f"Edge ({i}, {j}) is {a.entry(i, j)} but the balloon radii give {rebuilt}",
                (i, j),
                expected=a.entry(i, j),
                actual=rebuilt,
            )
    for i, value in enumerate(x):
        if not value > 0:
            raise NotCircumscriptible(f"Balloon radius {value} is not positive", i, actual=value)
    return BalloonRadii(tuple(x), backend)


def symmetric_sums(radii):
    n = radii.n
    backend = radii.backend
    zero, one = backend.zero(), backend.one()
    M = sum(radii.x, zero)
    N = sum((v * v for v in radii.x), zero)
    P = sum((one / v for v in radii.x), zero)
    Q = sum((one / (v * v) for v in radii.x), zero)
    return SymmetricSums(
        n=n,
        M=M,
        N=N,
        P=P,
        Q=Q,
        X1=M * P - (n - 1) * (n - 3),
        X2=P * P - (n - 1) * Q,
        X3=M * M - (n - 1) * N,
    )


Realizability = namedtuple("Realizability", ["realizable", "margin"])


def realizability_margin(radii):
    return symmetric_sums(radii).X2


def is_realizable(radii):
    """
    True iff P^2 - (n - 1) Q > 0.

    The margin decides realizability exactly: for v summing to zero the
    Cayley-Menger quadratic form of squared edges (x_i + x_j)^2 is
    2 sum x_i^2 v_i^2 - (sum x_i v_i)^2, and its minimum over that subspace is
    positive precisely when P^2 / Q > n - 1.  A margin of exactly zero is a
    flat simplex and is reported as not realizable.
    """
    margin = realizability_margin(radii)
    return Realizability(margin > 0, margin)


def require_realizable(radii):
    result = is_realizable(radii)
    if not result.realizable:
        raise NotRealizable(f"P^2 - (n-1)Q = {result.margin} is not positive", margin=result.margin)
    return result.margin


def boundary_radius(others, n, margin=0.0):
    """
    The radius x_0 at which P^2 - (n - 1) Q equals margin, given x_1..x_n.

    With t = 1/x_0 the margin is the quadratic -(n-2) t^2 + 2 p t + c, where p
    and q are the reciprocal sums over the other radii and c = p^2 - (n-1) q.
    The larger root is returned; radii below it give non-realizable simplices.
    Raises ValueError for n = 2 (the margin never vanishes) and when the facet
    x_1..x_n is itself not realizable.
    """
    others = [float(v) for v in others]
    if len(others) != n:
        raise ValueError(f"Need {n} other radii, got {len(others)}")
    if n < 3:
        raise ValueError("The realizability margin has no finite boundary for n = 2")
    p = sum(1.0 / v for v in others)
    q = sum(1.0 / (v * v) for v in others)
    c = p * p - (n - 1) * q - float(margin)
    discriminant = p * p + (n - 2) * c
    if discriminant <= 0:
        raise ValueError("No radius reaches the requested margin for these radii")
    t = (p + math.sqrt(discriminant)) / (n - 2)
    return 1.0 / t
