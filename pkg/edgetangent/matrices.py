"""
Structured matrices of a circumscriptible simplex and their closed forms.

Vertex i maps to row i.  Bordered matrices put the border in row and column
0:

    A   (i, i) = -2 x_i^2        A   (i, j) = 2 x_i x_j
    D   (i, i) = 0               D   (i, j) = (x_i + x_j)^2
    A1, D1, Cayley-Menger = [[0, 1 ... 1], [1, inner], ...]
"""

import enum

from .numeric import SquareMatrix
from .simplex import symmetric_sums


class StructuredMatrixKind(enum.Enum):
    A = "A"
    A1 = "A1"
    D = "D"
    D1 = "D1"
    CAYLEY_MENGER = "CayleyMenger"

    @property
    def bordered(self):
        return self in (StructuredMatrixKind.A1, StructuredMatrixKind.D1, StructuredMatrixKind.CAYLEY_MENGER)

    def order(self, n):
        return n + 2 if self.bordered else n + 1


def _sign(n):
    return -1 if n % 2 else 1


def build_A(radii):
    x = radii.x
    size = len(x)
    entries = [-2 * x[i] * x[i] if i == j else 2 * x[i] * x[j] for i in range(size) for j in range(size)]
    return SquareMatrix(size, entries, radii.backend)


def build_bordered(m):
    backend = m.backend
    one, zero = backend.one(), backend.zero()
    rows = [[zero] + [one] * m.order]
    rows.extend([one] + row for row in m.rows())
    size = m.order + 1
    return SquareMatrix(size, [v for row in rows for v in row], backend)


def build_D(radii):
    x = radii.x
    size = len(x)
    zero = radii.backend.zero()
    entries = [zero if i == j else (x[i] + x[j]) ** 2 for i in range(size) for j in range(size)]
    return SquareMatrix(size, entries, radii.backend)


def build_A1(radii):
    return build_bordered(build_A(radii))


def build_D1(radii):
    return build_bordered(build_D(radii))


def squared_edge_matrix(edges):
    return edges.squared()


def build_cayley_menger(edges):
    return build_bordered(squared_edge_matrix(edges))


def build(kind, source):
    """
    Build a structured matrix by kind.  source is a BalloonRadii for A, A1, D
    and D1 and an EdgeLengthMatrix for the Cayley-Menger matrix.
    """
    kind = StructuredMatrixKind(kind)
    builders = {
        StructuredMatrixKind.A: build_A,
        StructuredMatrixKind.A1: build_A1,
        StructuredMatrixKind.D: build_D,
        StructuredMatrixKind.D1: build_D1,
        StructuredMatrixKind.CAYLEY_MENGER: build_cayley_menger,
    }
    return builders[kind](source)


def det_A_closed(radii):
    """|A| = (-1)^n (n - 1) 2^(2n+1) (prod x_i)^2."""
    n = radii.n
    product = radii.product()
    return _sign(n) * (n - 1) * 2 ** (2 * n + 1) * product * product


def inverse_A_closed(radii):
    """
    A^-1 has (2 - n) / ((4n - 4) x_i^2) on the diagonal and
    1 / ((4n - 4) x_i x_j) elsewhere.
    """
    n = radii.n
    backend = radii.backend
    x = radii.x
    size = n + 1
    diagonal = backend.constant(2 - n, 4 * n - 4)
    offDiagonal = backend.constant(1, 4 * n - 4)
    entries = [
        diagonal / (x[i] * x[i]) if i == j else offDiagonal / (x[i] * x[j]) for i in range(size) for j in range(size)
    ]
    return SquareMatrix(size, entries, backend)


def det_D_closed(radii, sums=None):
    """
    |D| = (-1)^n 2^(2n-3) / (n - 1) (prod x_i)^2 (X1^2 - X2 X3).

    For n = 2 the power 2^(2n-3) is 2 and (n - 1)(n - 3) = -1 enters X1.
    """
    n = radii.n
    if sums is None:
        sums = symmetric_sums(radii)
    product = radii.product()
    factor = radii.backend.constant(_sign(n) * 2 ** (2 * n - 3), n - 1)
    return factor * product * product * sums.discriminant


def sign_factor(n):
    """(-1)^n as an exact integer."""
    return _sign(n)

