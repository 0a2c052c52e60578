"""Scalar backends and dense square-matrix kernels."""

import math
from fractions import Fraction
from numbers import Integral

import numpy as np

from . import backend, base
from .base import ABS_TOL, REL_TOL, NumericError, register_backend


# ------------------------------ Elimination kernels ---------------------------
def bareiss_determinant(rows, stats=None):
    """
    Fraction-free (Bareiss) determinant of a square integer matrix.

    rows is a list of lists of ints and is modified in place.  Every division
    performed is exact, so intermediate entries stay minors of the input and
    their size grows only polynomially.  If stats is a dict, the largest bit
    length of any intermediate entry is stored under "max_bits".
    """
    order = len(rows)
    if order == 0:
        return 1
    sign = 1
    previous = 1
    maxBits = 0
    for k in range(order - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, order):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        pivotRow = rows[k]
        for i in range(k + 1, order):
            row = rows[i]
            lead = row[k]
            for j in range(k + 1, order):
                row[j] = (row[j] * pivot - lead * pivotRow[j]) // previous
            if stats is not None:
                maxBits = max(maxBits, max(abs(v).bit_length() for v in row[k + 1 :]))
        previous = pivot
    if stats is not None:
        stats["max_bits"] = max(stats.get("max_bits", 0), maxBits, abs(rows[-1][-1]).bit_length())
    return sign * rows[-1][-1]


# --------------------------------- Backends -----------------------------------
class ExactBackend(backend.Backend):
    """
    Exact rationals (fractions.Fraction, always in lowest terms with a
    positive denominator).
    """

    name = "exact"
    description = "Arbitrary precision rationals"
    exact = True

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            raise NumericError(f"{value!r} is not a number")
        if isinstance(value, Integral):
            return Fraction(int(value))
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise NumericError(f"Cannot read {value!r} as a rational")
        if isinstance(value, float):
            raise NumericError(f"Mixed backends: float {value!r} given to the exact backend")
        raise NumericError(f"{value!r} is not a number")

    @classmethod
    def parse(cls, text):
        # JSON floats are read through their shortest decimal spelling
        if isinstance(text, float):
            if not math.isfinite(text):
                raise NumericError(f"{text!r} is not a finite number")
            return Fraction(repr(text))
        return cls.coerce(text)

    @classmethod
    def constant(cls, numerator, denominator=1):
        return Fraction(numerator, denominator)

    @classmethod
    def determinant(cls, order, entries, stats=None):
        rows = []
        scale = 1
        for i in range(order):
            row = entries[i * order : (i + 1) * order]
            lcm = math.lcm(*(v.denominator for v in row))
            rows.append([v.numerator * (lcm // v.denominator) for v in row])
            scale *= lcm
        return Fraction(bareiss_determinant(rows, stats), scale)

    @classmethod
    def format(cls, value):
        return str(value)


class FloatBackend(backend.Backend):
    """IEEE double precision floats; NaN and infinities are rejected."""

    name = "float"
    description = "Binary64 floating point"
    exact = False

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Fraction):
            raise NumericError(f"Mixed backends: rational {value} given to the float backend")
        if isinstance(value, bool):
            raise NumericError(f"{value!r} is not a number")
        if isinstance(value, (float, Integral, np.floating)):
            value = float(value)
            if not math.isfinite(value):
                raise NumericError(f"{value!r} is not a finite number")
            return value
        if isinstance(value, str):
            try:
                return cls.coerce(float(Fraction(value.strip())))
            except (ValueError, ZeroDivisionError):
                raise NumericError(f"Cannot read {value!r} as a number")
        raise NumericError(f"{value!r} is not a number")

    @classmethod
    def constant(cls, numerator, denominator=1):
        return numerator / denominator

    @classmethod
    def is_close(cls, a, b, tolerance=REL_TOL, scale=None):
        magnitude = max(abs(a), abs(b), abs(scale or 0.0))
        return abs(a - b) <= max(tolerance * magnitude, ABS_TOL)

    @classmethod
    def sqrt(cls, value):
        if value < 0:
            raise NumericError(f"Square root of negative value {value!r}")
        return math.sqrt(value)

    @classmethod
    def determinant(cls, order, entries, stats=None):
        # LAPACK LU with partial pivoting
        value = float(np.linalg.det(np.array(entries, dtype=float).reshape(order, order)))
        if not math.isfinite(value):
            raise NumericError("Determinant overflowed")
        if stats is not None:
            stats["max_bits"] = max(stats.get("max_bits", 0), 53)
        return value


register_backend(ExactBackend)
register_backend(FloatBackend)


def backend_of(value):
    """Return the backend owning a scalar (ints count as exact)."""
    if isinstance(value, float):
        return FloatBackend
    return ExactBackend


# ------------------------------- SquareMatrix ---------------------------------
class SquareMatrix:
    """
    Immutable dense square matrix over one backend.

    @ivar order:
        Number of rows (and columns).
    @ivar entries:
        Row-major tuple of order**2 scalars.
    @ivar backend:
        The Backend class every entry belongs to.
    """

    __slots__ = ("order", "entries", "backend")

    def __init__(self, order, entries, backend=None):
        entries = list(entries)
        if not isinstance(order, Integral) or order < 1:
            raise NumericError(f"Matrix order must be a positive integer, got {order!r}")
        if len(entries) != order * order:
            raise NumericError(f"A matrix of order {order} needs {order * order} entries, got {len(entries)}")
        kinds = {type(v) for v in entries}
        if Fraction in kinds and (float in kinds or any(isinstance(v, np.floating) for v in entries)):
            raise NumericError("Mixed-backend matrix construction")
        if backend is None:
            backend = FloatBackend if any(isinstance(v, float) for v in entries) else ExactBackend
        else:
            backend = base.backend_for(backend)
        self.order = int(order)
        self.entries = tuple(backend.coerce(v) for v in entries)
        self.backend = backend

    def entry(self, i, j):
        return self.entries[i * self.order + j]

    def __getitem__(self, key):
        i, j = key
        return self.entry(i, j)

    def rows(self):
        n = self.order
        return [list(self.entries[i * n : (i + 1) * n]) for i in range(n)]

    def transpose(self):
        n = self.order
        return SquareMatrix(n, [self.entry(j, i) for i in range(n) for j in range(n)], self.backend)

    def submatrix(self, drop):
        """The matrix with row and column drop removed."""
        keep = [i for i in range(self.order) if i != drop]
        return SquareMatrix(len(keep), [self.entry(i, j) for i in keep for j in keep], self.backend)

    def map(self, function):
        return SquareMatrix(self.order, [function(v) for v in self.entries], self.backend)

    def scaled(self, factor):
        factor = self.backend.coerce(factor)
        return self.map(lambda v: v * factor)

    def with_backend(self, name):
        target = base.backend_for(name)
        if target is self.backend:
            return self
        convert = float if target is FloatBackend else Fraction
        return SquareMatrix(self.order, [convert(v) for v in self.entries], target)

    def is_symmetric(self):
        n = self.order
        return all(self.entry(i, j) == self.entry(j, i) for i in range(n) for j in range(i + 1, n))

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.backend is other.backend and self.order == other.order and self.entries == other.entries

    def __hash__(self):
        return hash((self.backend.name, self.order, self.entries))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.rows())
        return f"<SquareMatrix {self.backend.name} [{body}]>"


def from_rows(rows, backend=None):
    rows = [list(row) for row in rows]
    order = len(rows)
    if any(len(row) != order for row in rows):
        raise NumericError("Rows do not form a square matrix")
    return SquareMatrix(order, [v for row in rows for v in row], backend)


def identity(order, backend="exact"):
    backend = base.backend_for(backend)
    one, zero = backend.one(), backend.zero()
    return SquareMatrix(order, [one if i == j else zero for i in range(order) for j in range(order)], backend)


# --------------------------------- Operations ---------------------------------
def determinant(m, stats=None):
    """
    Determinant of m.

    The exact backend clears denominators row by row and runs fraction-free
    elimination on integers; the float backend uses partially pivoted LU.
    """
    return m.backend.determinant(m.order, m.entries, stats)


def cofactor_determinant(m):
    """Laplace expansion along the first row.  Factorial cost; an oracle for small orders."""
    backend = m.backend

    def expand(rows):
        if len(rows) == 1:
            return rows[0][0]
        total = backend.zero()
        for j, lead in enumerate(rows[0]):
            if lead == 0:
                continue
            minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
            term = lead * expand(minor)
            total = total - term if j % 2 else total + term
        return total

    return expand(m.rows())


def bordered_is_singular(inner, value=None):
    """
    True if inner, bordered by a row and column of ones (zero corner), is
    singular.

    value may carry the bordered determinant, or any nonzero multiple of it,
    when it is already known.  In floating point the border is first scaled
    to the largest inner entry, which multiplies the determinant by a
    nonzero constant and makes the test independent of the size of the
    entries; the matrix is singular when numpy finds it rank deficient.
    """
    backend = inner.backend
    if value is not None and value == 0:
        return True
    if backend.exact:
        if value is not None:
            return False
        one = backend.one()
        rows = [[backend.zero()] + [one] * inner.order] + [[one] + row for row in inner.rows()]
        return determinant(from_rows(rows, backend)) == 0
    s = max(abs(v) for v in inner.entries) or 1.0
    array = np.full((inner.order + 1, inner.order + 1), s)
    array[0, 0] = 0.0
    array[1:, 1:] = np.array(inner.entries, dtype=float).reshape(inner.order, inner.order)
    return np.linalg.matrix_rank(array) < inner.order + 1


def mat_mul(a, b):
    if a.order != b.order:
        raise NumericError(f"Order mismatch: {a.order} and {b.order}")
    if a.backend is not b.backend:
        raise NumericError(f"Backend mismatch: {a.backend.name} and {b.backend.name}")
    n = a.order
    if a.backend is FloatBackend:
        product = np.array(a.entries).reshape(n, n) @ np.array(b.entries).reshape(n, n)
        return SquareMatrix(n, product.ravel().tolist(), FloatBackend)
    left, right = a.rows(), b.transpose().rows()
    zero = a.backend.zero()
    return SquareMatrix(n, [sum((x * y for x, y in zip(row, col)), zero) for row in left for col in right], a.backend)


def scalar_sqrt(value):
    """Nonnegative square root; float backend only."""
    return backend_of(value).sqrt(value)


def relative_deviation(a, b, scale=None):
    """
    |a - b| relative to the larger magnitude (or scale), with an absolute
    floor of ABS_TOL on the denominator.
    """
    difference = abs(float(a - b)) if type(a) is type(b) else abs(float(a) - float(b))
    magnitude = max(abs(float(a)), abs(float(b)), abs(float(scale or 0)), ABS_TOL)
    return difference / magnitude


def is_close(a, b, tolerance=REL_TOL, scale=None):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return FloatBackend.is_close(float(a), float(b), tolerance, None if scale is None else float(scale))


def bit_length(value):
    if isinstance(value, Fraction):
        return max(abs(value.numerator).bit_length(), value.denominator.bit_length())
    if isinstance(value, Integral):
        return abs(int(value)).bit_length()
    return 53


def parse_scalar(value, backend="exact"):
    return base.backend_for(backend).parse(value)


def format_scalar(value):
    if isinstance(value, Fraction):
        return str(value)
    return value
