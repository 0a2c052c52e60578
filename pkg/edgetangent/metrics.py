"""
Metric invariants of a circumscriptible simplex, each by closed formula and
by an independent determinant route.

Every quantity except the inradius is kept squared so the exact backend
never needs a square root.
"""

import enum
import math
from dataclasses import dataclass, field

from . import base
from .base import DegenerateBorder, DegenerateSimplex, NegativeOG, NotRealizable, logger
from .matrices import build_A, build_bordered, build_cayley_menger, build_D, sign_factor, squared_edge_matrix
from .numeric import FloatBackend, bordered_is_singular, determinant
from .simplex import edges_from_radii, require_realizable, symmetric_sums


class Route(enum.Enum):
    CLOSED = "closed"
    DETERMINANT = "determinant"
    BOTH_AGREE = "both-agree"


# ------------------------------- Edge-inradius --------------------------------
def edge_inradius_sq_closed(sums, n=None):
    """rho^2 = 2 (n - 1) / (P^2 - (n - 1) Q)."""
    n = sums.n if n is None else n
    if not sums.X2 > 0:
        raise NotRealizable(f"P^2 - (n-1)Q = {sums.X2} is not positive", margin=sums.X2)
    return 2 * (n - 1) / sums.X2


def edge_inradius_sq_det(radii):
    """rho^2 = -|A| / (2 |A1|)."""
    A = build_A(radii)
    detA = determinant(A)
    detA1 = determinant(build_bordered(A))
    if bordered_is_singular(A, detA1):
        raise DegenerateBorder("|A1| vanishes")
    return -detA / (2 * detA1)


# -------------------------------- Circumradius --------------------------------
def circumradius_sq_closed(sums, n=None):
    """R^2 = (X1^2 - X2 X3) / (8 (n - 1) X2)."""
    n = sums.n if n is None else n
    if not sums.X2 > 0:
        raise NotRealizable(f"P^2 - (n-1)Q = {sums.X2} is not positive", margin=sums.X2)
    return sums.discriminant / (8 * (n - 1) * sums.X2)


def circumradius_sq_det(radii):
    """R^2 = -|D| / (2 |D1|)."""
    D = build_D(radii)
    detD = determinant(D)
    detD1 = determinant(build_bordered(D))
    if bordered_is_singular(D, detD1):
        raise DegenerateBorder("|D1| vanishes")
    return -detD / (2 * detD1)


def ratio_R_rho_sq(sums, n=None):
    """(R / rho)^2 = (X1^2 - X2 X3) / (16 (n - 1)^2)."""
    n = sums.n if n is None else n
    return sums.discriminant / (16 * (n - 1) ** 2)


def circumradius_sq_vol(edges):
    """
    R^2 = (-1)^n |D| / (2^(n+1) (n!)^2 V^2), |D| the determinant of the
    squared edge matrix.  Works for any realizable edge set.
    """
    n = edges.n
    volumeSq = volume_sq_cm(edges)
    if is_flat(volumeSq, edges):
        raise DegenerateSimplex(f"Volume squared is {volumeSq}")
    detD = determinant(squared_edge_matrix(edges))
    return sign_factor(n) * detD / (2 ** (n + 1) * math.factorial(n) ** 2 * volumeSq)


def circumradius_sq_triangle(radii):
    """
    Triangle circumradius from balloon radii, squared:
    ((x0 + x1)(x1 + x2)(x2 + x0))^2 / (16 x0 x1 x2 (x0 + x1 + x2)).
    """
    if radii.n != 2:
        raise base.InputError(f"Triangle formula needs n = 2, got n = {radii.n}")
    x0, x1, x2 = radii.x
    top = (x0 + x1) * (x1 + x2) * (x2 + x0)
    return top * top / (16 * x0 * x1 * x2 * (x0 + x1 + x2))


def circumradius_sq_heron(edges):
    """Triangle circumradius from side lengths, squared (abc)^2 / (Heron product)."""
    if edges.n != 2:
        raise base.InputError(f"Triangle formula needs n = 2, got n = {edges.n}")
    a, b, c = edges[0, 1], edges[1, 2], edges[0, 2]
    heron = (a + b + c) * (a + b - c) * (b + c - a) * (a + c - b)
    if not heron > 0:
        raise DegenerateSimplex("Triangle is flat")
    return (a * b * c) ** 2 / heron


# ----------------------------------- Volume -----------------------------------
def volume_sq_from_radii(radii, rho_sq):
    """V^2 = 2^n (n - 1) (prod x_i)^2 / ((n!)^2 rho^2)."""
    n = radii.n
    if not rho_sq > 0:
        raise NotRealizable(f"Edge-inradius squared {rho_sq} is not positive")
    product = radii.product()
    return 2**n * (n - 1) * product * product / (math.factorial(n) ** 2 * rho_sq)


def volume_sq_cm(edges):
    """
    V^2 = (-1)^(n+1) |CM| / (2^n (n!)^2).

    The bordered quotient R^2 = -|D| / (2 |D1|) and
    (n!)^2 V^2 R^2 = (-1)^n |D| / 2^(n+1) together give
    |D1| = (-1)^(n+1) 2^n (n!)^2 V^2, and D1 is the Cayley-Menger matrix of
    the squared edges.  Zero for flat configurations, negative when the
    edge set cannot be realized.
    """
    n = edges.n
    detCM = determinant(build_cayley_menger(edges))
    return -sign_factor(n) * detCM / (2**n * math.factorial(n) ** 2)


def is_flat(volume_sq, edges):
    """
    True if V^2 is not positive, or the Cayley-Menger matrix is numerically
    singular in floating point.
    """
    return not volume_sq > 0 or bordered_is_singular(squared_edge_matrix(edges), volume_sq)


# ---------------------------------- Inradius ----------------------------------
def inradius(edges):
    """
    r = n V / sum F_i with F_i the (n-1)-volume of the facet opposite vertex i.

    Volumes are computed in the edge backend; the square roots are taken in
    floating point, so the result is always a float.
    """
    n = edges.n
    volumeSq = volume_sq_cm(edges)
    if is_flat(volumeSq, edges):
        raise DegenerateSimplex(f"Volume squared is {volumeSq}")
    facets = 0.0
    for i in range(n + 1):
        facetSq = volume_sq_cm(edges.face(i))
        if not facetSq > 0:
            raise DegenerateSimplex(f"Facet volume squared is {facetSq}", i)
        facets += FloatBackend.sqrt(float(facetSq))
    return n * FloatBackend.sqrt(float(volumeSq)) / facets


# ----------------------------- Circumcenter-centroid --------------------------
def og_distance_sq(R_sq, edges, tolerance=base.REL_TOL):
    """|OG|^2 = R^2 - sum a_ij^2 / (n + 1)^2."""
    n = edges.n
    value = R_sq - edges.sum_of_squares() / (n + 1) ** 2
    if value < 0:
        if edges.backend.exact or -value > tolerance * abs(R_sq):
            raise NegativeOG(f"|OG|^2 = {value} is negative", value=value)
        return 0.0
    return value


# ---------------------------------- Bundle ------------------------------------
@dataclass(frozen=True)
class SimplexMetrics:
    """
    All invariants of one simplex.

    @ivar route:
        Per field, which route produced the reported value ("both-agree" when
        every route matched).
    @ivar routes:
        Per field, the value of every route that was evaluated.
    @ivar disagreements:
        Names of fields whose routes did not match.
    """

    n: int
    backend: type
    rho_sq: object
    R_sq: object
    V_sq: object
    og_sq: object
    ratio_R_rho_sq: object
    inradius: float
    route: dict = field(default_factory=dict)
    routes: dict = field(default_factory=dict)
    disagreements: tuple = ()

    KEYS = (
        "n",
        "backend",
        "rho_sq",
        "R_sq",
        "V_sq",
        "og_sq",
        "ratio_R_rho_sq",
        "inradius",
        "route",
        "routes",
        "disagreements",
    )

    def as_dict(self):
        fmt = self.backend.format
        return {
            "n": self.n,
            "backend": self.backend.name,
            "rho_sq": fmt(self.rho_sq),
            "R_sq": fmt(self.R_sq),
            "V_sq": fmt(self.V_sq),
            "og_sq": fmt(self.og_sq),
            "ratio_R_rho_sq": fmt(self.ratio_R_rho_sq),
            "inradius": self.inradius,
            "route": {k: v.value for k, v in self.route.items()},
            "routes": {k: {name: fmt(v) for name, v in values.items()} for k, values in self.routes.items()},
            "disagreements": list(self.disagreements),
        }


def _agree(a, b, tolerance):
    # relative only: every reconciled quantity is positive and may be tiny
    if a == b:
        return True
    if not isinstance(a, float) and not isinstance(b, float):
        return False
    return abs(a - b) <= tolerance * max(abs(a), abs(b))


def _reconcile(name, values, tolerance):
    first = next(iter(values.values()))
    if all(_agree(first, v, tolerance) for v in values.values()):
        return Route.BOTH_AGREE, True
    logger.warning("routes disagree on %s: %s", name, values)
    return Route.CLOSED, False


def compute_metrics(radii, tolerance=base.REL_TOL, with_inradius=True):
    """
    Evaluate every route for rho^2, R^2 and V^2, and |OG|^2, R/rho and r.

    Raises NotRealizable for radii with a non-positive margin.  Routes that
    disagree (beyond tolerance in floating point) are recorded in
    disagreements and the closed-form value is reported.
    """
    require_realizable(radii)
    n = radii.n
    sums = symmetric_sums(radii)
    edges = edges_from_radii(radii)

    routes = {
        "rho_sq": {"closed": edge_inradius_sq_closed(sums), "determinant": edge_inradius_sq_det(radii)},
        "R_sq": {
            "closed": circumradius_sq_closed(sums),
            "determinant": circumradius_sq_det(radii),
            "volume": circumradius_sq_vol(edges),
        },
    }
    rhoSq = routes["rho_sq"]["closed"]
    routes["V_sq"] = {"closed": volume_sq_from_radii(radii, rhoSq), "determinant": volume_sq_cm(edges)}

    route = {}
    disagreements = []
    for name, values in routes.items():
        route[name], agree = _reconcile(name, values, tolerance)
        if not agree:
            disagreements.append(name)

    RSq = routes["R_sq"]["closed"]
    route["og_sq"] = Route.CLOSED
    route["ratio_R_rho_sq"] = Route.CLOSED
    return SimplexMetrics(
        n=n,
        backend=radii.backend,
        rho_sq=rhoSq,
        R_sq=RSq,
        V_sq=routes["V_sq"]["closed"],
        og_sq=og_distance_sq(RSq, edges, tolerance),
        ratio_R_rho_sq=ratio_R_rho_sq(sums),
        inradius=inradius(edges) if with_inradius else None,
        route=route,
        routes=routes,
        disagreements=tuple(disagreements),
    )
