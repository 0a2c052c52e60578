"""
edgetangent Overview
====================
    edgetangent computes the metric invariants of circumscriptible
    n-simplices, the simplices with a sphere tangent to every edge, and
    checks the inequalities relating them.

    Balloon radii
    -------------
    A simplex has an edge-tangent sphere exactly when positive x_0..x_n
    exist with a_ij = x_i + x_j for every edge.  L{BalloonRadii<simplex.BalloonRadii>}
    holds such radii; L{radii_from_edges<simplex.radii_from_edges>} recovers
    them from an edge matrix or raises NotCircumscriptible.  Radii describe a
    real simplex iff P^2 - (n - 1) Q > 0, see
    L{is_realizable<simplex.is_realizable>}.

    Backends
    --------
    Every scalar lives in a registered backend: "exact" (fractions.Fraction,
    fraction-free elimination) or "float" (binary64, numpy kernels).  Squared
    quantities stay rational in the exact backend.

    Metrics
    -------
    L{compute_metrics<metrics.compute_metrics>} evaluates the edge-inradius,
    circumradius and volume by closed formula and by determinant, the
    circumcenter-centroid distance and the inradius, and records whether the
    routes agree.

    Verification
    ------------
    L{check_chain<verify.check_chain>} measures the slacks of the inequality
    chain for one instance, L{run_campaign<verify.run_campaign>} runs it over
    seeded random instances in parallel.

    Examples
    --------

    >>> r = BalloonRadii.from_values([1, 2, 3])
    >>> m = compute_metrics(r)
    >>> m.R_sq, m.rho_sq, m.V_sq, m.og_sq
    (Fraction(25, 4), Fraction(1, 1), Fraction(36, 1), Fraction(25, 36))
    >>> radii_from_edges(edges_from_radii(r)).formatted()
    ['1', '2', '3']

"""

from . import numeric
from .base import VERSION, EdgeTangentError, get_backend
from .metrics import compute_metrics
from .simplex import BalloonRadii, EdgeLengthMatrix, edges_from_radii, is_realizable, radii_from_edges, symmetric_sums
from .verify import check_chain, run_campaign

# Package version
__version__ = VERSION
