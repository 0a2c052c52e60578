"""
Randomized and targeted verification of the circumradius inequalities.

For every realizable instance the chain

    0 <= R^2 - 2n/(n-1) rho^2 <= (n + 1)^2 |OG|^2
    R >= sqrt(2n/(n-1)) rho >= n r

is checked together with the intermediate bounds its proof relies on, and the
metrics are cross-checked against a coordinate embedding.  Violations carry
exact rational values so a claimed counterexample can be re-checked
independently.
"""

import enum
import math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import base
from .base import (
    MAX_DRAWS,
    NEAR_BOUNDARY_MARGIN,
    RADII_DENOMINATOR,
    REL_TOL,
    DegenerateSimplex,
    EdgeTangentError,
    NotEmbeddable,
    SamplingExhausted,
    logger,
)
from .metrics import compute_metrics
from .numeric import ExactBackend, FloatBackend, relative_deviation
from .simplex import BalloonRadii, boundary_radius, edges_from_radii, is_realizable, symmetric_sums

# instances handed to one worker at a time; fixed so results do not depend on
# the number of workers
BLOCK_SIZE = 32


class Profile(enum.Enum):
    UNIFORM = "uniform"
    LOG_UNIFORM = "log-uniform"
    NEAR_BOUNDARY = "near-boundary"


# ------------------------------ Instance generation ---------------------------
def instance_seed(seed, n, index):
    """The per-instance seed sequence; depends only on (seed, n, index)."""
    return np.random.SeedSequence([int(seed), int(n), int(index)])


def _on_grid(values):
    return tuple(Fraction(max(1, int(round(v * RADII_DENOMINATOR))), RADII_DENOMINATOR) for v in values)


def _float_margin(values, n):
    reciprocal = 1.0 / np.asarray(values, dtype=float)
    return reciprocal.sum() ** 2 - (n - 1) * np.square(reciprocal).sum()


def _draw(rng, n, profile):
    """One candidate radii tuple, or None if the draw is rejected early."""
    if profile is Profile.UNIFORM:
        values = rng.uniform(0.5, 2.0, n + 1)
    elif profile is Profile.LOG_UNIFORM:
        values = 10.0 ** rng.uniform(-1.0, 1.0, n + 1)
    else:
        others = _on_grid(rng.uniform(0.5, 2.0, n))
        low, high = NEAR_BOUNDARY_MARGIN
        target = rng.uniform(float(low), float(high))
        try:
            x0 = boundary_radius(others, n, target)
        except ValueError:
            return None
        return (Fraction(x0).limit_denominator(10**9),) + others
    if _float_margin(values, n) <= 0:
        return None
    return _on_grid(values)


def sample_radii(n, seed, profile=Profile.UNIFORM, max_draws=MAX_DRAWS):
    """
    Draw realizable exact radii; return (radii, rejections).

    seed may be an int, a numpy SeedSequence or a Generator.  Uniform draws
    come from [1/2, 2], log-uniform draws from [1/10, 10], both on the
    RADII_DENOMINATOR grid.  The near-boundary profile draws x_1..x_n
    uniformly and solves for the x_0 whose margin lands in
    NEAR_BOUNDARY_MARGIN, accepting only margins in (0, 1/100).
    """
    profile = Profile(profile)
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if profile is Profile.NEAR_BOUNDARY and n < 3:
        raise ValueError("The near-boundary profile needs n >= 3")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    upper = NEAR_BOUNDARY_MARGIN[1]
    for draw in range(max_draws):
        candidate = _draw(rng, n, profile)
        if candidate is None:
            continue
        radii = BalloonRadii(candidate)
        realizable, margin = is_realizable(radii)
        if not realizable:
            continue
        if profile is Profile.NEAR_BOUNDARY and not margin < upper:
            continue
        return radii, draw
    raise SamplingExhausted(f"No realizable radii for n = {n} after {max_draws} draws", draws=max_draws)


def random_radii(n, seed, profile=Profile.UNIFORM):
    return sample_radii(n, seed, profile)[0]


# ------------------------------ Embedding oracle ------------------------------
@dataclass(frozen=True, eq=False)
class PointConfiguration:
    """
    n + 1 points in R^n, vertex 0 at the origin.

    @ivar points:
        (n + 1, n) float array.
    @ivar smallest_eigenvalue:
        Smallest eigenvalue of the Gram matrix the points were factored from.
    """

    points: np.ndarray
    smallest_eigenvalue: float

    @property
    def n(self):
        return self.points.shape[0] - 1

    def squared_distances(self):
        difference = self.points[:, None, :] - self.points[None, :, :]
        return np.sum(difference**2, axis=2)


def embed(edges, tolerance=REL_TOL):
    """
    Coordinates reproducing the edge lengths.

    The Gram matrix relative to vertex 0, G_ij = (a_0i^2 + a_0j^2 - a_ij^2) / 2,
    is factored by Cholesky (eigen-decomposition when it is only
    semidefinite); raises NotEmbeddable for an eigenvalue below -tolerance
    times the larger of the top eigenvalue and the largest squared edge.
    """
    a = np.array(edges.with_backend("float").a.rows(), dtype=float)
    n = a.shape[0] - 1
    squared = a * a
    gram = (squared[0, 1:][:, None] + squared[0, 1:][None, :] - squared[1:, 1:]) / 2.0
    eigenvalues = np.linalg.eigvalsh(gram)
    smallest = float(eigenvalues[0])
    largest = max(abs(float(eigenvalues[-1])), float(squared.max()))
    if smallest < -tolerance * largest:
        raise NotEmbeddable(f"Gram matrix has eigenvalue {smallest}", eigenvalue=smallest)
    try:
        lower = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        values, vectors = np.linalg.eigh(gram)
        lower = vectors * np.sqrt(np.clip(values, 0.0, None))
    config = PointConfiguration(np.vstack([np.zeros(n), lower]), smallest)
    error = np.max(np.abs(config.squared_distances() - squared))
    if error > math.sqrt(tolerance) * squared.max():
        raise NotEmbeddable(f"Embedded distances are off by {error}", eigenvalue=smallest)
    return config


Circumdata = namedtuple("Circumdata", ["R_sq", "og_sq"])


def circumdata_embedded(config):
    """Circumradius and circumcenter-centroid distance, both squared, from coordinates."""
    points = config.points
    relative = points[1:] - points[0]
    if np.linalg.cond(relative) > 1.0 / np.finfo(float).eps:
        raise DegenerateSimplex("Points are affinely dependent")
    try:
        offset = np.linalg.solve(relative, np.sum(relative**2, axis=1) / 2.0)
    except np.linalg.LinAlgError:
        raise DegenerateSimplex("Points are affinely dependent")
    center = points[0] + offset
    centroid = points.mean(axis=0)
    return Circumdata(float(offset @ offset), float(np.sum((center - centroid) ** 2)))


# ------------------------------- Chain checks ---------------------------------
@dataclass(frozen=True)
class InstanceReport:
    """
    Slacks of the inequality chain for one instance.

    slack_left = R^2 - 2n/(n-1) rho^2, slack_right = (n+1)^2 |OG|^2 - slack_left
    and bound_slack = X1^2 - X2 X3 - 32 n (n - 1) are in the radii backend;
    slack_euler = R - n r and slack_rho_r = sqrt(2n/(n-1)) rho - n r are floats.
    """

    radii: BalloonRadii
    sums: object
    metrics: object
    slack_left: object
    slack_right: object
    slack_euler: float
    slack_rho_r: float
    bound_slack: object
    oracle_delta: float
    ill_conditioned: bool = False
    violations: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def as_dict(self):
        fmt = self.radii.backend.format
        return {
            "n": self.radii.n,
            "radii": self.radii.formatted(),
            "slack_left": fmt(self.slack_left),
            "slack_right": fmt(self.slack_right),
            "slack_euler": self.slack_euler,
            "slack_rho_r": self.slack_rho_r,
            "bound_slack": fmt(self.bound_slack),
            "oracle_delta": _finite_or_none(self.oracle_delta),
            "ill_conditioned": self.ill_conditioned,
            "violations": list(self.violations),
        }


def _finite_or_none(value):
    return value if value is not None and math.isfinite(value) else None


def _negative(value, backend, tolerance, scale):
    if backend.exact:
        return value < 0
    return value < -tolerance * abs(scale)


def _violation(name, value, radii):
    return {"check": name, "value": radii.backend.format(value), "radii": radii.formatted()}


def _oracle_delta(metrics, edges, tolerance):
    """Largest relative disagreement between routes and the embedding oracle."""
    deltas = []
    for values in metrics.routes.values():
        reference = next(iter(values.values()))
        deltas.extend(relative_deviation(reference, v) for v in values.values())
    try:
        embedded = circumdata_embedded(embed(edges, tolerance))
    except (NotEmbeddable, DegenerateSimplex) as e:
        logger.warning("embedding oracle failed: %s", e)
        return math.inf
    deltas.append(relative_deviation(metrics.R_sq, embedded.R_sq))
    deltas.append(relative_deviation(metrics.og_sq, embedded.og_sq, scale=metrics.R_sq))
    return max(deltas)


def check_chain(radii, tolerance=REL_TOL, embed_oracle=True):
    """Compute all slacks for realizable radii and collect violations."""
    metrics = compute_metrics(radii, tolerance)
    sums = symmetric_sums(radii)
    n = radii.n
    backend = radii.backend
    edges = edges_from_radii(radii)

    slackLeft = metrics.R_sq - backend.constant(2 * n, n - 1) * metrics.rho_sq
    slackRight = (n + 1) ** 2 * metrics.og_sq - slackLeft
    boundSlack = sums.discriminant - 32 * n * (n - 1)

    R = math.sqrt(float(metrics.R_sq))
    rho = math.sqrt(float(metrics.rho_sq))
    nr = n * metrics.inradius
    slackEuler = R - nr
    slackRhoR = math.sqrt(2 * n / (n - 1)) * rho - nr

    violations = []
    checks = (
        ("slack_left", slackLeft, metrics.R_sq),
        ("slack_right", slackRight, metrics.R_sq),
        ("bound_slack", boundSlack, sums.X1 * sums.X1),
    )
    for name, value, scale in checks:
        if _negative(value, backend, tolerance, scale):
            violations.append(_violation(name, value, radii))
    for name, value in (("slack_euler", slackEuler), ("slack_rho_r", slackRhoR)):
        if value < -tolerance * R:
            violations.append({"check": name, "value": value, "radii": radii.formatted()})
    if metrics.disagreements and backend.exact:
        for name in metrics.disagreements:
            violations.append({"check": f"routes:{name}", "value": None, "radii": radii.formatted()})

    delta = _oracle_delta(metrics, edges, tolerance) if embed_oracle else 0.0
    illConditioned = delta > tolerance or (bool(metrics.disagreements) and not backend.exact)
    if violations:
        logger.error("violation for radii %s: %s", radii.formatted(), [v["check"] for v in violations])
    return InstanceReport(
        radii=radii,
        sums=sums,
        metrics=metrics,
        slack_left=slackLeft,
        slack_right=slackRight,
        slack_euler=slackEuler,
        slack_rho_r=slackRhoR,
        bound_slack=boundSlack,
        oracle_delta=delta,
        ill_conditioned=illConditioned,
        violations=tuple(violations),
    )


# -------------------------------- Proof bounds --------------------------------
@dataclass(frozen=True)
class ProofBounds:
    """
    Intermediate inequalities behind the left and right bounds, each stored as
    a (larger, smaller) pair that must satisfy larger >= smaller.
    """

    n: int
    backend: type
    checks: dict

    def slack(self, name):
        larger, smaller = self.checks[name]
        return larger - smaller

    def tight(self, name):
        larger, smaller = self.checks[name]
        if self.backend.exact:
            return larger == smaller
        return self.backend.is_close(larger, smaller)

    def failures(self, tolerance=REL_TOL):
        failed = []
        for name, (larger, smaller) in self.checks.items():
            if larger >= smaller:
                continue
            if not self.backend.exact and self.backend.is_close(larger, smaller, tolerance):
                continue
            failed.append(name)
        return failed

    @property
    def holds(self):
        return not self.failures()

    def as_dict(self):
        fmt = self.backend.format
        return {name: fmt(self.slack(name)) for name in self.checks}


def check_proof_bounds(sums, n=None):
    """
    power_mean_N      N >= M^2 / (n+1)
    power_mean_Q      Q >= P^2 / (n+1)
    cauchy_MP         M P >= (n+1)^2
    product_bound     4 M^2 P^2 / (n+1)^2 >= X2 X3
    intermediate      X1^2 - 4 M^2 P^2 / (n+1)^2 >= 32 n (n-1)
    bound             X1^2 - X2 X3 >= 32 n (n-1)
    sum_of_squares    n(n+2) X1^2 + 32 n (n-1)
                        >= [(n^2+10n-8) M^2 - (n-1)(n-2)(n-4) N] X2
    reduced           n(n+2) X1^2 + 32 n (n-1) >= 12 n (3n-2) M^2 P^2 / (n+1)^2
                      for n >= 4
    monotone          f(M P) >= 0 for n >= 4, where
                      f(t) = k (t - (n+2)(n-3)(n+1)^2 / k)^2 - 4 (3n-10)^2 (n+1)^4 / k
                      and k = n^2 + 5n - 26
    """
    n = sums.n if n is None else n
    backend = ExactBackend if isinstance(sums.M, Fraction) else FloatBackend
    M, N, P, Q = sums.M, sums.N, sums.P, sums.Q
    X1, X2, X3 = sums.X1, sums.X2, sums.X3
    MP = M * P
    productBound = 4 * MP * MP / (n + 1) ** 2
    floor = backend.constant(32 * n * (n - 1))
    checks = {
        "power_mean_N": (N, M * M / (n + 1)),
        "power_mean_Q": (Q, P * P / (n + 1)),
        "cauchy_MP": (MP, backend.constant((n + 1) ** 2)),
        "product_bound": (productBound, X2 * X3),
        "intermediate": (X1 * X1 - productBound, floor),
        "bound": (X1 * X1 - X2 * X3, floor),
        "sum_of_squares": (
            n * (n + 2) * X1 * X1 + 32 * n * (n - 1),
            ((n * n + 10 * n - 8) * M * M - (n - 1) * (n - 2) * (n - 4) * N) * X2,
        ),
    }
    if n >= 4:
        checks["reduced"] = (
            n * (n + 2) * X1 * X1 + 32 * n * (n - 1),
            backend.constant(12 * n * (3 * n - 2), (n + 1) ** 2) * MP * MP,
        )
        k = n * n + 5 * n - 26
        center = backend.constant((n + 2) * (n - 3) * (n + 1) ** 2, k)
        offset = backend.constant(4 * (3 * n - 10) ** 2 * (n + 1) ** 4, k)
        checks["monotone"] = (k * (MP - center) ** 2 - offset, backend.zero())
    return ProofBounds(n=n, backend=backend, checks=checks)


# ------------------------------ Backend comparison ----------------------------
@dataclass(frozen=True)
class BackendComparison:
    deviations: dict
    max_deviation: float
    ill_conditioned: bool

    def as_dict(self):
        return {
            "deviations": {k: _finite_or_none(v) for k, v in self.deviations.items()},
            "max_deviation": _finite_or_none(self.max_deviation),
            "ill_conditioned": self.ill_conditioned,
        }


def compare_backends(radii, tolerance=REL_TOL, exact=None):
    """
    Relative deviation of every float metric from its exact counterpart.

    exact may carry already computed exact metrics for the same radii.
    """
    if exact is None:
        exact = compute_metrics(radii.with_backend("exact"), tolerance)
    try:
        rough = compute_metrics(radii.with_backend("float"), tolerance)
    except EdgeTangentError as e:
        logger.warning("float backend failed on %s: %s", radii.formatted(), e)
        return BackendComparison({}, math.inf, True)
    deviations = {
        "rho_sq": relative_deviation(exact.rho_sq, rough.rho_sq),
        "R_sq": relative_deviation(exact.R_sq, rough.R_sq),
        "V_sq": relative_deviation(exact.V_sq, rough.V_sq),
        "og_sq": relative_deviation(exact.og_sq, rough.og_sq, scale=exact.R_sq),
        "ratio_R_rho_sq": relative_deviation(exact.ratio_R_rho_sq, rough.ratio_R_rho_sq),
        "inradius": relative_deviation(exact.inradius, rough.inradius),
    }
    worst = max(deviations.values())
    return BackendComparison(deviations, worst, worst > tolerance)


# ---------------------------------- Campaigns ---------------------------------
@dataclass
class DimensionSummary:
    n: int
    instances: int = 0
    rejections: int = 0
    ill_conditioned: int = 0
    unchecked: int = 0
    min_slack_left: object = None
    min_slack_left_radii: list = None
    min_slack_right: object = None
    min_bound_slack: object = None
    min_slack_euler: float = None
    min_slack_rho_r: float = None
    worst_oracle_delta: float = 0.0
    violations: list = field(default_factory=list)
    skipped: bool = False

    def add(self, outcome):
        self.instances += 1
        self.rejections += outcome["rejections"]
        self.ill_conditioned += outcome["ill_conditioned"]
        if self.min_slack_left is None or outcome["slack_left"] < self.min_slack_left:
            self.min_slack_left = outcome["slack_left"]
            self.min_slack_left_radii = outcome["radii"]
        for key in ("slack_right", "bound_slack", "slack_euler", "slack_rho_r"):
            current = getattr(self, f"min_{key}")
            if current is None or outcome[key] < current:
                setattr(self, f"min_{key}", outcome[key])
        delta = outcome["oracle_delta"]
        if delta is not None and delta > self.worst_oracle_delta:
            self.worst_oracle_delta = delta
        self.violations.extend(outcome["violations"])

    def as_dict(self, backend):
        fmt = backend.format
        return {
            "n": self.n,
            "instances": self.instances,
            "rejections": self.rejections,
            "ill_conditioned": self.ill_conditioned,
            "unchecked": self.unchecked,
            "violations": self.violations,
            "min_slack_left": None if self.min_slack_left is None else fmt(self.min_slack_left),
            "min_slack_left_radii": self.min_slack_left_radii,
            "min_slack_right": None if self.min_slack_right is None else fmt(self.min_slack_right),
            "min_bound_slack": None if self.min_bound_slack is None else fmt(self.min_bound_slack),
            "min_slack_euler": self.min_slack_euler,
            "min_slack_rho_r": self.min_slack_rho_r,
            "worst_oracle_delta": self.worst_oracle_delta,
            "skipped": self.skipped,
        }


@dataclass
class CampaignSummary:
    profile: Profile
    backend: type
    seed: int
    count: int
    tolerance: float
    dimensions: list = field(default_factory=list)

    @property
    def total_instances(self):
        return sum(d.instances for d in self.dimensions)

    @property
    def total_violations(self):
        return sum(len(d.violations) for d in self.dimensions)

    @property
    def ill_conditioned(self):
        return sum(d.ill_conditioned for d in self.dimensions)

    @property
    def unchecked(self):
        return sum(d.unchecked for d in self.dimensions)

    def as_dict(self):
        return {
            "profile": self.profile.value,
            "backend": self.backend.name,
            "seed": self.seed,
            "count": self.count,
            "tolerance": self.tolerance,
            "total_instances": self.total_instances,
            "total_violations": self.total_violations,
            "ill_conditioned": self.ill_conditioned,
            "unchecked": self.unchecked,
            "dimensions": [d.as_dict(self.backend) for d in self.dimensions],
        }


def _run_block(task):
    """Worker entry point: check instances start..stop of dimension n."""
    n, start, stop, seed, profile, backendName, tolerance, embedOracle = task
    profile = Profile(profile)
    backend = base.backend_for(backendName)
    outcomes = []
    for index in range(start, stop):
        radii, rejections = sample_radii(n, instance_seed(seed, n, index), profile)
        radii = radii.with_backend(backend)
        try:
            report = check_chain(radii, tolerance, embedOracle)
        except EdgeTangentError as e:
            # float rounding can push a near-boundary instance over the edge
            if backend.exact:
                raise
            logger.warning("instance %d of n = %d left unchecked: %s", index, n, e)
            outcomes.append(None)
            continue
        violations = [dict(v, index=index) for v in report.violations]
        bounds = check_proof_bounds(report.sums)
        for name in bounds.failures(tolerance):
            violation = _violation(f"proof:{name}", bounds.slack(name), radii)
            violations.append(dict(violation, index=index))
        delta = report.oracle_delta
        illConditioned = report.ill_conditioned
        if backend.exact:
            comparison = compare_backends(radii, tolerance, exact=report.metrics)
            delta = max(delta, comparison.max_deviation)
            illConditioned = illConditioned or comparison.ill_conditioned
        if illConditioned and base.DEBUG:
            logger.debug("instance %d of n = %d is ill-conditioned (delta %s)", index, n, delta)
        outcomes.append(
            {
                "rejections": rejections,
                "radii": radii.formatted(),
                "slack_left": report.slack_left,
                "slack_right": report.slack_right,
                "bound_slack": report.bound_slack,
                "slack_euler": report.slack_euler,
                "slack_rho_r": report.slack_rho_r,
                "oracle_delta": _finite_or_none(delta),
                "ill_conditioned": int(illConditioned),
                "violations": violations,
            }
        )
    return n, outcomes


def run_campaign(
    n_values,
    count,
    seed,
    profile=Profile.UNIFORM,
    backend="exact",
    workers=1,
    tolerance=REL_TOL,
    embed_oracle=True,
):
    """
    Check count generated instances for every n in n_values.

    Instance i of dimension n always uses instance_seed(seed, n, i), work is
    split into fixed BLOCK_SIZE blocks, and results are folded in block
    order, so the summary is identical for any number of workers.
    """
    profile = Profile(profile)
    backend = base.backend_for(backend)
    summary = CampaignSummary(profile=profile, backend=backend, seed=seed, count=count, tolerance=tolerance)
    tasks = []
    byN = {}
    for n in n_values:
        dimension = DimensionSummary(n=n)
        summary.dimensions.append(dimension)
        byN[n] = dimension
        if profile is Profile.NEAR_BOUNDARY and n < 3:
            logger.warning("near-boundary profile skips n = %d", n)
            dimension.skipped = True
            continue
        for start in range(0, count, BLOCK_SIZE):
            stop = min(start + BLOCK_SIZE, count)
            tasks.append((n, start, stop, seed, profile.value, backend.name, tolerance, embed_oracle))

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_block, tasks))
    else:
        results = [_run_block(task) for task in tasks]

    for n, outcomes in results:
        for outcome in outcomes:
            if outcome is None:
                byN[n].unchecked += 1
                continue
            byN[n].add(outcome)
    if base.DEBUG:
        logger.debug("campaign finished: %d instances", summary.total_instances)
    return summary
