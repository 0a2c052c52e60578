"""Timing of the closed-form |D| against fraction-free elimination."""

import statistics
import time
from dataclasses import dataclass

from . import base
from .base import DEFAULT_SEED, logger
from .matrices import build_D, det_D_closed
from .numeric import bit_length, determinant
from .verify import instance_seed, sample_radii

ROUTES = ("closed", "bareiss")
COLUMNS = ("n", "route", "median_ns", "max_bits", "value")


@dataclass(frozen=True)
class BenchRow:
    n: int
    route: str
    repetitions: int
    median_ns: int
    max_bits: int
    value: object

    def as_dict(self, backend):
        return {
            "n": self.n,
            "route": self.route,
            "median_ns": self.median_ns,
            "max_bits": self.max_bits,
            "value": backend.format(self.value),
        }


def _closed(radii, stats):
    value = det_D_closed(radii)
    stats["max_bits"] = max(stats.get("max_bits", 0), bit_length(value))
    return value


def _bareiss(radii, stats):
    return determinant(build_D(radii), stats)


_KERNELS = {"closed": _closed, "bareiss": _bareiss}


def _time(kernel, radii, repetitions):
    samples = []
    stats = {}
    value = None
    for _ in range(repetitions):
        start = time.perf_counter_ns()
        value = kernel(radii, stats)
        samples.append(time.perf_counter_ns() - start)
    return value, int(statistics.median(samples)), stats.get("max_bits", 0)


def bench_determinants(n_values, repetitions=10, seed=DEFAULT_SEED, backend="exact"):
    """
    One row per (n, route).  The radii for dimension n are the first uniform
    instance for (seed, n), so the value column is reproducible and only the
    timing columns vary between runs.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be at least 1, got {repetitions}")
    backend = base.backend_for(backend)
    rows = []
    for n in n_values:
        radii, _ = sample_radii(n, instance_seed(seed, n, 0))
        radii = radii.with_backend(backend)
        for route in ROUTES:
            value, medianNs, maxBits = _time(_KERNELS[route], radii, repetitions)
            rows.append(BenchRow(n, route, repetitions, medianNs, maxBits, value))
        logger.info("n = %d: closed %d ns, bareiss %d ns", n, rows[-2].median_ns, rows[-1].median_ns)
    return rows
