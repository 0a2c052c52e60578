"""Compute, validate and verify circumscriptible simplices from the command line."""

import csv
import json
import logging
import os
import sys
from argparse import ArgumentParser, ArgumentTypeError
from dataclasses import dataclass

from . import base
from .base import (
    DEFAULT_SEED,
    REL_TOL,
    SEED_ENV,
    EdgeTangentError,
    InputError,
    NotCircumscriptible,
    NumericError,
    SamplingExhausted,
    logger,
)
from .bench import COLUMNS, bench_determinants
from .matrices import build_cayley_menger, squared_edge_matrix
from .metrics import compute_metrics, volume_sq_cm
from .numeric import bordered_is_singular, determinant
from .simplex import BalloonRadii, EdgeLengthMatrix, edges_from_radii, is_realizable, radii_from_edges
from .verify import Profile, run_campaign

version = base.VERSION

COMMANDS = ("metrics", "validate", "verify", "bench")
FORMATS = ("json", "csv")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DOMAIN = 2
EXIT_EXHAUSTED = 3
EXIT_VIOLATION = 4


class Parser(ArgumentParser):
    """ArgumentParser that reports malformed command lines with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ------------------------------- Argument types -------------------------------
def parse_n_values(text):
    """'5', '2..8' or '2,4,6' into a tuple of dimensions, each at least 2."""
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
            values = tuple(range(low, high + 1))
        else:
            values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ArgumentTypeError(f"invalid dimension list {text!r}")
    if not values or min(values) < 2:
        raise ArgumentTypeError(f"dimensions must be at least 2, got {text!r}")
    return values


def parse_radii(text):
    values = tuple(part.strip() for part in text.split(",") if part.strip())
    if not values:
        raise ArgumentTypeError("no radii given")
    return values


def parse_seed(text):
    try:
        seed = int(text)
    except ValueError:
        raise ArgumentTypeError(f"invalid seed {text!r}")
    if not 0 <= seed < 2**64:
        raise ArgumentTypeError(f"seed {seed} is not a 64-bit unsigned value")
    return seed


def default_seed():
    text = os.environ.get(SEED_ENV)
    if text is None:
        return DEFAULT_SEED
    try:
        return parse_seed(text)
    except ArgumentTypeError as e:
        raise InputError(f"{SEED_ENV}: {e}")


# -------------------------------- Configuration -------------------------------
@dataclass(frozen=True)
class RunConfig:
    """One validated invocation; exactly one input source for metrics/validate."""

    command: str
    backend: str = "exact"
    output: str = "json"
    tolerance: float = REL_TOL
    seed: int = DEFAULT_SEED
    n_values: tuple = (2, 3, 4, 5, 6, 7, 8)
    count: int = 100
    profile: str = Profile.UNIFORM.value
    workers: int = 1
    repetitions: int = 10
    radii: tuple = None
    edges: str = None
    input: str = None
    verbose: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"Unknown command {self.command!r}")
        base.backend_for(self.backend)
        if self.output not in FORMATS:
            raise InputError(f"Unknown output format {self.output!r}")
        if not self.tolerance > 0:
            raise InputError(f"Tolerance must be positive, got {self.tolerance}")
        if self.count < 1:
            raise InputError(f"Count must be at least 1, got {self.count}")
        if self.workers < 1:
            raise InputError(f"Workers must be at least 1, got {self.workers}")
        if self.repetitions < 1:
            raise InputError(f"Repetitions must be at least 1, got {self.repetitions}")
        if not 0 <= self.seed < 2**64:
            raise InputError(f"Seed {self.seed} is not a 64-bit unsigned value")
        if self.profile not in {p.value for p in Profile}:
            raise InputError(f"Unknown profile {self.profile!r}")
        sources = [s for s in (self.radii, self.edges, self.input) if s is not None]
        if self.command in ("metrics", "validate") and len(sources) != 1:
            raise InputError("Give exactly one of --radii, --edges, --input")

    @classmethod
    def from_namespace(cls, args):
        fields = {k: v for k, v in vars(args).items() if k in cls.__dataclass_fields__ and v is not None}
        if "seed" not in fields:
            fields["seed"] = default_seed()
        return cls(**fields)


def get_arguments(argv=None):
    # Configuration options
    common = Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging; repeat for debug output")
    common.add_argument(
        "--backend", choices=base.backend_names(), default="exact", help="Number system [default: exact]"
    )
    common.add_argument(
        "--format", dest="output", choices=FORMATS, default="json", help="Output format [default: json]"
    )
    common.add_argument("--tolerance", type=float, default=REL_TOL, help=f"Relative tolerance [default: {REL_TOL}]")
    common.add_argument("--seed", type=parse_seed, help=f"Global seed [default: ${SEED_ENV} or {DEFAULT_SEED}]")

    source = Parser(add_help=False)
    group = source.add_mutually_exclusive_group(required=True)
    group.add_argument("--radii", type=parse_radii, help="Comma separated balloon radii, p/q allowed")
    group.add_argument("--edges", help="JSON document with an edge matrix")
    group.add_argument("--input", help="JSON document with radii or edges")

    parser = Parser(description="edgetangent computes invariants of simplices with an edge-tangent sphere.")
    parser.add_argument("-V", "--version", action="version", version=version)
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    commands.add_parser("metrics", parents=[common, source], help="Radii, volume and distances of one simplex")
    commands.add_parser("validate", parents=[common, source], help="Check an edge set for an edge-tangent sphere")

    verify = commands.add_parser("verify", parents=[common], help="Check the inequality chain on generated instances")
    verify.add_argument("--n", dest="n_values", type=parse_n_values, default=None, help="Dimensions, e.g. 3 or 2..8")
    verify.add_argument("--count", type=int, default=100, help="Instances per dimension [default: 100]")
    verify.add_argument(
        "--profile", choices=[p.value for p in Profile], default=Profile.UNIFORM.value, help="Radii distribution"
    )
    verify.add_argument("--workers", type=int, default=1, help="Worker processes [default: 1]")

    bench = commands.add_parser("bench", parents=[common], help="Time closed-form against eliminated determinants")
    bench.add_argument("--n", dest="n_values", type=parse_n_values, default=None, help="Dimensions, e.g. 2..8")
    bench.add_argument("--repetitions", type=int, default=10, help="Timed runs per route [default: 10]")

    return parser.parse_args(argv)


# ---------------------------------- Input -------------------------------------
def read_document(path):
    try:
        with open(path) as f:
            document = json.load(f)
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not JSON: {e.msg}", (e.lineno, e.colno))
    if not isinstance(document, dict):
        raise InputError(f"{path} does not hold a JSON object")
    return document


def load_source(config):
    """Return ("radii", BalloonRadii) or ("edges", EdgeLengthMatrix)."""
    if config.radii is not None:
        return "radii", BalloonRadii.from_values(config.radii, backend=config.backend)
    path = config.edges if config.edges is not None else config.input
    document = read_document(path)
    n = document.get("n")
    if n is not None and (isinstance(n, bool) or not isinstance(n, int)):
        raise InputError(f"n must be an integer, got {n!r}")
    if "edges" in document:
        rows = document["edges"]
        if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
            raise InputError("edges must be a list of rows")
        if any(len(row) != len(rows) for row in rows):
            raise InputError("edges must be a square matrix")
        edges = EdgeLengthMatrix.from_rows(rows, config.backend)
        if n is not None and edges.n != n:
            raise InputError(f"n = {n} but the edge matrix has {edges.n + 1} vertices")
        return "edges", edges
    if config.edges is None and "radii" in document:
        if not isinstance(document["radii"], list):
            raise InputError("radii must be a list")
        return "radii", BalloonRadii.from_values(document["radii"], n, config.backend)
    raise InputError(f"{path} has no {'edges' if config.edges else 'radii or edges'} entry")


# --------------------------------- Commands -----------------------------------
def cmd_metrics(config):
    kind, source = load_source(config)
    radii = radii_from_edges(source, config.tolerance) if kind == "edges" else source
    metrics = compute_metrics(radii, config.tolerance)
    fmt = radii.backend.format
    document = {
        "command": "metrics",
        "source": kind,
        "radii": radii.formatted(),
        "margin": fmt(is_realizable(radii).margin),
    }
    document.update(metrics.as_dict())
    return document


def _cayley_menger_sign(edges):
    value = determinant(build_cayley_menger(edges))
    if bordered_is_singular(squared_edge_matrix(edges), value):
        return 0
    return 1 if value > 0 else -1


def cmd_validate(config):
    kind, source = load_source(config)
    edges = edges_from_radii(source) if kind == "radii" else source
    backend = edges.backend
    fmt = backend.format
    document = {
        "command": "validate",
        "n": edges.n,
        "circumscriptible": False,
        "radii": None,
        "mismatch": None,
        "realizable": None,
        "margin": None,
        "cayley_menger_sign": _cayley_menger_sign(edges),
        "volume_sq": fmt(volume_sq_cm(edges)),
    }
    try:
        radii = radii_from_edges(edges, config.tolerance)
    except NotCircumscriptible as e:
        document["mismatch"] = e.details()
        return document
    realizable, margin = is_realizable(radii)
    document.update(circumscriptible=True, radii=radii.formatted(), realizable=realizable, margin=fmt(margin))
    return document


def cmd_verify(config):
    summary = run_campaign(
        config.n_values,
        config.count,
        config.seed,
        profile=config.profile,
        backend=config.backend,
        workers=config.workers,
        tolerance=config.tolerance,
    )
    return summary.as_dict()


def cmd_bench(config):
    backend = base.backend_for(config.backend)
    rows = bench_determinants(config.n_values, config.repetitions, config.seed, backend)
    return {
        "command": "bench",
        "backend": backend.name,
        "repetitions": config.repetitions,
        "rows": [row.as_dict(backend) for row in rows],
    }


# --------------------------------- Output -------------------------------------
def _csv_rows(command, document):
    if command == "bench":
        return COLUMNS, [[row[k] for k in COLUMNS] for row in document["rows"]]
    if command == "verify":
        keys = list(document["dimensions"][0]) if document["dimensions"] else ["n"]
        keys = [k for k in keys if k not in ("violations", "min_slack_left_radii")] + ["violations"]
        rows = []
        for dimension in document["dimensions"]:
            rows.append([len(dimension[k]) if k == "violations" else dimension[k] for k in keys])
        return keys, rows
    flat = [[k, json.dumps(v) if isinstance(v, (dict, list)) else v] for k, v in document.items()]
    return ("key", "value"), flat


def write_document(command, document, output, stream=None):
    stream = sys.stdout if stream is None else stream
    if output == "json":
        json.dump(document, stream, indent=2)
        stream.write("\n")
        return
    header, rows = _csv_rows(command, document)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(["" if v is None else v for v in row] for row in rows)


def report_error(error, code):
    details = error.details()
    details["exit_code"] = code
    sys.stderr.write(json.dumps(details) + "\n")
    return code


def _configure_logging(verbose):
    if verbose >= 2:
        logger.setLevel(logging.DEBUG)
        base.DEBUG = True
    elif verbose == 1:
        logger.setLevel(logging.WARNING)


_COMMANDS = {"metrics": cmd_metrics, "validate": cmd_validate, "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None):
    args = get_arguments(argv)
    _configure_logging(args.verbose)
    try:
        config = RunConfig.from_namespace(args)
        document = _COMMANDS[config.command](config)
    except (InputError, NumericError) as e:
        return report_error(e, EXIT_INPUT)
    except SamplingExhausted as e:
        return report_error(e, EXIT_EXHAUSTED)
    except EdgeTangentError as e:
        return report_error(e, EXIT_DOMAIN)
    write_document(config.command, document, config.output)
    if config.command == "verify" and document["total_violations"]:
        return EXIT_VIOLATION
    return EXIT_OK


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("Aborted")
