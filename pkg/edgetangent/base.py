"""edgetangent core: version, logging, errors, tolerances and the backend registry."""

import logging
from fractions import Fraction

# Package version
VERSION = "1.0.0"

# ------------------------------------ Logging ---------------------------------
logger = logging.getLogger(__name__)
if not logging.getLogger().handlers:
    handler = logging.StreamHandler()
    formatter = logging.Formatter("%(name)s %(levelname)s %(message)s")
    handler.setFormatter(formatter)
    logger.addHandler(handler)
logger.setLevel(logging.ERROR)  # Log errors
DEBUG = False  # Don't waste time on debug calls

# ----------------------------------- Constants --------------------------------
REL_TOL = 1e-9
ABS_TOL = 1e-12

# generated radii live on this rational grid so the exact backend stays cheap
RADII_DENOMINATOR = 1000
MAX_DRAWS = 10**6
NEAR_BOUNDARY_MARGIN = (Fraction(1, 1000), Fraction(1, 100))

SEED_ENV = "EDGETANGENT_SEED"
DEFAULT_SEED = 0


# ----------------------------------- Errors -----------------------------------
class EdgeTangentError(Exception):
    """
    Base class for every error raised by edgetangent.

    @ivar msg:
        Human readable description.
    @ivar index:
        Optional location of the problem: a vertex index, an (i, j) edge pair
        or a campaign instance number.
    """

    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.msg = msg
        if index is not None:
            self.index = index

    def __str__(self):
        if hasattr(self, "index"):
            return f"At {self.index}: {self.msg}"
        else:
            return str(self.msg)

    def details(self):
        """Return a JSON friendly dict describing the error."""
        out = {"error": type(self).__name__, "message": self.msg}
        if hasattr(self, "index"):
            out["index"] = list(self.index) if isinstance(self.index, tuple) else self.index
        return out


class NumericError(EdgeTangentError):
    pass


class InputError(EdgeTangentError):
    pass


class NotCircumscriptible(EdgeTangentError):
    def __init__(self, msg, index=None, *, expected=None, actual=None):
        super().__init__(msg, index)
        self.expected = expected
        self.actual = actual

    def details(self):
        out = super().details()
        if self.expected is not None:
            out["expected"] = str(self.expected)
        if self.actual is not None:
            out["actual"] = str(self.actual)
        return out


class NotRealizable(EdgeTangentError):
    def __init__(self, msg, index=None, *, margin=None):
        super().__init__(msg, index)
        self.margin = margin

    def details(self):
        out = super().details()
        if self.margin is not None:
            out["margin"] = str(self.margin)
        return out


class DegenerateBorder(EdgeTangentError):
    pass


class DegenerateSimplex(EdgeTangentError):
    pass


class NegativeOG(EdgeTangentError):
    def __init__(self, msg, index=None, *, value=None):
        super().__init__(msg, index)
        self.value = value


class NotEmbeddable(EdgeTangentError):
    def __init__(self, msg, index=None, *, eigenvalue=None):
        super().__init__(msg, index)
        self.eigenvalue = eigenvalue


class SamplingExhausted(EdgeTangentError):
    def __init__(self, msg, index=None, *, draws=None):
        super().__init__(msg, index)
        self.draws = draws


# --------------------------- backend registry ---------------------------------
_backendRegistry = {}


def register_backend(backend, name=None):
    """
    Register the given backend class under name (default: backend.name).

    The first backend registered becomes the default returned by
    get_backend(None).
    """
    if not name:
        name = backend.name
    _backendRegistry[name.lower()] = backend


def get_backend(name=None):
    """
    Return a matching backend class if it exists, or None.

    Backend classes are returned unchanged, so callers may pass either a name
    or a class.
    """
    if isinstance(name, type):
        return name
    if name is None:
        return next(iter(_backendRegistry.values()), None)
    return _backendRegistry.get(name.lower())


def backend_for(name):
    """Like get_backend, but raise NumericError for unknown names."""
    backend = get_backend(name)
    if backend is None:
        raise NumericError(f"No backend found named {name}")
    return backend


def backend_names():
    return sorted(_backendRegistry)
