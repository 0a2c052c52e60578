from . import base


# ------------------------ Abstract class for backends -------------------------
class Backend:
    """
    Arithmetic rules (coercion, comparison, square roots, elimination) for one
    ordered field of scalars.

    Backend subclasses are not meant to be instantiated, all methods should
    be classmethods.  Scalars themselves are plain Python numbers; the backend
    decides which number type is admissible and how it is handled.

    @cvar name:
        The lowercase registry name of the backend ("exact" or "float").
    @cvar description:
        A brief description of the number system.
    @cvar exact:
        True if arithmetic is exact, in which case equality tests are
        structural and square roots are refused.
    """

    name = ""
    description = ""
    exact = False

    def __init__(self):
        err = "Backend subclasses are not meant to be instantiated"
        raise base.NumericError(err)

    @classmethod
    def coerce(cls, value):
        """Return value as a scalar of this backend, or raise NumericError."""
        raise base.NumericError(f"No coerce defined for {cls.name}")

    @classmethod
    def constant(cls, numerator, denominator=1):
        """The rational constant numerator/denominator in this backend."""
        raise base.NumericError(f"No constant defined for {cls.name}")

    @classmethod
    def zero(cls):
        return cls.constant(0)

    @classmethod
    def one(cls):
        return cls.constant(1)

    @classmethod
    def is_close(cls, a, b, tolerance=base.REL_TOL, scale=None):
        return a == b

    @classmethod
    def sqrt(cls, value):
        raise base.NumericError(f"The {cls.name} backend keeps squared quantities and refuses square roots")

    @classmethod
    def determinant(cls, order, entries, stats=None):
        """Determinant of the row-major order x order matrix given by entries."""
        raise base.NumericError(f"No determinant defined for {cls.name}")

    @classmethod
    def format(cls, value):
        """Return the document representation of value."""
        return value

    @classmethod
    def parse(cls, text):
        """Turn a document value (number or string) into a scalar."""
        return cls.coerce(text)
