"""Exception types shared across the package."""


class LawlessError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LawlessError, ValueError):
    """Malformed textual input (word strings, permutations, dyadics)."""


class RangeError(LawlessError, ValueError):
    """An index or point lies outside its admissible range."""


class ArityError(LawlessError, ValueError):
    """A substitution tuple is too short for the word being evaluated."""


class DegreeError(LawlessError, ValueError):
    """Permutations of different degrees were combined."""


class ShapeError(LawlessError, ValueError):
    """Tree automorphisms of different arity or depth were combined."""


class DepthError(LawlessError, ValueError):
    """A vertex string is deeper than the truncation supports."""


class UnknownGeneratorError(LawlessError, KeyError):
    """An unrecognized generator name was requested."""


class MonotonicityError(LawlessError, ValueError):
    """Breakpoints of a piecewise-linear map are not strictly increasing."""


class SlopeError(LawlessError, ValueError):
    """A piecewise-linear segment has a slope that is not a power of two."""


class EndpointError(LawlessError, ValueError):
    """A piecewise-linear map does not fix both endpoints of [0, 1]."""


class CapError(LawlessError, RuntimeError):
    """A defensive iteration cap was exceeded."""


class BudgetError(LawlessError, RuntimeError):
    """An exact computation would exceed its configured budget."""


class EmptyWordError(LawlessError, ValueError):
    """The identity word was passed where a nontrivial word is required."""


class SpaceError(LawlessError, ValueError):
    """The action is too small to hold the required number of distinct points."""


class MoverExhausted(LawlessError, RuntimeError):
    """No stabilizer element could move the point clear of the forbidden set.

    Carries the fixed set, the point and the forbidden set for diagnosis.
    """

    def __init__(self, message, fixed=None, point=None, forbidden=None):
        super().__init__(message)
        self.fixed = fixed
        self.point = point
        self.forbidden = forbidden
