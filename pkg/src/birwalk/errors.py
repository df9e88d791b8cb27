"""Error taxonomy shared across the package.

Every refusal the library makes is a typed exception, so callers (and the
CLI exit-code logic) can tell an expected degeneracy abort apart from a
broken invariant.
"""


class BirwalkError(Exception):
    """Base class for all package errors."""


class NonExactDivision(BirwalkError):
    """Polynomial division left a remainder where exactness was required."""


class DegenerateComposition(BirwalkError):
    """A composed map collapsed to a constant triple and defines no map."""


class IndeterminatePoint(BirwalkError):
    """A map was evaluated at one of its base points."""


class MissingInverse(BirwalkError):
    """An operation needed the inverse components and none were stored."""


class SamplingExhausted(BirwalkError):
    """Rejection sampling hit its retry budget without a valid draw."""


class DegenerateConfiguration(BirwalkError):
    """A point collision or contracted-curve hit that the exact model refuses."""


class CurveContracted(BirwalkError):
    """A curve pullback stripped down to a constant: the curve is contracted."""


class NotTimelike(BirwalkError):
    """Hyperbolic distance requested for a class of non-positive self-intersection."""


class ExactLengthCap(BirwalkError):
    """An exact-mode walk tried to grow past the configured reduced-length cap."""


class IncompatibleArtifacts(BirwalkError):
    """Two run artifacts cannot be compared (different generator tuples or modes)."""
