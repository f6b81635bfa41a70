"""Exception hierarchy shared by every module of the package."""


class SteklovError(Exception):
    """Base class for all errors raised by :mod:`steklov`."""


class DomainError(SteklovError, ValueError):
    """An argument lies outside the domain of a function."""


class AngleSumError(SteklovError, ValueError):
    pass


class DegenerateError(SteklovError, ValueError):
    pass


class RangeError(SteklovError, ValueError):
    """Constructor parameter outside its admissible range."""


class GeometryError(SteklovError):
    """No convex realization exists for the requested data."""


class CurvedEdgeError(SteklovError):
    pass


class FamilyError(SteklovError):
    """Polynomial structure is inconsistent with the asserted polygon family."""


class NoSolutionError(SteklovError):
    pass


class AmbiguousError(SteklovError):
    """Reconstruction hit one of the excluded length coincidences.

    ``case`` names the coincidence and ``candidates`` holds whatever
    polygons were still found so callers can inspect them.
    """

    def __init__(self, message, case, candidates=()):
        super().__init__(message)
        self.case = case
        self.candidates = tuple(candidates)


class ResolutionError(SteklovError, ValueError):
    """Root scan step too coarse for the highest frequency present."""


class HorizonMismatch(SteklovError, ValueError):
    pass


class SchemaError(SteklovError, ValueError):
    """Malformed JSON input."""
