"""Exception types shared across the package."""


class NonrecipError(Exception):
    """Base class for all domain errors raised by this package."""


class OrthogonalStates(NonrecipError):
    """Relative phase between (nearly) orthogonal states is undefined."""


class PathNotClosed(NonrecipError):
    """A closed loop on the sphere was required but not provided."""


class DegeneratePolygon(NonrecipError):
    """Spherical polygon has too few distinct vertices to bound an area."""


class PoleSingularity(NonrecipError):
    """Gauge field evaluated on the coordinate singularity at a pole."""


class InvalidPort(NonrecipError):
    """Circulator port index outside {1, 2, 3}."""


class EmptyTally(NonrecipError):
    """Statistical test invoked on a tally with no counts."""


class DegenerateModel(NonrecipError):
    """Expected cell counts too small for a chi-square approximation."""


class ConfigError(NonrecipError):
    """Scenario configuration failed to parse or validate."""
