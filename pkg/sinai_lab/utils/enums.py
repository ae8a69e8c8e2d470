"""Enums for the Sinai walk lab."""
from enum import Enum


class LawKind(Enum):
    """Environment law families."""

    TWO_POINT = "two-point"
    LOGISTIC_UNIFORM = "logistic-uniform"


class ExtremumKind(Enum):
    """Kinds of h-extrema."""

    MIN = "min"
    MAX = "max"


class Side(Enum):
    """Side convention of an h-extremum."""

    LEFT = "left"
    RIGHT = "right"


class Direction(Enum):
    """Slope directions."""

    UPWARD = "upward"
    DOWNWARD = "downward"


class SlopeVariant(Enum):
    """Canonical slope variants."""

    PLAIN = "plain"
    STARRED = "starred"


class Boundary(Enum):
    """Boundary modes of the quenched dynamic programme."""

    FULL = "full"
    ABSORBING = "absorbing"


class HitVariant(Enum):
    """Hitting time variants."""

    HIT = "hit"
    RETURN = "return"


class Conditioning(Enum):
    """Conditioning events of a path started at 0: stay >= 0 (weak) or > 0 (strict)."""

    WEAK = "weak"
    STRICT = "strict"


class LltMode(Enum):
    """Local limit theorem prediction modes."""

    WALK = "walk"
    BOTTOM = "bottom"


class LltMethod(Enum):
    """Estimators of the annealed point mass of S_n."""

    DIRECT = "direct"
    PROXY = "proxy"
    DP = "dp"


class Suites(Enum):
    """Verification suites."""

    DENSITY = "density"
    BH_LLT = "bh-llt"
    RENEWAL = "renewal"
    SLOPES = "slopes"
    CONSTANTS = "constants"
    EVENTS = "events"
    COUPLING = "coupling"
    SINAI_LLT = "sinai-llt"
    ALL = "all"


class Streams(Enum):
    """Tags separating the random streams derived from one master seed."""

    ENVIRONMENT = 0
    WALK = 1
    COUPLING_WALK = 2
    COUPLING_REFLECTED = 3
    RACE = 4
    REJECTION = 5
    BOTTOM = 6
    SLOPES = 7
    EVENTS = 8
    COUPLING = 9
    LLT = 10
    SPITZER = 11
