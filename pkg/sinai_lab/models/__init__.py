"""The lab type definitions."""

from .environment import Lattice, EnvLaw, PotentialWindow
from .decomposition import ExtremumRecord, Decomposition, SlopeView, LadderEpochs
from .quenched import QuenchedDist, SiteMeasure
from .results import (
    DensityEval,
    CapExceeded,
    WalkResult,
    CouplingRecord,
    ConditionedPath,
    EstimateResult,
    EventParams,
    EventProfile,
    EnvironmentSurvey,
)
from .config import LawSpec, Budgets, RunConfig

def __init__():
    """Initialize the lab type definitions."""
    pass
