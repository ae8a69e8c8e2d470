"""Type definitions for environment laws and potential windows."""
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..const import DEFAULT_SITE_CAP
from ..exceptions import RangeError
from ..utils import LawKind


class Lattice(BaseModel):
    """Type definition for the lattice descriptor of log rho."""

    model_config = ConfigDict(frozen=True)

    span: float
    shift: float


class EnvLaw(BaseModel):
    """Type definition for an admissible law of omega_0."""

    model_config = ConfigDict(frozen=True)

    kind: LawKind
    param: float
    epsilon0: float
    sigma: float
    c0: float
    lattice: Optional[Lattice] = None
    unit: Optional[float] = None

    def to_dict(self) -> dict:
        """Return the config form ``{"kind", "param"}``."""
        return {"kind": self.kind.value, "param": self.param}


class PotentialWindow(BaseModel):
    """Type definition for a realization of (omega_x, V(x)) on [lo, hi].

    ``omega[i]`` and ``V[i]`` belong to site ``lo + i``. A window with a master
    seed is extensible; injected windows are fixed. A reflected window shows
    V(-x) of the window with the same seed.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    law: Optional[EnvLaw]
    master_seed: Optional[int]
    lo: int
    hi: int
    omega: np.ndarray
    V: np.ndarray
    reflected: bool = False
    site_cap: int = DEFAULT_SITE_CAP

    @property
    def extensible(self) -> bool:
        """Whether new sites can be generated."""
        return self.master_seed is not None and self.law is not None

    @property
    def sites(self) -> np.ndarray:
        """All sites of the window."""
        return np.arange(self.lo, self.hi + 1)

    def contains(self, lo: int, hi: int) -> bool:
        """Whether ``[lo, hi]`` lies inside the window."""
        return self.lo <= lo and hi <= self.hi

    def index(self, site: int) -> int:
        """Array index of ``site``.

        Raises:
            RangeError: If the site is outside the window.
        """
        if site < self.lo or site > self.hi:
            raise RangeError(
                "Site " + str(site) + " outside window [" + str(self.lo) + ", " + str(self.hi) + "]"
            )
        return site - self.lo

    def v(self, site: int) -> float:
        """Potential at ``site``."""
        return float(self.V[self.index(site)])

    def omega_at(self, site: int) -> float:
        """Right-step probability at ``site``."""
        return float(self.omega[self.index(site)])

    def segment(self, lo: int, hi: int) -> np.ndarray:
        """Potential values on ``[lo, hi]``."""
        return self.V[self.index(lo):self.index(hi) + 1]
