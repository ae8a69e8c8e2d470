"""Type definitions for quenched laws and site measures."""
import numpy as np
from pydantic import BaseModel, ConfigDict


class QuenchedDist(BaseModel):
    """Type definition for the exact law of S_n under a fixed environment."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    start: int
    sites: np.ndarray
    mass: np.ndarray
    truncation_loss: float = 0.0

    def prob(self, site: int) -> float:
        """P_omega(S_n = site); zero off the support."""
        position = np.searchsorted(self.sites, site)
        if position < self.sites.size and self.sites[position] == site:
            return float(self.mass[position])
        return 0.0

    def total(self) -> float:
        """Mass left on the support."""
        return float(self.mass.sum())

    def as_dict(self) -> dict[int, float]:
        """Site to probability for every positive entry."""
        return {int(site): float(p) for site, p in zip(self.sites, self.mass) if p > 0.0}


class SiteMeasure(BaseModel):
    """Type definition for a measure on sites, stored as weights * exp(log_scale)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sites: np.ndarray
    weights: np.ndarray
    log_scale: float = 0.0

    def values(self) -> np.ndarray:
        """The measure of every site."""
        return self.weights * np.exp(self.log_scale)

    def at(self, site: int) -> float:
        """The measure of one site; zero off the support."""
        position = np.searchsorted(self.sites, site)
        if position < self.sites.size and self.sites[position] == site:
            return float(self.weights[position] * np.exp(self.log_scale))
        return 0.0

    def total(self) -> float:
        return float(self.values().sum())
