"""Type definitions for h-extrema decompositions and slopes."""
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..exceptions import RangeError
from ..utils import Direction, ExtremumKind, Side
from .environment import PotentialWindow


class ExtremumRecord(BaseModel):
    """Type definition for one certified h-extremum x_k."""

    model_config = ConfigDict(frozen=True)

    position: int
    kind: ExtremumKind
    value: float
    index: int


class Decomposition(BaseModel):
    """Type definition for certified left or right h-extrema of a window."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    h: float
    side: Side
    extrema: list[ExtremumRecord]
    window: PotentialWindow

    @property
    def k_min(self) -> int:
        return self.extrema[0].index

    @property
    def k_max(self) -> int:
        return self.extrema[-1].index

    def extremum(self, k: int) -> ExtremumRecord:
        """Return x_k.

        Raises:
            RangeError: If x_k was not certified.
        """
        if not self.extrema or k < self.k_min or k > self.k_max:
            raise RangeError("Extremum x_" + str(k) + " is not certified")
        return self.extrema[k - self.k_min]

    def position(self, k: int) -> int:
        """Return the site of x_k."""
        return self.extremum(k).position

    def to_dict(self) -> dict:
        """Return the JSON form ``{h, side, extrema}``."""
        return {
            "h": self.h,
            "side": self.side.value,
            "extrema": [
                {
                    "k": record.index,
                    "position": record.position,
                    "kind": record.kind.value,
                    "value": record.value,
                }
                for record in self.extrema
            ],
        }


class SlopeView(BaseModel):
    """Type definition for a slope t(0) = 0, ..., t(length)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    direction: Direction
    h: Optional[float] = None

    @property
    def length(self) -> int:
        return int(self.values.size - 1)

    @property
    def height(self) -> float:
        return float(self.values.max() - self.values.min())

    @property
    def excess(self) -> Optional[float]:
        """H - h when the slope comes from a decomposition."""
        if self.h is None:
            return None
        return self.height - self.h


class LadderEpochs(BaseModel):
    """Type definition for weak descending ladder epochs up to the first h-rise."""

    model_config = ConfigDict(frozen=True)

    epochs: list[int]
    heights: list[float]
    L: int
    m1_star: int
