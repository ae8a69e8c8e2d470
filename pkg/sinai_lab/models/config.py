"""Type definitions for validated run configurations."""
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict

from ..const import DEFAULT_REJECTION_CAP, DEFAULT_SITE_CAP, SCHEMA_VERSION
from ..utils import LawKind, Suites


class LawSpec(BaseModel):
    """Type definition for the law entry of a config."""

    model_config = ConfigDict(frozen=True)

    kind: LawKind
    param: float


class Budgets(BaseModel):
    """Type definition for the site and rejection caps."""

    model_config = ConfigDict(frozen=True)

    sites: int = DEFAULT_SITE_CAP
    rejections: int = DEFAULT_REJECTION_CAP


class RunConfig(BaseModel):
    """Type definition for a run configuration."""

    model_config = ConfigDict(frozen=True)

    schema_version: int = SCHEMA_VERSION
    suite: Suites
    law: LawSpec
    seed: int
    threads: int = 1
    out: str = "results"
    budgets: Budgets = Budgets()
    log_level: str = "info"
    params: dict[str, Any] = {}
    source: Optional[str] = None

    def suite_params(self, suite: Suites) -> dict[str, Any]:
        """Merged parameters of one suite."""
        if self.suite == Suites.ALL:
            return self.params[suite.value]
        return self.params
