"""Controller module for the Sinai walk lab."""
import logging
import os

from .const import EXIT_ASSERTION_FAILED, EXIT_OK, SCHEMA_VERSION
from .envgen import make_env_law
from .experiments import run_suite
from .models import RunConfig
from .utils import Suites, save_as_json, save_rows_as_csv

_LOGGER = logging.getLogger(__name__)


class Controller:
    """Controller class running the verification suites of one config."""

    def __init__(self, config: RunConfig):
        """Initialize the Controller object.

        Args:
            config (RunConfig): The validated run configuration.
        """
        self.config = config
        self.law = make_env_law(config.law.kind, config.law.param)

    def get_suites(self) -> list[Suites]:
        """Return the suites named by the config, in run order."""
        if self.config.suite == Suites.ALL:
            return [suite for suite in Suites if suite != Suites.ALL]
        return [self.config.suite]

    def run_suite(self, suite: Suites) -> dict:
        """Run one suite and return its result document.

        Returns:
            dict: ``{schema, name, law, params, budgets, seed, rows, checks, pass}``.
        """
        params = self.config.suite_params(suite)
        body = run_suite(suite, self.law, self.config.seed, params, self.config.threads, self.config.budgets)
        return {
            "schema": SCHEMA_VERSION,
            "name": body["name"],
            "law": self.law.to_dict(),
            "params": params,
            "budgets": self.config.budgets.model_dump(),
            "seed": self.config.seed,
            "rows": body["rows"],
            "checks": body["checks"],
            "pass": body["pass"],
        }

    def write_result(self, document: dict) -> None:
        """Write ``<out>/<name>.json`` and ``<out>/<name>.csv``."""
        base = os.path.join(self.config.out, document["name"])
        save_as_json(document, base + ".json")
        save_rows_as_csv(document["rows"], base + ".csv")
        _LOGGER.debug("Wrote %s.json and %s.csv", base, base)

    def run(self) -> int:
        """Run every suite, write the results and return the exit code."""
        passed = True
        for suite in self.get_suites():
            document = self.run_suite(suite)
            self.write_result(document)
            passed &= document["pass"]
        return EXIT_OK if passed else EXIT_ASSERTION_FAILED
