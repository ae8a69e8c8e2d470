"""Run configuration: voluptuous schemas and suite default merging."""
import copy
import logging
import os

import voluptuous as vol
from deepmerge import Merger

from .const import SCHEMA_VERSION
from .exceptions import ConfigError
from .experiments import SUITE_DEFAULTS
from .models import RunConfig
from .utils import LOG_LEVELS, LawKind, Suites, read_from_json

_LOGGER = logging.getLogger(__name__)

# Lists in user params replace the defaults instead of extending them.
PARAMS_MERGER = Merger([(dict, ["merge"]), (list, ["override"])], ["override"], ["override"])

Positive = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))


def _integer(value):
    """Accept ints but not bools, which Python counts as ints."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise vol.Invalid("expected int")
    return value


Count = vol.All(_integer, vol.Range(min=1))
Site = vol.All(_integer)

EVENT_SPEC = vol.Any(
    vol.In(["strict", "desk"]),
    {
        vol.Optional("preset"): vol.In(["strict", "desk"]),
        vol.Optional("c1"): vol.Coerce(float),
        vol.Optional("c2"): vol.Coerce(float),
        vol.Optional("delta1"): vol.Coerce(float),
        vol.Optional("slope_radius"): Count,
        vol.Optional("extrema_radius"): Count,
        vol.Optional("strict"): bool,
    },
)

SUITE_SCHEMAS = {
    Suites.DENSITY: vol.Schema(
        {
            vol.Optional("from"): vol.Coerce(float),
            vol.Optional("to"): vol.Coerce(float),
            vol.Optional("step"): Positive,
            vol.Optional("tol"): Positive,
        }
    ),
    Suites.BH_LLT: vol.Schema(
        {
            vol.Optional("h_grid"): [Positive],
            vol.Optional("N"): Count,
            vol.Optional("x_grid"): vol.Any(None, [Site]),
            vol.Optional("D_cap"): Positive,
            vol.Optional("disagreement_h_grid"): [Positive],
            vol.Optional("disagreement_N"): Count,
            vol.Optional("disagreement_cap"): Positive,
        }
    ),
    Suites.RENEWAL: vol.Schema(
        {
            vol.Optional("h"): Positive,
            vol.Optional("N"): Count,
            vol.Optional("x_grid"): [Site],
        }
    ),
    Suites.SLOPES: vol.Schema(
        {
            vol.Optional("h"): Positive,
            vol.Optional("ratio_h"): Positive,
            vol.Optional("N"): Count,
            vol.Optional("delta_multiples"): [Positive],
            vol.Optional("excess_spread"): Positive,
            vol.Optional("conditioned_h"): Positive,
            vol.Optional("conditioned_N"): Count,
        }
    ),
    Suites.CONSTANTS: vol.Schema(
        {
            vol.Optional("h_grid"): [Positive],
            vol.Optional("N"): Count,
            vol.Optional("x_grid"): [Count],
            vol.Optional("positive_range"): vol.All([vol.Coerce(float)], vol.Length(min=2, max=2)),
            vol.Optional("spitzer_tolerance"): Positive,
        }
    ),
    Suites.EVENTS: vol.Schema(
        {
            vol.Optional("n_grid"): [vol.All(_integer, vol.Range(min=3))],
            vol.Optional("N"): Count,
            vol.Optional("z"): Site,
            vol.Optional("events"): EVENT_SPEC,
        }
    ),
    Suites.COUPLING: vol.Schema(
        {
            vol.Optional("n"): vol.All(_integer, vol.Range(min=3)),
            vol.Optional("N"): Count,
            vol.Optional("z"): Site,
            vol.Optional("events"): EVENT_SPEC,
            vol.Optional("max_environments"): Count,
        }
    ),
    Suites.SINAI_LLT: vol.Schema(
        {
            vol.Optional("proxy_n_grid"): [vol.All(_integer, vol.Range(min=3))],
            vol.Optional("proxy_N"): Count,
            vol.Optional("z_grid"): [Site],
            vol.Optional("dp_n"): vol.All(_integer, vol.Range(min=3)),
            vol.Optional("dp_N"): Count,
            vol.Optional("dp_z_grid"): [Site],
            vol.Optional("events"): EVENT_SPEC,
        }
    ),
}

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Required("schema"): vol.In([SCHEMA_VERSION]),
        vol.Required("suite"): vol.In([suite.value for suite in Suites]),
        vol.Required("law"): {
            vol.Required("kind"): vol.In([kind.value for kind in LawKind]),
            vol.Required("param"): vol.Coerce(float),
        },
        vol.Required("seed"): vol.All(_integer, vol.Range(min=0, max=2**64 - 1)),
        vol.Optional("threads"): Count,
        vol.Optional("out"): str,
        vol.Optional("budgets"): {
            vol.Optional("sites"): Count,
            vol.Optional("rejections"): Count,
        },
        vol.Optional("log_level"): vol.In(LOG_LEVELS),
        vol.Optional("params"): dict,
    }
)


def _describe(error: vol.Invalid) -> str:
    path = "".join("[" + repr(part) + "]" for part in error.path)
    return error.error_message + " @ config" + path


def _validate(schema: vol.Schema, data, prefix: list):
    try:
        return schema(data)
    except vol.MultipleInvalid as exception:
        first = exception.errors[0]
        first.path = prefix + list(first.path)
        raise ConfigError(_describe(first)) from exception
    except vol.Invalid as exception:
        exception.path = prefix + list(exception.path)
        raise ConfigError(_describe(exception)) from exception


def merged_suite_params(suite: Suites, params: dict, prefix: list) -> dict:
    """Validate a suite's params and merge them over its defaults."""
    checked = _validate(SUITE_SCHEMAS[suite], params or {}, prefix)
    return PARAMS_MERGER.merge(copy.deepcopy(SUITE_DEFAULTS[suite]), checked)


def parse_config(data: dict, source: str = None) -> RunConfig:
    """Validate a decoded config document.

    Args:
        data (dict): The decoded JSON.
        source (str): Where the document came from, for messages.

    Returns:
        RunConfig: The validated configuration with suite defaults merged in.

    Raises:
        ConfigError: On a missing or unknown key, or an invalid value.
    """
    if not isinstance(data, dict):
        raise ConfigError("Config must be a JSON object")
    checked = _validate(CONFIG_SCHEMA, data, [])
    suite = Suites(checked["suite"])
    params = checked.get("params", {})
    if suite == Suites.ALL:
        extra = sorted(set(params) - {entry.value for entry in SUITE_SCHEMAS})
        if extra:
            raise ConfigError("extra keys not allowed @ config['params'][" + repr(extra[0]) + "]")
        merged = {
            entry.value: merged_suite_params(entry, params.get(entry.value), ["params", entry.value])
            for entry in SUITE_SCHEMAS
        }
    else:
        merged = merged_suite_params(suite, params, ["params"])
    _LOGGER.debug("Validated config for suite %s", suite.value)
    return RunConfig(
        suite=suite,
        law=checked["law"],
        seed=checked["seed"],
        threads=checked.get("threads", os.cpu_count() or 1),
        out=checked.get("out", "results"),
        budgets=checked.get("budgets", {}),
        log_level=checked.get("log_level", "info"),
        params=merged,
        source=source,
    )


def load_config(file_path: str, threads: int = None, out: str = None, log_level: str = None) -> RunConfig:
    """Read and validate a config file, applying command-line overrides.

    Raises:
        ResultIoError: If the file cannot be read or decoded.
        ConfigError: If the document is invalid.
    """
    data = read_from_json(file_path)
    config = parse_config(data, source=file_path)
    overrides = {}
    if threads is not None:
        if threads < 1:
            raise ConfigError("threads must be at least 1, got " + str(threads))
        overrides["threads"] = threads
    if out is not None:
        overrides["out"] = out
    if log_level is not None:
        overrides["log_level"] = log_level
    return config.model_copy(update=overrides) if overrides else config
