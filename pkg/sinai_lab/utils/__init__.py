"""The lab utils package."""

from .enums import (
    LawKind,
    ExtremumKind,
    Side,
    Direction,
    SlopeVariant,
    Boundary,
    HitVariant,
    Conditioning,
    LltMode,
    LltMethod,
    Suites,
    Streams,
)
from .rng import BLOCK_SIZE, zigzag, stream_generator, replicate_seed, site_uniforms
from .stats import (
    mean_stderr,
    binomial_stderr,
    ratio_stderr,
    product_stderr,
    combined_stderr,
    within,
    tv_distance,
)
from .file_handler import save_as_json, save_as_text, save_rows_as_csv, read_from_json, to_builtin
from .log_setup import LOG_LEVELS, setup_logging


def __init__():
    """Initialize the lab utils package."""
    pass
