"""Constants for sinai_lab."""
from logging import Logger, getLogger

LOGGER: Logger = getLogger(__package__)

NAME = "Sinai walk lab"
DOMAIN = "sinai_lab"
VERSION = "0.1.0"
SCHEMA_VERSION = 1

DEFAULT_SITE_CAP = 10**7
DEFAULT_REJECTION_CAP = 10**6
DEFAULT_FLANK = 1
DEFAULT_TOL = 1e-10

# Replicates per work unit; fixed so merges do not depend on the thread count.
CHUNK_SIZE = 256

EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_ASSERTION_FAILED = 2

STDERR_WIDTH = 3.0
