"""Console logging with colorlog."""
import logging

import colorlog

LOG_FORMAT = "%(log_color)s%(asctime)s %(levelname)-8s%(reset)s %(name)s: %(message)s"
LOG_LEVELS = ("debug", "info", "warning", "error")


def setup_logging(level: str = "info") -> None:
    """Attach a colored stream handler to the package logger.

    Args:
        level (str): One of ``debug``, ``info``, ``warning`` or ``error``.
    """
    logger = logging.getLogger("sinai_lab")
    logger.setLevel(getattr(logging, level.upper()))
    if any(getattr(handler, "_sinai_lab", False) for handler in logger.handlers):
        return
    handler = colorlog.StreamHandler()
    handler.setFormatter(
        colorlog.ColoredFormatter(
            LOG_FORMAT,
            log_colors={
                "DEBUG": "cyan",
                "INFO": "green",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "bold_red",
            },
        )
    )
    handler._sinai_lab = True
    logger.addHandler(handler)
