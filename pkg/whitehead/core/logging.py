"""
Logging setup for the CLI.
Library modules only call logging.getLogger(__name__).
"""
import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "INFO") -> None:
    """
    Install a single stderr handler on the package logger.

    Args:
        level: Logging level name (e.g. "INFO", "DEBUG")
    """
    logger = logging.getLogger("whitehead")
    logger.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(level.upper())
    logger.propagate = False
