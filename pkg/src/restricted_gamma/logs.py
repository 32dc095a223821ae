"""structlog setup shared by the CLI and worker processes."""

import logging
import sys

import structlog

LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
}


def configure_logging(level: int = logging.WARNING, pretty: bool = False) -> None:
    """
    Configure structlog to write to stderr.

    JSON lines by default; ``pretty`` switches to the console renderer.
    """
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer() if pretty else structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def level_from(verbose: int, configured: str) -> int:
    """-v and -vv win over the configured level name."""
    if verbose == 1:
        return logging.INFO
    if verbose >= 2:
        return logging.DEBUG
    return LEVELS.get(configured.upper(), logging.WARNING)
