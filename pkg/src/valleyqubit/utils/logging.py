import logging
import sys

PACKAGE_LOGGER = "valleyqubit"


def get_logger(name: str = __name__) -> logging.Logger:
    logger = logging.getLogger(name)
    if not logger.handlers and not name.startswith(PACKAGE_LOGGER + "."):
        handler = logging.StreamHandler(sys.stderr)
        formatter = logging.Formatter(
            "[%(asctime)s] %(levelname)s in %(module)s: %(message)s"
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger


def configure_logging(level: str | int = logging.INFO) -> logging.Logger:
    """Set the level of the package logger; child loggers propagate to it."""
    root = get_logger(PACKAGE_LOGGER)
    root.setLevel(level)
    return root
