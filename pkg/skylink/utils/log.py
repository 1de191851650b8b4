import logging

from rich.logging import RichHandler

_CONFIGURED = False


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def configure_logging(level: str = "INFO") -> None:
    """Install a single RichHandler on the package logger (idempotent)."""
    global _CONFIGURED
    root = logging.getLogger("skylink")
    root.setLevel(level.upper())
    if _CONFIGURED:
        return
    handler = RichHandler(show_path=False, rich_tracebacks=True)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(handler)
    root.propagate = False
    _CONFIGURED = True
