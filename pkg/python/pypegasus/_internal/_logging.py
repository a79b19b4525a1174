"""Internal logging helpers."""

from __future__ import annotations

import logging
from contextvars import ContextVar
from typing import Any, Protocol

# Default logger
_logger: logging.Logger | Any = logging.getLogger("pypegasus")

# Run ID so every line of one experiment can be grepped together
_run_id: ContextVar[str | None] = ContextVar("run_id", default=None)


class LoggerProtocol(Protocol):
    """Protocol for custom loggers (structlog, Powertools, etc)."""

    def debug(self, msg: str, **kwargs: Any) -> None: ...
    def info(self, msg: str, **kwargs: Any) -> None: ...
    def warning(self, msg: str, **kwargs: Any) -> None: ...
    def error(self, msg: str, **kwargs: Any) -> None: ...


def set_logger(logger: LoggerProtocol | logging.Logger) -> None:
    """Set a custom logger for pypegasus.

    Works with stdlib logging, structlog, AWS Lambda Powertools Logger, etc.

    Args:
        logger: Any logger with debug/info/warning/error methods.

    Example:
        >>> import logging
        >>> logging.getLogger("pypegasus").setLevel(logging.DEBUG)

        >>> # Or with structlog
        >>> import structlog
        >>> from pypegasus import set_logger
        >>> set_logger(structlog.get_logger())
    """
    global _logger
    _logger = logger


def get_logger() -> logging.Logger | Any:
    """Get the current logger."""
    return _logger


def set_run_id(run_id: str | None) -> None:
    """Set the run ID attached to every log record.

    The CLI sets it to ``<command>-<seed>``.

    Args:
        run_id: Any string, or None to clear it.

    Example:
        >>> from pypegasus import set_run_id
        >>> set_run_id("gridworld-42")
    """
    _run_id.set(run_id)


def get_run_id() -> str | None:
    """Get the current run ID."""
    return _run_id.get()


def _emit(level: str, msg: str, kwargs: dict[str, Any]) -> None:
    run_id = get_run_id()
    if run_id:
        kwargs["run_id"] = run_id

    method = getattr(_logger, level)
    if kwargs:
        try:
            method(msg, extra=kwargs)
        except TypeError:
            # structlog and Powertools take fields as **kwargs
            method(msg, **kwargs)
    else:
        method(msg)


def _log_operation(
    operation: str,
    target: str,
    duration_ms: float,
    evaluations: int | None = None,
    best: float | None = None,
    extra: dict[str, Any] | None = None,
) -> None:
    """Log a finished operation at INFO level.

    Internal function called at the end of each search or experiment.
    """
    parts = [f"{operation} target={target} duration_ms={duration_ms:.1f}"]

    if evaluations is not None:
        parts.append(f"evaluations={evaluations}")
    if best is not None:
        parts.append(f"best={best:.6g}")

    _emit("info", " ".join(parts), dict(extra or {}))


def _log_debug(operation: str, msg: str, **kwargs: Any) -> None:
    """Log at DEBUG level."""
    _emit("debug", f"{operation} {msg}", kwargs)


def _log_warning(operation: str, msg: str, **kwargs: Any) -> None:
    """Log at WARNING level (early stops, failed fidelity checks)."""
    _emit("warning", f"{operation} {msg}", kwargs)


def _log_error(operation: str, msg: str, **kwargs: Any) -> None:
    """Log at ERROR level."""
    _emit("error", f"{operation} {msg}", kwargs)
