"""Utility functions for bredon-obstruction."""

import hashlib
import logging
import threading
from collections.abc import Callable, Hashable, Iterable
from dataclasses import dataclass
from typing import Any

from .constants import OUTPUT_FORMATS


def get_logger(name: str = "bredon_obstruction", level: int = logging.WARNING) -> logging.Logger:
    """Get or create a logger with the specified name and level.

    Args:
        name: Logger name (default: "bredon_obstruction")
        level: Logging level (default: WARNING)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    if not logger.handlers:
        handler = logging.StreamHandler()
        formatter = logging.Formatter(
            "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
            datefmt="%Y-%m-%dT%H:%M:%S",
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    logger.setLevel(level)
    return logger


def instance_digest(data: bytes) -> str:
    """Digest identifying an instance file in reports."""
    return "sha256:" + hashlib.sha256(data).hexdigest()


def format_vector(values: Iterable[int]) -> str:
    """Compact, byte-stable rendering of an integer vector: ``[1,-2,0]``."""
    return "[" + ",".join(str(v) for v in values) + "]"


@dataclass
class ComputeConfig:
    """Configuration for computations and the command line front end."""

    log_level: int = logging.WARNING
    """Logging level (use logging.DEBUG, logging.INFO, etc.)"""

    workers: int = 1
    """Maximum number of degree-wise cohomology computations running at once."""

    oracle: bool = False
    """Also run the literal compatibility-submodule construction and assert agreement."""

    output_format: str = "text"
    """Report format: "text" or "machine"."""

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output_format must be one of {OUTPUT_FORMATS}")


class BuildOnceCache:
    """Thread-safe memo table; each key is built at most once.

    Builds of different keys may run concurrently. A build may request other
    keys as long as dependencies between keys are acyclic.
    """

    def __init__(self) -> None:
        self._values: dict[Hashable, Any] = {}
        self._key_locks: dict[Hashable, threading.Lock] = {}
        self._lock = threading.Lock()

    def get(self, key: Hashable, build: Callable[[], Any]) -> Any:
        with self._lock:
            if key in self._values:
                return self._values[key]
            key_lock = self._key_locks.setdefault(key, threading.Lock())
        with key_lock:
            with self._lock:
                if key in self._values:
                    return self._values[key]
            value = build()
            with self._lock:
                self._values[key] = value
            return value

    def clear(self) -> None:
        with self._lock:
            self._values.clear()
            self._key_locks.clear()
