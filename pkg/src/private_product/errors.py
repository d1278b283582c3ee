"""Module containing exceptions raised while building, running and auditing the private product protocol."""

from __future__ import annotations

import logging
import sys

from contextlib import contextmanager
from typing import Generator, TextIO

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_INCONSISTENT = 2
EXIT_NO_SOLUTION = 3


class PrivateProductException(Exception):
    """Base class for all exceptions raised by the library."""

    def __init__(self, message: str, **kwargs) -> None:
        self.message = message
        self.params = f"{kwargs=}"

        super().__init__(message, self.params)


class InvalidArgumentsException(PrivateProductException):
    """Exception which is thrown when provided argument is not a valid parameter of the operation."""


class InvalidEncodingException(InvalidArgumentsException):
    """Exception which is thrown when an encoding table is not a bijection on F_p x F_p or cannot be decoded."""


class PreconditionException(InvalidArgumentsException):
    """Exception which is thrown when a group action is applied to an encoding outside of the set it acts on."""


class ConsistencyException(PrivateProductException):
    """Exception which is thrown when two independent computations of the same quantity disagree."""


@contextmanager
def exit_code_handler(stderr: TextIO | None = None) -> Generator[None, None, None]:
    """
    Translate library exceptions into process exit codes.

    Invalid input exits with 1, internal inconsistencies exit with 2. The message is written to standard error.
    """

    stream = stderr if stderr is not None else sys.stderr

    try:
        yield
    except InvalidArgumentsException as e:
        _LOGGER.debug("Invalid input: %s %s", e.message, e.params)
        print(f"error: {e.message}", file=stream)
        raise SystemExit(EXIT_INVALID_INPUT) from e
    except ConsistencyException as e:
        _LOGGER.debug("Consistency failure: %s %s", e.message, e.params)
        print(f"internal consistency failure: {e.message} {e.params}", file=stream)
        raise SystemExit(EXIT_INCONSISTENT) from e
