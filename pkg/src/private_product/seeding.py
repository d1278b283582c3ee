"""Module containing seeded random number generation and the default seed read from the environment."""

from __future__ import annotations

import os

import numpy as np

from .errors import InvalidArgumentsException

_SEED_ENV = "PRIVATE_PRODUCT_SEED"
_SEED_BITS = 2**63


def make_rng(seed: int | np.random.Generator | None = None) -> np.random.Generator:
    """Returns a numpy Generator, passing an existing one through unchanged."""

    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn_seeds(rng: np.random.Generator, n: int) -> list[int]:
    """Draws n child seeds, so each consumer owns an independent, reproducible stream."""

    return [int(s) for s in rng.integers(_SEED_BITS, size=n)]


def default_seed() -> int:
    value = os.environ.get(_SEED_ENV)
    if value is None or value == "":
        return 0

    try:
        return int(value)
    except ValueError as e:
        raise InvalidArgumentsException("Default seed from the environment is not an integer.", env=_SEED_ENV, value=value) from e
