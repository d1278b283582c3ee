"""Module containing binary private set intersection and dot product built from independent protocol instances."""

from __future__ import annotations

import logging

from typing import Iterable

import anyio
import numpy as np

from .errors import InvalidArgumentsException, PrivateProductException
from .protocol import Channel, ChannelLog, MessageKind, Mode, Party, ProtocolConfig, Transcript, async_run_protocol
from .seeding import make_rng, spawn_seeds

_LOGGER = logging.getLogger(__name__)


class IntersectionResult:
    """Elements Charlie learns are in both sets, with one transcript per universe element."""

    def __init__(self, elements: list[int], transcripts: list[Transcript]) -> None:
        self.elements = elements
        self.transcripts = transcripts

    def as_dict(self) -> dict:
        return {
            "intersection": self.elements,
            "components": [t.as_dict() for t in self.transcripts],
        }


class DotProductResult:
    """Dot product Charlie decodes, the slot permutation and one transcript per slot."""

    def __init__(self, value: int, permutation: list[int], transcripts: list[Transcript], channel_log: ChannelLog) -> None:
        self.value = value
        self.permutation = permutation
        self.transcripts = transcripts
        self.channel_log = channel_log

    @property
    def labels(self) -> list[tuple[int, int]]:
        """Labels in the order Charlie receives them."""

        return [t.measured_label.as_tuple() for t in self.transcripts]

    def as_dict(self) -> dict:
        return {
            "dot_product": self.value,
            "permutation": self.permutation,
            "components": [t.as_dict() for t in self.transcripts],
        }


def _require_binary(config: ProtocolConfig) -> None:
    if config.p != 2:
        raise InvalidArgumentsException("Set intersection and dot product run over F_2 only.", p=config.p)


def _bits(vector: Iterable[int], name: str) -> list[int]:
    bits = [int(v) for v in vector]
    if any(v not in (0, 1) for v in bits):
        raise InvalidArgumentsException("Vector entries must be 0 or 1.", name=name, vector=bits)
    return bits


async def _async_run_all(pairs: list[tuple[int, int]], config: ProtocolConfig, seeds: list[int]) -> list[Transcript]:
    # each instance owns its seed, so results do not depend on scheduling
    transcripts: list[Transcript | None] = [None] * len(pairs)
    failures: dict[int, PrivateProductException] = {}

    async def run(k: int) -> None:
        a, b = pairs[k]
        try:
            transcripts[k] = await async_run_protocol(a, b, config, seeds[k])
        except PrivateProductException as e:
            failures[k] = e

    async with anyio.create_task_group() as tg:
        for k in range(len(pairs)):
            tg.start_soon(run, k)

    # the failure of the lowest failing component is raised as is
    if failures:
        raise failures[min(failures)]

    return transcripts


async def async_psi_intersect(
    set_a: Iterable[int],
    set_b: Iterable[int],
    universe_size: int,
    config: ProtocolConfig,
    rng: np.random.Generator | int | None = None,
) -> IntersectionResult:
    """
    Runs one binary product per element of the universe {1, ..., m}; an element is in the intersection iff its product is 1.
    """

    _require_binary(config)
    if universe_size < 1:
        raise InvalidArgumentsException("Universe must have at least one element.", universe_size=universe_size)

    set_a, set_b = set(set_a), set(set_b)
    outside = sorted(e for e in set_a | set_b if not 1 <= e <= universe_size)
    if outside:
        raise InvalidArgumentsException("Set elements must lie in the universe.", elements=outside, universe_size=universe_size)

    elements = range(1, universe_size + 1)
    pairs = [(int(e in set_a), int(e in set_b)) for e in elements]
    transcripts = await _async_run_all(pairs, config, spawn_seeds(make_rng(rng), universe_size))

    intersection = [e for e, t in zip(elements, transcripts) if t.product == 1]

    _LOGGER.debug("Set intersection over %d elements has %d elements", universe_size, len(intersection))
    return IntersectionResult(intersection, transcripts)


async def async_dot_product(
    vec_a: Iterable[int],
    vec_b: Iterable[int],
    config: ProtocolConfig,
    rng: np.random.Generator | int | None = None,
    permutation: list[int] | None = None,
) -> DotProductResult:
    """
    Computes the dot product of two binary vectors as the number of (1, 1) labels Charlie measures.

    Alice draws a permutation of the indices and tells Bob; slot k carries index permutation[k], so Charlie cannot tell
    which indices overlap. permutation replaces Alice's draw and exists for tests; the per-slot encodings stay fixed by rng.
    """

    _require_binary(config)
    vec_a, vec_b = _bits(vec_a, "a"), _bits(vec_b, "b")
    if len(vec_a) != len(vec_b):
        raise InvalidArgumentsException("Vectors must have the same length.", a=len(vec_a), b=len(vec_b))

    m = len(vec_a)
    permutation_seed, *seeds = spawn_seeds(make_rng(rng), m + 1)

    if permutation is None:
        permutation = [int(k) for k in make_rng(permutation_seed).permutation(m)]
    elif sorted(permutation) != list(range(m)):
        raise InvalidArgumentsException("Not a permutation of the indices.", permutation=permutation)

    log = ChannelLog()
    if config.mode == Mode.CLASSICAL:
        channel = Channel(Party.ALICE, Party.BOB, MessageKind.CLASSICAL, log)
        await channel.async_send(list(permutation), {"permutation": list(permutation)})
        bob_permutation = await channel.async_receive()
    else:
        bob_permutation = list(permutation)

    pairs = [(vec_a[permutation[k]], vec_b[bob_permutation[k]]) for k in range(m)]
    transcripts = await _async_run_all(pairs, config, seeds)

    value = sum(t.product.value for t in transcripts)

    _LOGGER.debug("Dot product over %d slots is %d", m, value)
    return DotProductResult(value, list(permutation), transcripts, log)
