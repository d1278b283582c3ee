"""Module containing the three-party private product protocol: configuration, encoding sampler, parties, channels and transcripts."""

from __future__ import annotations

import json
import logging

from enum import Enum
from typing import Any, Callable

import anyio
import numpy as np

from .encodings import Action, Base, EncodingId
from .errors import ConsistencyException, InvalidArgumentsException
from .field import FpElem, PrimitiveRoot, as_prime, find_primitive_root
from .params import Role, systematic_params
from .qudit import BellLabel, LocalOp, Qudit, StateVec, bell_measure, bell_state, label_after, pauli_x_z
from .seeding import make_rng, spawn_seeds

_LOGGER = logging.getLogger(__name__)

Sampler = Callable[[np.random.Generator, int, PrimitiveRoot], EncodingId]


class Mode(Enum):
    """Mode enumeration representing how Bob learns the encoding Alice sampled."""

    CLASSICAL = "classical"
    SHARED = "shared"


class Party(Enum):
    """Party enumeration representing the three protocol participants."""

    ALICE = "alice"
    BOB = "bob"
    CHARLIE = "charlie"


class MessageKind(Enum):
    """MessageKind enumeration representing the two kinds of channels."""

    CLASSICAL = "classical"
    QUANTUM = "quantum"


class PartyState(Enum):
    """PartyState enumeration representing the steps of a party's state machine."""

    READY = "ready"
    ENCODING_CHOSEN = "encoding_chosen"
    ENCODED = "encoded"
    SENT = "sent"
    AWAITING_QUDITS = "awaiting_qudits"
    RECEIVED = "received"
    MEASURED = "measured"


_ROUTES = {
    (Party.ALICE, Party.BOB, MessageKind.CLASSICAL),
    (Party.ALICE, Party.CHARLIE, MessageKind.QUANTUM),
    (Party.BOB, Party.CHARLIE, MessageKind.QUANTUM),
}


def _id_for_trit(rng: np.random.Generator, p: int, trit: int) -> EncodingId:
    if trit == 1:
        action, beta = Action.PHI, 1 + int(rng.integers(p - 1))
    elif trit == 2:
        action, beta = Action.PSI, 1 + int(rng.integers(p - 1))
    else:
        action, beta = Action.PHI, 0

    n = int(rng.integers(p - 1))
    base = (Base.EPS0, Base.EPS0T)[int(rng.integers(2))]

    return EncodingId(base, action, n, beta, p)


def sample_encoding_id(rng: np.random.Generator, p: int, alpha: PrimitiveRoot | None = None) -> EncodingId:
    """
    Draws a member of the family uniformly through its id.

    A trit T picks the part of the family: 1 for phi with a non-zero shift, 2 for psi with a non-zero shift, 3 for the
    shared members phi_(n, 0). T is 1 or 2 with probability (p - 1) / (2p - 1) each. The exponent and the base are uniform.
    """

    k = int(rng.integers(2 * p - 1))
    trit = 1 if k < p - 1 else 2 if k < 2 * (p - 1) else 3

    return _id_for_trit(rng, p, trit)


def biased_sampler(trit: int) -> Sampler:
    """Sampler that always draws the given trit. Not uniform over the family."""

    if trit not in (1, 2, 3):
        raise InvalidArgumentsException("Trit must be 1, 2 or 3.", trit=trit)

    def sampler(rng: np.random.Generator, p: int, alpha: PrimitiveRoot | None = None) -> EncodingId:
        return _id_for_trit(rng, p, trit)

    return sampler


class ProtocolConfig:
    """ProtocolConfig model representing the field, the primitive root and how the parties run."""

    def __init__(
        self,
        p: int,
        mode: Mode = Mode.CLASSICAL,
        numeric_check: bool = False,
        alpha: PrimitiveRoot | None = None,
        sampler: Sampler | None = None,
    ) -> None:
        self._p = as_prime(p).p
        self._mode = Mode(mode)
        self._numeric_check = numeric_check
        self._alpha = alpha if alpha is not None else find_primitive_root(self._p)
        self._sampler = sampler if sampler is not None else sample_encoding_id

        if self._alpha.p != self._p:
            raise InvalidArgumentsException("Primitive root belongs to a different field.", p=self._p, alpha=self._alpha)

    @property
    def p(self) -> int:
        return self._p

    @property
    def mode(self) -> Mode:
        return self._mode

    @property
    def numeric_check(self) -> bool:
        return self._numeric_check

    @property
    def alpha(self) -> PrimitiveRoot:
        return self._alpha

    @property
    def sampler(self) -> Sampler:
        return self._sampler


class Message:
    """A logged channel message. The payload description is what the log keeps, not the payload itself."""

    def __init__(self, sender: Party, receiver: Party, kind: MessageKind, description: dict) -> None:
        self.sender = sender
        self.receiver = receiver
        self.kind = kind
        self.description = description

    def as_dict(self) -> dict:
        return {
            "from": self.sender.value,
            "to": self.receiver.value,
            "kind": self.kind.value,
            "payload": self.description,
        }

    def __repr__(self) -> str:
        return f"Message({self.as_dict()})"


class ChannelLog:
    def __init__(self) -> None:
        self._messages: list[Message] = []

    @property
    def messages(self) -> list[Message]:
        return list(self._messages)

    def append(self, message: Message) -> None:
        self._messages.append(message)

    def classical_messages(self) -> list[Message]:
        return [m for m in self._messages if m.kind == MessageKind.CLASSICAL]

    def quantum_messages(self) -> list[Message]:
        return [m for m in self._messages if m.kind == MessageKind.QUANTUM]

    def as_list(self) -> list[dict]:
        return [m.as_dict() for m in self._messages]

    def __len__(self) -> int:
        return len(self._messages)

    def __iter__(self):
        return iter(self._messages)


class Channel:
    """One-way channel between two parties. Only the routes of the channel model can be opened."""

    def __init__(self, sender: Party, receiver: Party, kind: MessageKind, log: ChannelLog) -> None:
        if (sender, receiver, kind) not in _ROUTES:
            raise ConsistencyException(
                "Route is not part of the channel model.",
                sender=sender.value,
                receiver=receiver.value,
                kind=kind.value,
            )

        self._sender = sender
        self._receiver = receiver
        self._kind = kind
        self._log = log
        self._sent = False
        self._send_stream, self._receive_stream = anyio.create_memory_object_stream(1)

    @property
    def kind(self) -> MessageKind:
        return self._kind

    async def async_send(self, payload: Any, description: dict) -> None:
        """Sends the single message this channel carries and closes the sending end."""

        if self._sent:
            raise ConsistencyException("Channel already carried its message.", sender=self._sender.value, receiver=self._receiver.value)
        self._sent = True

        message = Message(self._sender, self._receiver, self._kind, description)
        self._log.append(message)

        _LOGGER.debug("Channel message %s", message)
        async with self._send_stream:
            await self._send_stream.send(payload)

    async def async_receive(self) -> Any:
        async with self._receive_stream:
            return await self._receive_stream.receive()


class QuditHalf:
    """Handle to one qudit of an entangled pair. Operators applied through it only touch that qudit."""

    def __init__(self, pair: EntangledPair, qudit: Qudit) -> None:
        self._pair = pair
        self._qudit = qudit

    @property
    def pair(self) -> EntangledPair:
        return self._pair

    @property
    def qudit(self) -> Qudit:
        return self._qudit

    def apply(self, op: LocalOp) -> None:
        self._pair.apply(op, self._qudit)

    def describe(self) -> dict:
        return {"qudit": self._qudit.name.lower()}


class EntangledPair:
    """
    Two qudits prepared as |phi_00> by a trusted source.

    The symbolic label is always tracked; the amplitudes only when numeric is set.
    """

    def __init__(self, p: int, numeric: bool = False) -> None:
        self._label = BellLabel(0, 0, p)
        self._state = bell_state(self._label) if numeric else None

    @property
    def label(self) -> BellLabel:
        return self._label

    @property
    def state(self) -> StateVec | None:
        return self._state

    def apply(self, op: LocalOp, qudit: Qudit) -> None:
        self._label = label_after(self._label, op, qudit)
        if self._state is not None:
            self._state = pauli_x_z(op, self._state, qudit)

    def half(self, qudit: Qudit) -> QuditHalf:
        return QuditHalf(self, qudit)


class _PartyMachine:
    _TRANSITIONS: dict[PartyState, tuple[PartyState, ...]] = {}

    def __init__(self, party: Party, initial: PartyState) -> None:
        self._party = party
        self._state = initial

    @property
    def party(self) -> Party:
        return self._party

    @property
    def state(self) -> PartyState:
        return self._state

    def _advance(self, target: PartyState) -> None:
        if target not in self._TRANSITIONS.get(self._state, ()):
            raise ConsistencyException(
                "Illegal party state transition.",
                party=self._party.value,
                current=self._state.value,
                target=target.value,
            )

        _LOGGER.debug("%s: %s -> %s", self._party.value, self._state.value, target.value)
        self._state = target


class _Encoder(_PartyMachine):
    _TRANSITIONS = {
        PartyState.READY: (PartyState.ENCODING_CHOSEN,),
        PartyState.ENCODING_CHOSEN: (PartyState.ENCODED,),
        PartyState.ENCODED: (PartyState.SENT,),
    }

    def __init__(
        self,
        party: Party,
        role: Role,
        value: FpElem,
        half: QuditHalf,
        config: ProtocolConfig,
        shared_seed: int | None,
        forced_id: EncodingId | None,
    ) -> None:
        super().__init__(party, PartyState.READY)

        self._role = role
        self._value = value
        self._half = half
        self._config = config
        self._shared_seed = shared_seed
        self._forced_id = forced_id
        self._encoding_id: EncodingId | None = None
        self._op: LocalOp | None = None

    @property
    def encoding_id(self) -> EncodingId | None:
        return self._encoding_id

    @property
    def op(self) -> LocalOp | None:
        return self._op

    def _derive_id(self) -> EncodingId:
        if self._forced_id is not None:
            return self._forced_id
        if self._shared_seed is None:
            raise ConsistencyException("Party has no shared randomness to derive the encoding from.", party=self._party.value)

        rng = make_rng(self._shared_seed)
        return self._config.sampler(rng, self._config.p, self._config.alpha)

    def _encode(self, encoding_id: EncodingId) -> None:
        self._encoding_id = encoding_id
        self._advance(PartyState.ENCODING_CHOSEN)

        self._op = systematic_params(encoding_id, self._role, self._value, self._config.alpha)
        self._half.apply(self._op)
        self._advance(PartyState.ENCODED)

    async def _async_send_half(self, to_charlie: Channel) -> None:
        await to_charlie.async_send(self._half, self._half.describe())
        self._advance(PartyState.SENT)


class Alice(_Encoder):
    """Alice samples the encoding, tells Bob which one in classical mode, encodes her input and sends her qudit to Charlie."""

    def __init__(
        self,
        a: FpElem,
        half: QuditHalf,
        config: ProtocolConfig,
        shared_seed: int,
        forced_id: EncodingId | None = None,
    ) -> None:
        super().__init__(Party.ALICE, Role.ALICE, a, half, config, shared_seed, forced_id)

    async def async_run(self, to_bob: Channel | None, to_charlie: Channel) -> None:
        encoding_id = self._derive_id()
        _LOGGER.debug("Alice uses encoding %s", encoding_id)

        if self._config.mode == Mode.CLASSICAL:
            await to_bob.async_send(encoding_id, {"encoding_id": encoding_id.as_dict()})

        self._encode(encoding_id)
        await self._async_send_half(to_charlie)


class Bob(_Encoder):
    """Bob learns the encoding from Alice or derives it from the shared seed, encodes his input and sends his qudit to Charlie."""

    def __init__(
        self,
        b: FpElem,
        half: QuditHalf,
        config: ProtocolConfig,
        shared_seed: int | None = None,
        forced_id: EncodingId | None = None,
    ) -> None:
        super().__init__(Party.BOB, Role.BOB, b, half, config, shared_seed, forced_id)

    async def async_run(self, from_alice: Channel | None, to_charlie: Channel) -> None:
        if self._config.mode == Mode.CLASSICAL:
            encoding_id = await from_alice.async_receive()
        else:
            encoding_id = self._derive_id()

        self._encode(encoding_id)
        await self._async_send_half(to_charlie)


class Charlie(_PartyMachine):
    """Charlie collects both qudits, measures them in the Bell-like basis and decodes the product of the label."""

    _TRANSITIONS = {
        PartyState.AWAITING_QUDITS: (PartyState.RECEIVED,),
        PartyState.RECEIVED: (PartyState.MEASURED,),
    }

    def __init__(self, measure_seed: int) -> None:
        super().__init__(Party.CHARLIE, PartyState.AWAITING_QUDITS)

        self._measure_seed = measure_seed
        self._pair: EntangledPair | None = None
        self._measured: BellLabel | None = None

    @property
    def measured_label(self) -> BellLabel | None:
        return self._measured

    async def async_collect(self, from_alice: Channel, from_bob: Channel) -> None:
        first = await from_alice.async_receive()
        second = await from_bob.async_receive()

        if first.pair is not second.pair or (first.qudit, second.qudit) != (Qudit.FIRST, Qudit.SECOND):
            raise ConsistencyException("Received qudits are not the two halves of one pair.")

        self._pair = first.pair
        self._advance(PartyState.RECEIVED)

    def measure(self) -> BellLabel:
        """Reads the Bell label. With amplitudes present, a sampled measurement must agree with the symbolic label."""

        if self._state != PartyState.RECEIVED:
            raise ConsistencyException("Charlie cannot measure before both qudits arrived.", current=self._state.value)

        label = self._pair.label
        if self._pair.state is not None:
            measured = bell_measure(self._pair.state, make_rng(self._measure_seed))
            if measured != label:
                raise ConsistencyException("Numeric measurement disagrees with the symbolic label.", symbolic=label, numeric=measured)
            label = measured

        self._measured = label
        self._advance(PartyState.MEASURED)
        return label


class Transcript:
    """Transcript model representing everything that happened in one protocol run."""

    def __init__(
        self,
        p: int,
        a: FpElem,
        b: FpElem,
        encoding_id: EncodingId,
        alice_op: LocalOp,
        bob_op: LocalOp,
        sent_label: BellLabel,
        measured_label: BellLabel,
        mode: Mode,
        seed: int | None,
        channel_log: ChannelLog,
    ) -> None:
        self.p = p
        self.a = a
        self.b = b
        self.encoding_id = encoding_id
        self.alice_op = alice_op
        self.bob_op = bob_op
        self.sent_label = sent_label
        self.measured_label = measured_label
        self.mode = mode
        self.seed = seed
        self.channel_log = channel_log

    @property
    def product(self) -> FpElem:
        return self.measured_label.product()

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "a": self.a.value,
            "b": self.b.value,
            "encoding_id": self.encoding_id.as_dict(),
            "alice_op": self.alice_op.as_dict(),
            "bob_op": self.bob_op.as_dict(),
            "sent_label": list(self.sent_label.as_tuple()),
            "measured_label": list(self.measured_label.as_tuple()),
            "product": self.product.value,
            "mode": self.mode.value,
            "seed": self.seed,
        }

    def serialize(self) -> str:
        """Serialize transcript into a JSON string."""

        return json.dumps(self.as_dict())


def _protocol_input(value: FpElem | int, p: int, name: str) -> FpElem:
    if isinstance(value, FpElem):
        if value.modulus != p:
            raise InvalidArgumentsException("Input belongs to a different field.", name=name, value=value, p=p)
        return value

    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or not 0 <= value < p:
        raise InvalidArgumentsException("Input must be an integer in [0, p).", name=name, value=value, p=p)
    return FpElem(int(value), p)


async def async_run_protocol(
    a: FpElem | int,
    b: FpElem | int,
    config: ProtocolConfig,
    rng: np.random.Generator | int | None = None,
    forced_id: EncodingId | None = None,
) -> Transcript:
    """
    Runs one protocol instance: Alice and Bob encode their inputs on the shared pair and Charlie decodes the product.

    forced_id replaces the sampled encoding and exists for reproducing fixed runs.
    """

    p = config.p
    a, b = _protocol_input(a, p, "a"), _protocol_input(b, p, "b")
    if forced_id is not None and forced_id.p != p:
        raise InvalidArgumentsException("Forced encoding belongs to a different field.", forced_id=forced_id, p=p)

    seed = int(rng) if isinstance(rng, (int, np.integer)) else None
    shared_seed, measure_seed = spawn_seeds(make_rng(rng), 2)

    log = ChannelLog()
    pair = EntangledPair(p, config.numeric_check)
    shared = config.mode == Mode.SHARED

    alice = Alice(a, pair.half(Qudit.FIRST), config, shared_seed, forced_id)
    bob = Bob(b, pair.half(Qudit.SECOND), config, shared_seed if shared else None, forced_id)
    charlie = Charlie(measure_seed)

    alice_to_bob = None if shared else Channel(Party.ALICE, Party.BOB, MessageKind.CLASSICAL, log)
    alice_to_charlie = Channel(Party.ALICE, Party.CHARLIE, MessageKind.QUANTUM, log)
    bob_to_charlie = Channel(Party.BOB, Party.CHARLIE, MessageKind.QUANTUM, log)

    async with anyio.create_task_group() as tg:
        tg.start_soon(alice.async_run, alice_to_bob, alice_to_charlie)
        tg.start_soon(bob.async_run, alice_to_bob, bob_to_charlie)
        tg.start_soon(charlie.async_collect, alice_to_charlie, bob_to_charlie)

    sent_label = pair.label
    measured_label = charlie.measure()

    transcript = Transcript(p, a, b, alice.encoding_id, alice.op, bob.op, sent_label, measured_label, config.mode, seed, log)

    if transcript.product != a * b:
        raise ConsistencyException("Decoded product differs from the product of the inputs.", transcript=transcript.as_dict())

    return transcript
