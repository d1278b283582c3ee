"""Module containing the exact two-qudit simulation: Bell-like states, generalized X/Z operators and Bell-basis measurement."""

from __future__ import annotations

import json
import logging

from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentsException
from .field import FpElem, as_prime

_LOGGER = logging.getLogger(__name__)

_DEFAULT_TOLERANCE = 1e-9
_MAX_NUMERIC_PRIME = 97


class Qudit(Enum):
    """Qudit enumeration naming the two halves of an entangled pair."""

    FIRST = 0
    SECOND = 1


class BellLabel:
    """Label (a, b) of the Bell-like state |phi_ab>, the symbolic stand-in for the state itself."""

    __slots__ = ("_a", "_b", "_p")

    def __init__(self, a: FpElem | int, b: FpElem | int, p: int | None = None) -> None:
        if p is None:
            if not isinstance(a, FpElem):
                raise InvalidArgumentsException("Modulus is required for integer label components.", a=a, b=b)
            p = a.modulus
        self._p = as_prime(p).p
        self._a = FpElem(int(a), self._p)
        self._b = FpElem(int(b), self._p)

    @property
    def a(self) -> FpElem:
        return self._a

    @property
    def b(self) -> FpElem:
        return self._b

    @property
    def p(self) -> int:
        return self._p

    def as_tuple(self) -> tuple[int, int]:
        return (self._a.value, self._b.value)

    def product(self) -> FpElem:
        return self._a * self._b

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BellLabel):
            return False
        return self._p == other._p and self.as_tuple() == other.as_tuple()

    def __hash__(self) -> int:
        return hash((self._p, self.as_tuple()))

    def __lt__(self, other: BellLabel) -> bool:
        return self.as_tuple() < other.as_tuple()

    def __repr__(self) -> str:
        return f"BellLabel({self._a.value}, {self._b.value}, p={self._p})"

    def __str__(self) -> str:
        return f"|phi_{self._a.value}{self._b.value}>"


class LocalOp:
    """Single-qudit operator X(x)Z(z): Z(z) acts first, then X(x)."""

    __slots__ = ("_x", "_z", "_p")

    def __init__(self, x: FpElem | int, z: FpElem | int, p: int | None = None) -> None:
        if p is None:
            if not isinstance(x, FpElem):
                raise InvalidArgumentsException("Modulus is required for integer operator parameters.", x=x, z=z)
            p = x.modulus
        self._p = as_prime(p).p
        self._x = FpElem(int(x), self._p)
        self._z = FpElem(int(z), self._p)

    @classmethod
    def identity(cls, p: int) -> LocalOp:
        return cls(0, 0, p)

    @property
    def x(self) -> FpElem:
        return self._x

    @property
    def z(self) -> FpElem:
        return self._z

    @property
    def p(self) -> int:
        return self._p

    def as_dict(self) -> dict:
        return {"x": self._x.value, "z": self._z.value}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalOp):
            return False
        return self._p == other._p and self._x == other._x and self._z == other._z

    def __hash__(self) -> int:
        return hash((self._p, self._x.value, self._z.value))

    def __repr__(self) -> str:
        return f"LocalOp(x={self._x.value}, z={self._z.value}, p={self._p})"

    def __str__(self) -> str:
        """Operator name in the X/Z notation, e.g. I, X, Z(2), X(1)Z(3)."""

        parts = []
        if self._x.value:
            parts.append("X" if self._p == 2 else f"X({self._x.value})")
        if self._z.value:
            parts.append("Z" if self._p == 2 else f"Z({self._z.value})")
        return "".join(parts) if parts else "I"


class StateVec:
    """Joint state of two qudits: p^2 complex amplitudes indexed by (i, j) in row-major order."""

    __slots__ = ("_p", "_amplitudes")

    def __init__(self, p: int, amplitudes, tolerance: float = _DEFAULT_TOLERANCE) -> None:
        self._p = _numeric_prime(p)

        amplitudes = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.shape != (self._p * self._p,):
            raise InvalidArgumentsException("State vector must have p^2 amplitudes.", p=self._p, size=amplitudes.size)

        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > tolerance:
            raise InvalidArgumentsException("State vector is not normalized.", p=self._p, norm=float(norm))

        amplitudes.flags.writeable = False
        self._amplitudes = amplitudes

    @property
    def p(self) -> int:
        return self._p

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    def as_matrix(self) -> np.ndarray:
        """Amplitudes as a p x p matrix: row is the first qudit, column the second."""

        return self._amplitudes.reshape(self._p, self._p)

    def __mul__(self, phase: complex) -> StateVec:
        return StateVec(self._p, self._amplitudes * phase)

    __rmul__ = __mul__

    def serialize(self) -> str:
        """Serialize state into a JSON string for debugging."""

        return json.dumps({
            "p": self._p,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self._amplitudes],
        })

    @classmethod
    def deserialize(cls, state: str) -> StateVec:
        """Deserialize JSON string into a state object."""

        body = json.loads(state)
        return cls(body["p"], [complex(re, im) for re, im in body["amplitudes"]])


def _numeric_prime(p: int) -> int:
    prime = as_prime(p).p
    if prime > _MAX_NUMERIC_PRIME:
        raise InvalidArgumentsException("Numeric simulation supports primes up to 97.", p=prime)
    return prime


@lru_cache(maxsize=None)
def _omega_powers(p: int) -> np.ndarray:
    powers = np.exp(2j * np.pi * np.arange(p) / p)
    powers.flags.writeable = False
    return powers


def bell_state(label: BellLabel) -> StateVec:
    """Returns |phi_ab> = (1/sqrt(p)) sum_i omega^(b i) |i + a>|i>."""

    p = _numeric_prime(label.p)
    a, b = label.as_tuple()
    i = np.arange(p)

    amplitudes = np.zeros(p * p, dtype=np.complex128)
    amplitudes[((i + a) % p) * p + i] = _omega_powers(p)[(b * i) % p] / np.sqrt(p)

    return StateVec(p, amplitudes)


@lru_cache(maxsize=None)
def bell_basis(p: int) -> np.ndarray:
    """Matrix whose row a * p + b holds the amplitudes of |phi_ab>."""

    basis = np.array([bell_state(BellLabel(a, b, p)).amplitudes for a in range(p) for b in range(p)])
    basis.flags.writeable = False
    return basis


def pauli_x_z(op: LocalOp, state: StateVec, qudit: Qudit) -> StateVec:
    """Applies X(x)Z(z) to one half of the pair: |i> -> omega^(z i)|i + x>."""

    if op.p != state.p:
        raise InvalidArgumentsException("Operator and state belong to different fields.", op=op, p=state.p)

    p = state.p
    phases = _omega_powers(p)[(op.z.value * np.arange(p)) % p]
    matrix = state.as_matrix()

    if qudit == Qudit.FIRST:
        shifted = np.roll(matrix * phases[:, None], op.x.value, axis=0)
    else:
        shifted = np.roll(matrix * phases[None, :], op.x.value, axis=1)

    return StateVec(p, shifted)


def apply_pair(op_a: LocalOp, op_b: LocalOp, state: StateVec) -> StateVec:
    """Applies X(x_A)Z(z_A) tensor X(x_B)Z(z_B) to a two-qudit state."""

    if op_a.p != op_b.p:
        raise InvalidArgumentsException("Operators belong to different fields.", op_a=op_a, op_b=op_b)

    return pauli_x_z(op_b, pauli_x_z(op_a, state, Qudit.FIRST), Qudit.SECOND)


def equal_up_to_phase(s1: StateVec, s2: StateVec, tol: float = _DEFAULT_TOLERANCE) -> bool:
    """True iff |<s1|s2>| >= 1 - tol, i.e. the states differ at most by a global phase."""

    if s1.p != s2.p:
        raise InvalidArgumentsException("States belong to different fields.", p1=s1.p, p2=s2.p)

    return bool(abs(np.vdot(s1.amplitudes, s2.amplitudes)) >= 1.0 - tol)


def bell_probabilities(state: StateVec, tol: float = _DEFAULT_TOLERANCE) -> np.ndarray:
    """Outcome probabilities |<phi_ij|s>|^2 indexed by i * p + j. Probabilities below tol are zeroed."""

    overlaps = bell_basis(state.p).conj() @ state.amplitudes
    probabilities = np.abs(overlaps) ** 2
    probabilities[probabilities < tol] = 0.0

    return probabilities / probabilities.sum()


def bell_measure(state: StateVec, rng: np.random.Generator) -> BellLabel:
    """Measures the pair in the Bell-like basis, sampling with the Born-rule probabilities."""

    p = state.p
    outcome = int(rng.choice(p * p, p=bell_probabilities(state)))

    _LOGGER.debug("Bell measurement at p=%d gave outcome %d", p, outcome)
    return BellLabel(outcome // p, outcome % p, p)


def reduce_to_label(x_a: FpElem, z_a: FpElem, x_b: FpElem, z_b: FpElem) -> BellLabel:
    """Label (x_A - x_B, z_A + z_B) of (X(x_A)Z(z_A) tensor X(x_B)Z(z_B))|phi_00>, up to global phase."""

    return BellLabel(x_a - x_b, z_a + z_b)


def reduce_ops(op_a: LocalOp, op_b: LocalOp) -> BellLabel:
    return reduce_to_label(op_a.x, op_a.z, op_b.x, op_b.z)


def label_after(label: BellLabel, op: LocalOp, qudit: Qudit) -> BellLabel:
    """
    Symbolic action of X(x)Z(z) on one half of |phi_ab>, up to global phase.

    Acting on the first qudit gives (a + x, b + z), acting on the second gives (a - x, b + z).
    """

    if op.p != label.p:
        raise InvalidArgumentsException("Operator and label belong to different fields.", op=op, label=label)

    if qudit == Qudit.FIRST:
        return BellLabel(label.a + op.x, label.b + op.z)
    return BellLabel(label.a - op.x, label.b + op.z)
