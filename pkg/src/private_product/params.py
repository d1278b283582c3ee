"""Module containing the local parameter solver, the closed-form operator table of family members and the binary minimal family."""

from __future__ import annotations

import logging

from enum import Enum

import numpy as np

from .encodings import Action, Base, CoordMatrix, Encoding, EncodingId, coordinate_matrices, property_p_violation
from .errors import InvalidArgumentsException
from .field import FpElem, PrimitiveRoot, find_primitive_root
from .qudit import BellLabel, LocalOp, reduce_ops

_LOGGER = logging.getLogger(__name__)


class Role(Enum):
    """Role enumeration naming the party whose local operator is requested."""

    ALICE = "alice"
    BOB = "bob"


class LocalParams:
    """
    Per-input operator parameters: Alice applies X(x_A[i])Z(z_A[i]) on input i, Bob applies X(x_B[j])Z(z_B[j]) on input j.

    Together they realize the encoding (i, j) -> (x_A[i] - x_B[j], z_A[i] + z_B[j]).
    """

    def __init__(self, p: int, x_a, z_a, x_b, z_b) -> None:
        self._p = p
        self._x_a = [FpElem(int(v), p) for v in x_a]
        self._z_a = [FpElem(int(v), p) for v in z_a]
        self._x_b = [FpElem(int(v), p) for v in x_b]
        self._z_b = [FpElem(int(v), p) for v in z_b]

        if any(len(values) != p for values in [self._x_a, self._z_a, self._x_b, self._z_b]):
            raise InvalidArgumentsException("Local parameters need one entry per field element.", p=p)

    @property
    def p(self) -> int:
        return self._p

    @property
    def x_a(self) -> list[FpElem]:
        return self._x_a

    @property
    def z_a(self) -> list[FpElem]:
        return self._z_a

    @property
    def x_b(self) -> list[FpElem]:
        return self._x_b

    @property
    def z_b(self) -> list[FpElem]:
        return self._z_b

    def alice_op(self, a: FpElem | int) -> LocalOp:
        i = int(a) % self._p
        return LocalOp(self._x_a[i], self._z_a[i])

    def bob_op(self, b: FpElem | int) -> LocalOp:
        j = int(b) % self._p
        return LocalOp(self._x_b[j], self._z_b[j])

    def label(self, a: FpElem | int, b: FpElem | int) -> BellLabel:
        return reduce_ops(self.alice_op(a), self.bob_op(b))

    def encoding(self) -> Encoding:
        """The table these parameters realize."""

        return Encoding(self._p, [self.label(i, j).as_tuple() for i in range(self._p) for j in range(self._p)])

    def as_dict(self) -> dict:
        return {
            "p": self._p,
            "xA": [v.value for v in self._x_a],
            "xB": [v.value for v in self._x_b],
            "zA": [v.value for v in self._z_a],
            "zB": [v.value for v in self._z_b],
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalParams):
            return False
        return self.as_dict() == other.as_dict()

    def __repr__(self) -> str:
        return f"LocalParams({self.as_dict()})"


class NoSolution:
    """Outcome of the solver for a table that no choice of local operators realizes."""

    def __init__(self, coordinate: str, witness: tuple[int, int, int, int]) -> None:
        self._coordinate = coordinate
        self._witness = witness

    @property
    def coordinate(self) -> str:
        """Which label coordinate fails the rectangle property, 'x' or 'z'."""

        return self._coordinate

    @property
    def witness(self) -> tuple[int, int, int, int]:
        return self._witness

    def as_dict(self) -> dict:
        return {"solvable": False, "coordinate": self._coordinate, "witness": list(self._witness)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NoSolution):
            return False
        return self._coordinate == other._coordinate and self._witness == other._witness

    def __repr__(self) -> str:
        return f"NoSolution(coordinate={self._coordinate}, witness={self._witness})"


def solve_coordinate_system(m: CoordMatrix, sign: int) -> tuple[list[int], list[int]] | None:
    """
    Solves s_i + sign * t_j = m_ij over F_p for sign in {1, -1}, with the gauge t_0 = 0.

    Returns (s, t), or None if m does not have the rectangle property.
    """

    if sign not in (1, -1):
        raise InvalidArgumentsException("Sign must be 1 or -1.", sign=sign)

    if property_p_violation(m) is not None:
        return None

    e = m.entries
    s = e[:, 0] % m.p
    t = (sign * (e[0, :] - e[0, 0])) % m.p

    return [int(v) for v in s], [int(v) for v in t]


def solve_local_params(e: Encoding) -> LocalParams | NoSolution:
    """
    Finds operators realizing an encoding, in the canonical gauge x_B[0] = z_B[0] = 0.

    A table is realizable iff both coordinate matrices have the rectangle property; otherwise the first failing
    coordinate is reported with a witness quadruple.
    """

    m_alpha, m_beta = coordinate_matrices(e)

    xs = solve_coordinate_system(m_alpha, -1)
    if xs is None:
        _LOGGER.debug("No local parameters for encoding %s: x coordinate fails", e)
        return NoSolution("x", property_p_violation(m_alpha))

    zs = solve_coordinate_system(m_beta, 1)
    if zs is None:
        _LOGGER.debug("No local parameters for encoding %s: z coordinate fails", e)
        return NoSolution("z", property_p_violation(m_beta))

    (x_a, x_b), (z_a, z_b) = xs, zs
    return LocalParams(e.p, x_a, z_a, x_b, z_b)


def systematic_params(id: EncodingId, role: Role, value: FpElem | int, alpha: PrimitiveRoot | None = None) -> LocalOp:
    """
    Closed-form local operator of a party holding input value under the family member id.

    It only depends on the id and the party's own input.
    """

    p = id.p
    alpha = alpha if alpha is not None else find_primitive_root(p)
    if alpha.p != p:
        raise InvalidArgumentsException("Primitive root belongs to a different field.", p=p, alpha=alpha)

    v = FpElem(int(value), p)
    n, beta = id.n.value, id.beta
    up, down = alpha.power(n), alpha.power(-n)
    shift = beta if v == 0 else FpElem(0, p)
    role = Role(role)

    if id.base == Base.EPS0:
        if role == Role.ALICE:
            return LocalOp(v * up, shift if id.action == Action.PSI else 0, p)
        if id.action == Action.PHI:
            return LocalOp(-shift, v * down, p)
        return LocalOp(0, v * down, p)

    if role == Role.ALICE:
        return LocalOp(shift if id.action == Action.PSI else 0, v * up, p)
    if id.action == Action.PHI:
        return LocalOp(-(v * down), shift, p)
    return LocalOp(-(v * down), 0, p)


_BINARY_OPERATORS = [
    # (Alice on 0, Alice on 1), (Bob on 0, Bob on 1) as (x, z)
    (((0, 0), (1, 0)), ((0, 0), (0, 1))),
    (((0, 0), (0, 1)), ((0, 1), (1, 0))),
    (((1, 0), (0, 1)), ((0, 0), (1, 0))),
]


def binary_minimal_family_operators() -> list[tuple[list[LocalOp], list[LocalOp]]]:
    """Alice's and Bob's operators per input for each of the three members of the minimal binary family."""

    return [
        ([LocalOp(x, z, 2) for x, z in alice], [LocalOp(x, z, 2) for x, z in bob])
        for alice, bob in _BINARY_OPERATORS
    ]


def binary_minimal_family() -> list[Encoding]:
    """The three binary encodings obtained from the minimal operator table."""

    family = []
    for alice, bob in binary_minimal_family_operators():
        labels = np.array([[reduce_ops(alice[a], bob[b]).as_tuple() for b in range(2)] for a in range(2)])
        family.append(Encoding(2, labels))
    return family
