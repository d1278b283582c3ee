"""Module containing encodings of input pairs as Bell labels, the product-compatibility predicates and the group actions phi and psi."""

from __future__ import annotations

import json

from enum import Enum

import numpy as np

from .errors import InvalidArgumentsException, InvalidEncodingException, PreconditionException
from .field import ExpElem, FpElem, PrimitiveRoot, as_prime, find_primitive_root
from .qudit import BellLabel


class Base(Enum):
    """Base enumeration representing the two canonical encodings the family is grown from."""

    EPS0 = "eps0"
    EPS0T = "eps0T"


class Action(Enum):
    """Action enumeration representing the two group actions on encodings."""

    PHI = "phi"
    PSI = "psi"


class EncodingId:
    """Compact orbit descriptor of a family member: the group element (n, beta) of the given action applied to the given base."""

    __slots__ = ("_base", "_action", "_n", "_beta")

    def __init__(
        self,
        base: Base,
        action: Action,
        n: ExpElem | int,
        beta: FpElem | int,
        p: int,
    ) -> None:
        self._base = Base(base)
        self._action = Action(action)
        self._n = ExpElem(int(n), p)
        self._beta = FpElem(int(beta), p)

    @property
    def base(self) -> Base:
        return self._base

    @property
    def action(self) -> Action:
        return self._action

    @property
    def n(self) -> ExpElem:
        return self._n

    @property
    def beta(self) -> FpElem:
        return self._beta

    @property
    def p(self) -> int:
        return self._beta.modulus

    def as_dict(self) -> dict:
        return {
            "base": self._base.value,
            "action": self._action.value,
            "n": self._n.value,
            "beta": self._beta.value,
        }

    @classmethod
    def from_dict(cls, body: dict, p: int) -> EncodingId:
        try:
            return cls(Base(body["base"]), Action(body["action"]), int(body["n"]), int(body["beta"]), p)
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidEncodingException("Provided encoding id is malformed.", body=body) from e

    @classmethod
    def parse(cls, text: str, p: int) -> EncodingId:
        """Parse the 'base:action:n:beta' form, e.g. 'eps0:psi:3:2'."""

        parts = text.split(":")
        if len(parts) != 4:
            raise InvalidArgumentsException("Encoding id must have the form base:action:n:beta.", text=text)

        return cls.from_dict(dict(zip(["base", "action", "n", "beta"], parts)), p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EncodingId):
            return False
        return (
            self._base == other._base
            and self._action == other._action
            and self._n == other._n
            and self._beta == other._beta
        )

    def __hash__(self) -> int:
        return hash((self._base, self._action, self._n, self._beta))

    def __repr__(self) -> str:
        return f"EncodingId({self})"

    def __str__(self) -> str:
        return f"{self._base.value}:{self._action.value}:{self._n.value}:{self._beta.value}"


class Encoding:
    """
    Encoding model representing a bijection of F_p x F_p, i.e. which Bell label encodes each input pair.

    The table is dense and row-major: entry (i, j) holds the label (a, b). An optional EncodingId records how the encoding was constructed;
    equality and every predicate look at the table only.
    """

    __slots__ = ("_p", "_table", "_id")

    def __init__(self, p: int, table, id: EncodingId | None = None) -> None:
        self._p = as_prime(p).p

        try:
            raw = np.asarray(table)
        except (TypeError, ValueError) as e:
            raise InvalidEncodingException("Encoding table must hold p^2 label pairs.", p=self._p) from e

        if raw.dtype.kind not in "iu":
            raise InvalidEncodingException("Encoding table must hold integers.", p=self._p, dtype=str(raw.dtype))

        try:
            table = raw.astype(np.int64).reshape(self._p, self._p, 2)
        except (TypeError, ValueError, OverflowError) as e:
            raise InvalidEncodingException("Encoding table must hold p^2 label pairs.", p=self._p) from e

        if table.min() < 0 or table.max() >= self._p:
            raise InvalidEncodingException("Encoding table holds values outside of F_p.", p=self._p)

        flat = table[..., 0] * self._p + table[..., 1]
        if np.unique(flat).size != self._p * self._p:
            raise InvalidEncodingException("Encoding table is not a bijection.", p=self._p)

        table.flags.writeable = False
        self._table = table
        self._id = id

    @property
    def p(self) -> int:
        return self._p

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def id(self) -> EncodingId | None:
        return self._id

    def with_id(self, id: EncodingId) -> Encoding:
        return Encoding(self._p, self._table, id)

    def __call__(self, i: FpElem | int, j: FpElem | int) -> tuple[int, int]:
        a, b = self._table[int(i) % self._p, int(j) % self._p]
        return (int(a), int(b))

    def label(self, i: FpElem | int, j: FpElem | int) -> BellLabel:
        a, b = self(i, j)
        return BellLabel(a, b, self._p)

    def rows(self) -> list[list[int]]:
        """Table entries as [a, b] pairs in row-major (i, j) order."""

        return self._table.reshape(-1, 2).tolist()

    def key(self) -> bytes:
        return self._table.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Encoding):
            return False
        return self._p == other._p and np.array_equal(self._table, other._table)

    def __hash__(self) -> int:
        return hash((self._p, self.key()))

    def __repr__(self) -> str:
        return f"Encoding(p={self._p}, id={self._id})"

    def as_dict(self) -> dict:
        return {
            "p": self._p,
            "id": self._id.as_dict() if self._id is not None else None,
            "table": self.rows(),
        }

    def serialize(self) -> str:
        """Serialize encoding into a JSON string."""

        return json.dumps(self.as_dict())

    @classmethod
    def from_dict(cls, body: dict) -> Encoding:
        try:
            p = int(body["p"])
            table = body["table"]
            id_body = body.get("id")
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise InvalidEncodingException("Provided encoding is malformed.", body=body) from e

        id = EncodingId.from_dict(id_body, p) if id_body is not None else None
        return cls(p, table, id)

    @classmethod
    def deserialize(cls, encoding: str) -> Encoding:
        """Deserialize JSON string into an encoding object."""

        try:
            body = json.loads(encoding)
        except json.JSONDecodeError as e:
            raise InvalidEncodingException("Provided encoding is not valid JSON.") from e

        return cls.from_dict(body)


class CoordMatrix:
    """p x p matrix over F_p, e.g. one coordinate of an encoding or a basis matrix R_i / C_i."""

    __slots__ = ("_p", "_entries")

    def __init__(self, p: int, entries) -> None:
        self._p = as_prime(p).p

        entries = np.array(entries, dtype=np.int64).reshape(self._p, self._p) % self._p
        entries.flags.writeable = False
        self._entries = entries

    @property
    def p(self) -> int:
        return self._p

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def __getitem__(self, index: tuple[int, int]) -> int:
        return int(self._entries[index])

    def __add__(self, other: CoordMatrix) -> CoordMatrix:
        if other.p != self._p:
            raise InvalidArgumentsException("Matrices belong to different fields.", left=self._p, right=other.p)
        return CoordMatrix(self._p, self._entries + other._entries)

    def scale(self, k: int) -> CoordMatrix:
        return CoordMatrix(self._p, self._entries * int(k))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoordMatrix):
            return False
        return self._p == other._p and np.array_equal(self._entries, other._entries)

    def __hash__(self) -> int:
        return hash((self._p, self._entries.tobytes()))

    def __repr__(self) -> str:
        return f"CoordMatrix(p={self._p}, {self._entries.tolist()})"


def _grid(p: int) -> tuple[np.ndarray, np.ndarray]:
    return np.arange(p)[:, None], np.arange(p)[None, :]


def make_eps0(p: int) -> Encoding:
    """The identity encoding (i, j) -> (i, j)."""

    i, j = _grid(p)
    return Encoding(p, np.stack(np.broadcast_arrays(i, j), axis=-1))


def make_eps0T(p: int) -> Encoding:
    """The transpose encoding (i, j) -> (j, i)."""

    i, j = _grid(p)
    return Encoding(p, np.stack(np.broadcast_arrays(j, i), axis=-1))


def make_base(base: Base, p: int) -> Encoding:
    return make_eps0(p) if base == Base.EPS0 else make_eps0T(p)


def product_map(i: FpElem, j: FpElem) -> FpElem:
    """pi(i, j) = i * j in F_p."""

    return i * j


def coordinate_matrices(e: Encoding) -> tuple[CoordMatrix, CoordMatrix]:
    """The matrices M_alpha and M_beta holding the first and second label coordinate of every entry."""

    return CoordMatrix(e.p, e.table[..., 0]), CoordMatrix(e.p, e.table[..., 1])


def basis_matrix_r(p: int, i: int) -> CoordMatrix:
    """R_i: ones in row i."""

    entries = np.zeros((p, p), dtype=np.int64)
    entries[i, :] = 1
    return CoordMatrix(p, entries)


def basis_matrix_c(p: int, i: int) -> CoordMatrix:
    """C_i: ones in column i."""

    entries = np.zeros((p, p), dtype=np.int64)
    entries[:, i] = 1
    return CoordMatrix(p, entries)


def property_p_violation(m: CoordMatrix) -> tuple[int, int, int, int] | None:
    """
    Returns an index quadruple (i, j, i', j') with m_ij + m_i'j' != m_ij' + m_i'j, or None if m has the rectangle property.

    Checking against row 0 and column 0 suffices, so a witness always has i' = j' = 0.
    """

    e = m.entries
    defect = (e + e[0, 0] - e[:, :1] - e[:1, :]) % m.p
    bad = np.argwhere(defect != 0)
    if bad.size == 0:
        return None

    i, j = bad[0]
    return (int(i), int(j), 0, 0)


def has_property_P(m: CoordMatrix) -> bool:
    """True iff m_ij + m_i'j' = m_ij' + m_i'j for all index quadruples."""

    return property_p_violation(m) is None


def _products_preserved(e: Encoding) -> bool:
    i, j = _grid(e.p)
    return bool(np.all((e.table[..., 0] * e.table[..., 1]) % e.p == (i * j) % e.p))


def _rectangle_condition(e: Encoding) -> bool:
    # holding for every quadruple is equivalent to holding against row 0 and column 0
    t = e.table
    reference = t[:, :1, :] + t[:1, :, :] - t[:1, :1, :]

    return bool(np.all((t - reference) % e.p == 0))


def is_product_compatible(e: Encoding) -> bool:
    """True iff every entry encodes the product of its inputs and the rectangle condition holds for all quadruples."""

    return _products_preserved(e) and _rectangle_condition(e)


def _uniform_differences(line: np.ndarray, p: int) -> bool:
    # line[k] is the label at position k along a row or column; compare line[i + d] - line[i] across all i for every d
    shifts = (np.arange(p)[None, :] + np.arange(p)[:, None]) % p
    differences = (line[shifts] - line[None, :, :]) % p
    return bool(np.all(differences == differences[:, :1, :]))


def in_E1(e: Encoding) -> bool:
    """Product-compatible with e(i + d, 0) - e(i, 0) independent of i for every d."""

    return is_product_compatible(e) and _uniform_differences(e.table[:, 0, :], e.p)


def in_E2(e: Encoding) -> bool:
    """Product-compatible with e(0, i + d) - e(0, i) independent of i for every d."""

    return is_product_compatible(e) and _uniform_differences(e.table[0, :, :], e.p)


def _root(p: int, alpha: PrimitiveRoot | None) -> PrimitiveRoot:
    if alpha is None:
        return find_primitive_root(p)
    if alpha.p != p:
        raise InvalidArgumentsException("Primitive root belongs to a different field.", p=p, alpha=alpha)
    return alpha


def apply_phi(
    n: ExpElem | int,
    beta: FpElem | int,
    e: Encoding,
    alpha: PrimitiveRoot | None = None,
    check: bool = True,
) -> Encoding:
    """
    phi_(n, beta)(e)(i, j) = e(alpha^n i + beta, 0) for j = 0 and e(alpha^n i, alpha^-n j) otherwise.

    Raises PreconditionException if e is not in E1, unless check is disabled by a caller that already knows it is.
    """

    p = e.p
    alpha = _root(p, alpha)
    if check and not in_E1(e):
        raise PreconditionException("Phi acts on E1 only.", encoding=e)

    n, beta = int(n), int(beta)
    up, down = alpha.power(n), alpha.power(-n)
    i, j = _grid(p)

    rows = np.where(j == 0, (up * i + beta) % p, (up * i) % p)
    cols = np.where(j == 0, 0, (down * j) % p)

    return Encoding(p, e.table[rows, cols])


def apply_psi(
    n: ExpElem | int,
    beta: FpElem | int,
    e: Encoding,
    alpha: PrimitiveRoot | None = None,
    check: bool = True,
) -> Encoding:
    """
    psi_(n, beta)(e)(i, j) = e(0, alpha^-n j + beta) for i = 0 and e(alpha^n i, alpha^-n j) otherwise.

    Raises PreconditionException if e is not in E2, unless check is disabled by a caller that already knows it is.
    """

    p = e.p
    alpha = _root(p, alpha)
    if check and not in_E2(e):
        raise PreconditionException("Psi acts on E2 only.", encoding=e)

    n, beta = int(n), int(beta)
    up, down = alpha.power(n), alpha.power(-n)
    i, j = _grid(p)

    rows = np.where(i == 0, 0, (up * i) % p)
    cols = np.where(i == 0, (down * j + beta) % p, (down * j) % p)

    return Encoding(p, e.table[rows, cols])


def expand_id(id: EncodingId, alpha: PrimitiveRoot | None = None) -> Encoding:
    """The encoding an id describes, with the id attached."""

    base = make_base(id.base, id.p)
    action = apply_phi if id.action == Action.PHI else apply_psi

    return action(id.n, id.beta, base, alpha, check=False).with_id(id)


def random_bijection(p: int, rng: np.random.Generator) -> Encoding:
    """Uniformly random bijection of F_p x F_p, shuffled Fisher-Yates style by the generator."""

    order = rng.permutation(p * p)
    return Encoding(p, np.stack([order // p, order % p], axis=-1))
