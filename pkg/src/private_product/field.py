"""Module containing exact arithmetic in F_p and Z_(p-1), primitive roots and the semidirect product group acting on encodings."""

from __future__ import annotations

import operator

from functools import lru_cache

from .errors import InvalidArgumentsException

_MAX_PRIME = 2**16


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Trial division primality check."""

    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return tuple(factors)


class Prime:
    """Prime modulus of the field F_p. Validated on construction."""

    __slots__ = ("_p",)

    def __init__(self, p: int | Prime) -> None:
        if isinstance(p, Prime):
            p = p.p

        try:
            value = operator.index(p)
        except TypeError as e:
            raise InvalidArgumentsException("Provided modulus is not an integer.", p=p) from e

        if isinstance(p, bool) or not is_prime(value) or value > _MAX_PRIME:
            raise InvalidArgumentsException("Provided modulus is not a supported prime.", p=p)

        p = value

        self._p = p

    @property
    def p(self) -> int:
        return self._p

    def __int__(self) -> int:
        return self._p

    def __index__(self) -> int:
        return self._p

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Prime):
            return self._p == other._p
        if isinstance(other, int):
            return self._p == other
        return False

    def __hash__(self) -> int:
        return hash(self._p)

    def __repr__(self) -> str:
        return f"Prime({self._p})"


def as_prime(p: int | Prime) -> Prime:
    return p if isinstance(p, Prime) else Prime(p)


def _check_same_modulus(left: int, right: int) -> None:
    if left != right:
        raise InvalidArgumentsException("Operands belong to different fields.", left=left, right=right)


class FpElem:
    """Element of F_p, stored reduced into [0, p)."""

    __slots__ = ("_value", "_p")

    def __init__(self, value: int, modulus: int | Prime) -> None:
        self._p = as_prime(modulus).p
        self._value = int(value) % self._p

    @property
    def value(self) -> int:
        return self._value

    @property
    def modulus(self) -> int:
        return self._p

    def _coerce(self, other: FpElem | int) -> int:
        if isinstance(other, FpElem):
            _check_same_modulus(self._p, other._p)
            return other._value
        try:
            return operator.index(other)
        except TypeError:
            return NotImplemented

    def __add__(self, other: FpElem | int) -> FpElem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(self._value + o, self._p)

    __radd__ = __add__

    def __sub__(self, other: FpElem | int) -> FpElem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(self._value - o, self._p)

    def __rsub__(self, other: int) -> FpElem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(o - self._value, self._p)

    def __mul__(self, other: FpElem | int) -> FpElem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(self._value * o, self._p)

    __rmul__ = __mul__

    def __neg__(self) -> FpElem:
        return FpElem(-self._value, self._p)

    def inverse(self) -> FpElem:
        if self._value == 0:
            raise InvalidArgumentsException("Zero has no multiplicative inverse.", p=self._p)
        return FpElem(pow(self._value, -1, self._p), self._p)

    def __int__(self) -> int:
        return self._value

    def __index__(self) -> int:
        return self._value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FpElem):
            return self._p == other._p and self._value == other._value
        if isinstance(other, int) and not isinstance(other, bool):
            return self._value == other % self._p
        return False

    def __hash__(self) -> int:
        return hash((self._value, self._p))

    def __repr__(self) -> str:
        return f"FpElem({self._value}, {self._p})"


class ExpElem:
    """Element of the additive group Z_(p-1) of exponents of a primitive root. For p = 2 the group is trivial."""

    __slots__ = ("_value", "_p")

    def __init__(self, value: int, modulus: int | Prime) -> None:
        self._p = as_prime(modulus).p
        self._value = int(value) % (self._p - 1)

    @property
    def value(self) -> int:
        return self._value

    @property
    def modulus(self) -> int:
        """The order p - 1 of the exponent group."""

        return self._p - 1

    @property
    def p(self) -> int:
        return self._p

    def __add__(self, other: ExpElem | int) -> ExpElem:
        if isinstance(other, ExpElem):
            _check_same_modulus(self._p, other._p)
            other = other._value
        return ExpElem(self._value + other, self._p)

    __radd__ = __add__

    def __neg__(self) -> ExpElem:
        return ExpElem(-self._value, self._p)

    def __int__(self) -> int:
        return self._value

    def __index__(self) -> int:
        return self._value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExpElem):
            return self._p == other._p and self._value == other._value
        if isinstance(other, int) and not isinstance(other, bool):
            return self._value == other % (self._p - 1)
        return False

    def __hash__(self) -> int:
        return hash((self._value, self._p, "exp"))

    def __repr__(self) -> str:
        return f"ExpElem({self._value}, {self._p})"


class GroupElem:
    """Element (n, beta) of the semidirect product Z_(p-1) x F_p."""

    __slots__ = ("_n", "_beta")

    def __init__(self, n: ExpElem | int, beta: FpElem | int, modulus: int | Prime | None = None) -> None:
        if modulus is None:
            if isinstance(n, ExpElem):
                modulus = n.p
            elif isinstance(beta, FpElem):
                modulus = beta.modulus
            else:
                raise InvalidArgumentsException("Modulus is required when both components are plain integers.", n=n, beta=beta)

        n = n if isinstance(n, ExpElem) else ExpElem(n, modulus)
        beta = beta if isinstance(beta, FpElem) else FpElem(beta, modulus)

        _check_same_modulus(n.p, int(modulus))
        _check_same_modulus(beta.modulus, int(modulus))

        self._n = n
        self._beta = beta

    @property
    def n(self) -> ExpElem:
        return self._n

    @property
    def beta(self) -> FpElem:
        return self._beta

    @property
    def p(self) -> int:
        return self._beta.modulus

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElem):
            return False
        return self._n == other._n and self._beta == other._beta

    def __hash__(self) -> int:
        return hash((self._n, self._beta))

    def __repr__(self) -> str:
        return f"GroupElem(n={self._n.value}, beta={self._beta.value}, p={self.p})"


class PrimitiveRoot:
    """Generator alpha of the multiplicative group F_p*, with a table of its powers."""

    __slots__ = ("_alpha", "_powers")

    def __init__(self, alpha: FpElem) -> None:
        p = alpha.modulus
        powers = [1]
        for _ in range(p - 2):
            powers.append(powers[-1] * alpha.value % p)

        if alpha.value == 0 or len(set(powers)) != p - 1 or powers[-1] * alpha.value % p != 1:
            raise InvalidArgumentsException("Provided element is not a primitive root.", alpha=alpha.value, p=p)

        self._alpha = alpha
        self._powers = tuple(powers)

    @property
    def alpha(self) -> FpElem:
        return self._alpha

    @property
    def p(self) -> int:
        return self._alpha.modulus

    def power(self, n: int) -> int:
        """alpha^n as a plain integer; n is reduced modulo p - 1 first, so negative exponents are inverses."""

        return self._powers[n % (self.p - 1)]

    def log(self, value: int) -> int:
        """Discrete logarithm of a non-zero value."""

        value %= self.p
        if value == 0:
            raise InvalidArgumentsException("Zero has no discrete logarithm.", p=self.p)
        return self._powers.index(value)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimitiveRoot):
            return False
        return self._alpha == other._alpha

    def __hash__(self) -> int:
        return hash(self._alpha)

    def __repr__(self) -> str:
        return f"PrimitiveRoot({self._alpha.value}, p={self.p})"


@lru_cache(maxsize=None)
def _smallest_primitive_root(p: int) -> int:
    order = p - 1
    for candidate in range(1, p):
        if all(pow(candidate, order // q, p) != 1 for q in _prime_factors(order)):
            return candidate
    raise AssertionError(f"no primitive root found for prime {p}")


def find_primitive_root(p: int | Prime) -> PrimitiveRoot:
    """Returns the smallest positive integer of multiplicative order p - 1 modulo p."""

    prime = as_prime(p)
    return PrimitiveRoot(FpElem(_smallest_primitive_root(prime.p), prime))


def alpha_pow(alpha: PrimitiveRoot, n: ExpElem | int) -> FpElem:
    """Returns alpha^n in F_p; negative exponents are reduced modulo p - 1 first."""

    if isinstance(n, ExpElem):
        _check_same_modulus(n.p, alpha.p)
        n = n.value
    return FpElem(alpha.power(n), alpha.p)


def _root_for(g: GroupElem, alpha: PrimitiveRoot | None) -> PrimitiveRoot:
    if alpha is None:
        return find_primitive_root(g.p)
    _check_same_modulus(g.p, alpha.p)
    return alpha


def group_compose(g: GroupElem, g2: GroupElem, alpha: PrimitiveRoot | None = None) -> GroupElem:
    """Composition (n, beta) o (n', beta') = (n + n', alpha^n' beta + beta')."""

    _check_same_modulus(g.p, g2.p)
    alpha = _root_for(g, alpha)

    return GroupElem(g.n + g2.n, alpha_pow(alpha, g2.n) * g.beta + g2.beta)


def group_compose_dual(g: GroupElem, g2: GroupElem, alpha: PrimitiveRoot | None = None) -> GroupElem:
    """
    Composition (n, beta) o (n', beta') = (n + n', alpha^-n' beta + beta').

    This is the law under which the psi maps compose. It is isomorphic to group_compose through (n, beta) -> (-n, beta).
    """

    _check_same_modulus(g.p, g2.p)
    alpha = _root_for(g, alpha)

    return GroupElem(g.n + g2.n, alpha_pow(alpha, -g2.n.value) * g.beta + g2.beta)


def group_inverse(g: GroupElem, alpha: PrimitiveRoot | None = None) -> GroupElem:
    """Inverse of (n, beta) under group_compose, which is (-n, -alpha^-n beta)."""

    alpha = _root_for(g, alpha)

    return GroupElem(-g.n, -(alpha_pow(alpha, -g.n.value) * g.beta))


def group_identity(p: int | Prime) -> GroupElem:
    return GroupElem(0, 0, p)


def group_elements(p: int | Prime) -> list[GroupElem]:
    """All p(p - 1) group elements in (n, beta) lexicographic order."""

    prime = as_prime(p)
    return [GroupElem(n, beta, prime) for n in range(prime.p - 1) for beta in range(prime.p)]
