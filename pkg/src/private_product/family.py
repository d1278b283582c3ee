"""Module containing the private product family E built as the union of the phi and psi orbits of the two base encodings."""

from __future__ import annotations

import json
import logging

from .encodings import Action, Base, Encoding, EncodingId, expand_id
from .errors import InvalidArgumentsException
from .field import PrimitiveRoot, as_prime, find_primitive_root

_LOGGER = logging.getLogger(__name__)


class FamilyE:
    """
    FamilyE model representing a (multi)set of encodings together with the ids that construct each member.

    Members keep their first-seen order. Families built from raw tables carry no ids.
    """

    def __init__(
        self,
        p: int,
        members: list[Encoding],
        id_index: dict[EncodingId, Encoding] | None = None,
        alpha: PrimitiveRoot | None = None,
    ) -> None:
        self._p = as_prime(p).p
        self._alpha = alpha if alpha is not None else find_primitive_root(self._p)

        if any(e.p != self._p for e in members):
            raise InvalidArgumentsException("Family members belong to different fields.", p=self._p)

        self._members = list(members)
        self._id_index = dict(id_index or {})

        self._ids_by_member: dict[Encoding, list[EncodingId]] = {}
        for id, member in self._id_index.items():
            self._ids_by_member.setdefault(member, []).append(id)

    @property
    def p(self) -> int:
        return self._p

    @property
    def alpha(self) -> PrimitiveRoot:
        return self._alpha

    @property
    def members(self) -> list[Encoding]:
        return self._members

    @property
    def id_index(self) -> dict[EncodingId, Encoding]:
        return self._id_index

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self):
        return iter(self._members)

    def __contains__(self, e: Encoding) -> bool:
        return e in self._ids_by_member or e in self._members

    def ids_of(self, member: Encoding) -> list[EncodingId]:
        """Every id that produces the member, in enumeration order."""

        return list(self._ids_by_member.get(member, []))

    def orbit(self, base: Base, action: Action) -> list[Encoding]:
        """Distinct members reached by one action from one base encoding."""

        orbit = []
        for id, member in self._id_index.items():
            if id.base == base and id.action == action and member not in orbit:
                orbit.append(member)
        return orbit

    def partition(self) -> dict[str, int]:
        """Sizes of H1 minus H2, H2 minus H1 and their intersection, where Hk collects the members reached by phi (k=1) or psi (k=2)."""

        h1_only = h2_only = both = 0
        for member in self._ids_by_member:
            actions = {id.action for id in self._ids_by_member[member]}
            if actions == {Action.PHI}:
                h1_only += 1
            elif actions == {Action.PSI}:
                h2_only += 1
            else:
                both += 1

        return {"h1_only": h1_only, "h2_only": h2_only, "intersection": both}

    def as_dict(self) -> dict:
        return {
            "p": self._p,
            "alpha": self._alpha.alpha.value,
            "size": len(self._members),
            "partition": self.partition(),
            "members": [member.as_dict() for member in self._members],
        }

    def serialize(self) -> str:
        """Serialize family into a JSON string."""

        return json.dumps(self.as_dict())


def build_family(p: int, alpha: PrimitiveRoot | None = None) -> FamilyE:
    """
    Enumerates the four orbits G1 eps0, G1 eps0T, G2 eps0 and G2 eps0T and deduplicates them by table.

    The enumeration order is base, action, n, beta. Each member carries the first id that produced it.
    """

    p = as_prime(p).p
    alpha = alpha if alpha is not None else find_primitive_root(p)
    if alpha.p != p:
        raise InvalidArgumentsException("Primitive root belongs to a different field.", p=p, alpha=alpha)

    id_index: dict[EncodingId, Encoding] = {}
    first_ids: dict[Encoding, EncodingId] = {}

    for base in Base:
        for action in Action:
            for n in range(p - 1):
                for beta in range(p):
                    id = EncodingId(base, action, n, beta, p)
                    table = expand_id(id, alpha)
                    first = first_ids.setdefault(table, id)
                    id_index[id] = table.with_id(first)

    members = [table.with_id(id) for table, id in first_ids.items()]
    family = FamilyE(p, members, id_index, alpha)

    _LOGGER.debug("Built family at p=%d with %d members from %d ids", p, len(family), len(id_index))
    return family


def members_from_tables(p: int, encodings: list[Encoding], alpha: PrimitiveRoot | None = None) -> FamilyE:
    """Wraps an arbitrary list of encodings, duplicates included, as a family without ids."""

    return FamilyE(p, encodings, None, alpha)

