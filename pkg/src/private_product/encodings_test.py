import itertools
import json

import numpy as np
import pytest

from private_product.encodings import (
    Action,
    Base,
    CoordMatrix,
    Encoding,
    EncodingId,
    apply_phi,
    apply_psi,
    basis_matrix_c,
    basis_matrix_r,
    coordinate_matrices,
    expand_id,
    has_property_P,
    in_E1,
    in_E2,
    is_product_compatible,
    make_eps0,
    make_eps0T,
    product_map,
    property_p_violation,
    random_bijection,
)
from private_product.errors import InvalidArgumentsException, InvalidEncodingException, PreconditionException
from private_product.field import FpElem, GroupElem, find_primitive_root, group_compose, group_compose_dual, group_elements


def swapped_eps0(p: int) -> Encoding:
    table = make_eps0(p).table.copy()
    table[1, 1], table[1, 2] = table[1, 2].copy(), table[1, 1].copy()
    return Encoding(p, table)


def all_binary_bijections():
    pairs = [(a, b) for a in range(2) for b in range(2)]
    for order in itertools.permutations(pairs):
        yield Encoding(2, list(order))


@pytest.mark.asyncio
class TestEncoding:
    async def test_init__repeated_label__raises_error(self):
        with pytest.raises(InvalidEncodingException):
            Encoding(2, [(0, 0), (0, 0), (1, 0), (1, 1)])

    async def test_init__value_outside_field__raises_error(self):
        with pytest.raises(InvalidEncodingException):
            Encoding(2, [(0, 0), (0, 1), (1, 0), (2, 1)])

    async def test_init__wrong_number_of_entries__raises_error(self):
        with pytest.raises(InvalidEncodingException):
            Encoding(3, [(0, 0), (0, 1), (1, 0), (1, 1)])

    async def test_init__fractional_entries__raises_error(self):
        with pytest.raises(InvalidEncodingException):
            Encoding(2, [[[0, 0.5], [0, 1]], [[1, 0], [1, 1.9]]])

    async def test_init__entry_beyond_int64__raises_error(self):
        with pytest.raises(InvalidEncodingException):
            Encoding(2, [(0, 0), (0, 1), (1, 0), (1, 2**70)])

    async def test_deserialize__fractional_entries__raises_error(self):
        body = {"p": 2, "id": None, "table": [[0, 0], [0, 1.5], [1, 0], [1, 1]]}

        with pytest.raises(InvalidEncodingException):
            Encoding.deserialize(json.dumps(body))

    async def test_init__valid_table__is_read_only(self):
        e = make_eps0(3)

        with pytest.raises(ValueError):
            e.table[0, 0, 0] = 1

    async def test_eq__same_table_different_id__returns_true(self):
        e = make_eps0(5)

        assert e.with_id(EncodingId(Base.EPS0, Action.PHI, 0, 0, 5)) == e
        assert hash(e.with_id(EncodingId(Base.EPS0, Action.PSI, 0, 0, 5))) == hash(e)

    async def test_call__eps0_and_eps0T__return_identity_and_transpose(self):
        assert make_eps0(5)(2, 4) == (2, 4)
        assert make_eps0T(5)(2, 4) == (4, 2)
        assert make_eps0T(5).label(FpElem(2, 5), FpElem(4, 5)).as_tuple() == (4, 2)

    async def test_serialize__member_with_id__writes_id_and_row_major_table(self):
        e = make_eps0T(2).with_id(EncodingId(Base.EPS0T, Action.PHI, 0, 0, 2))

        body = json.loads(e.serialize())

        assert body == {
            "p": 2,
            "id": {"base": "eps0T", "action": "phi", "n": 0, "beta": 0},
            "table": [[0, 0], [1, 0], [0, 1], [1, 1]],
        }
        assert Encoding.deserialize(e.serialize()) == e
        assert Encoding.deserialize(e.serialize()).id == e.id

    async def test_deserialize__invalid_json__raises_error(self):
        with pytest.raises(InvalidEncodingException):
            Encoding.deserialize("{not json")

    async def test_deserialize__missing_table__raises_error(self):
        with pytest.raises(InvalidEncodingException):
            Encoding.deserialize('{"p": 2}')

    async def test_deserialize__composite_modulus__raises_error(self):
        with pytest.raises(InvalidArgumentsException):
            Encoding.deserialize('{"p": 4, "table": []}')


@pytest.mark.asyncio
class TestEncodingId:
    async def test_parse__worked_id__returns_components(self):
        id = EncodingId.parse("eps0:psi:3:2", 5)

        assert id.base == Base.EPS0
        assert id.action == Action.PSI
        assert id.n.value == 3
        assert id.beta.value == 2
        assert str(id) == "eps0:psi:3:2"

    async def test_parse__out_of_range_components__are_reduced(self):
        assert EncodingId.parse("eps0T:phi:5:7", 5) == EncodingId(Base.EPS0T, Action.PHI, 1, 2, 5)

    async def test_parse__wrong_number_of_parts__raises_error(self):
        with pytest.raises(InvalidArgumentsException):
            EncodingId.parse("eps0:psi:3", 5)

    async def test_parse__unknown_base__raises_error(self):
        with pytest.raises(InvalidEncodingException):
            EncodingId.parse("eps1:psi:3:2", 5)

    async def test_parse__non_integer_exponent__raises_error(self):
        with pytest.raises(InvalidEncodingException):
            EncodingId.parse("eps0:psi:x:2", 5)


@pytest.mark.asyncio
class TestProductCompatibility:
    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    async def test_is_product_compatible__base_encodings__returns_true(self, p: int):
        for e in [make_eps0(p), make_eps0T(p)]:
            assert is_product_compatible(e)
            assert in_E1(e)
            assert in_E2(e)

    async def test_is_product_compatible__swapped_entries__returns_false(self):
        assert not is_product_compatible(swapped_eps0(3))
        assert not in_E1(swapped_eps0(3))
        assert not in_E2(swapped_eps0(3))

    async def test_is_product_compatible__large_prime__classifies_base_and_swapped_tables(self):
        assert is_product_compatible(make_eps0(97))
        assert is_product_compatible(make_eps0T(97))
        assert not is_product_compatible(swapped_eps0(97))

    async def test_is_product_compatible__binary_bijections__matches_product_and_property_p(self):
        compatible = 0
        for e in all_binary_bijections():
            m_alpha, m_beta = coordinate_matrices(e)
            products = all(
                product_map(FpElem(i, 2), FpElem(j, 2)) == e(i, j)[0] * e(i, j)[1]
                for i, j in itertools.product(range(2), repeat=2)
            )
            expected = products and has_property_P(m_alpha) and has_property_P(m_beta)

            assert is_product_compatible(e) == expected
            compatible += expected

        # (1, 1) is pinned, the three zero-product labels may go anywhere
        assert compatible == 6

    async def test_is_product_compatible__random_ternary_bijections__matches_product_and_property_p(self):
        rng = np.random.default_rng(11)

        for _ in range(2000):
            e = random_bijection(3, rng)
            m_alpha, m_beta = coordinate_matrices(e)
            i, j = np.meshgrid(np.arange(3), np.arange(3), indexing="ij")
            products = np.all((e.table[..., 0] * e.table[..., 1]) % 3 == (i * j) % 3)

            assert is_product_compatible(e) == bool(products and has_property_P(m_alpha) and has_property_P(m_beta))

    async def test_in_E1__phi_of_eps0_with_shift__is_in_E1_only(self):
        e = apply_phi(0, 1, make_eps0(3))

        assert in_E1(e)
        assert not in_E2(e)

    async def test_in_E2__psi_of_eps0_with_shift__is_in_E2_only(self):
        e = apply_psi(0, 1, make_eps0(3))

        assert in_E2(e)
        assert not in_E1(e)


@pytest.mark.asyncio
class TestPropertyP:
    @pytest.mark.parametrize("p,expected", [(2, 8), (3, 243)])
    async def test_has_property_P__all_matrices__count_matches_row_plus_column_dimension(self, p: int, expected: int):
        count = sum(has_property_P(CoordMatrix(p, entries)) for entries in itertools.product(range(p), repeat=p * p))

        assert count == expected == p ** (2 * p - 1)

    @pytest.mark.parametrize("p", [2, 3, 5])
    async def test_has_property_P__basis_matrices__returns_true(self, p: int):
        for i in range(p):
            assert has_property_P(basis_matrix_r(p, i))
            assert has_property_P(basis_matrix_c(p, i))

    async def test_has_property_P__sum_of_basis_matrices__returns_true(self):
        m = basis_matrix_r(5, 1).scale(3) + basis_matrix_c(5, 4).scale(2) + basis_matrix_r(5, 2)

        assert has_property_P(m)

    async def test_property_p_violation__product_table__returns_failing_quadruple(self):
        m = CoordMatrix(3, [[i * j for j in range(3)] for i in range(3)])

        i, j, i2, j2 = property_p_violation(m)

        assert (m[i, j] + m[i2, j2] - m[i, j2] - m[i2, j]) % 3 != 0

    async def test_add__different_moduli__raises_error(self):
        with pytest.raises(InvalidArgumentsException):
            basis_matrix_r(3, 0) + basis_matrix_r(5, 0)


@pytest.mark.asyncio
class TestGroupActions:
    async def test_apply_psi__worked_example__encodes_inputs_as_expected_labels(self):
        alpha = find_primitive_root(5)

        e = apply_psi(3, 2, make_eps0(5), alpha)

        assert e(2, 4) == (1, 3)
        assert e(0, 4) == (0, 0)

    async def test_apply_phi__identity_element__returns_same_encoding(self):
        for e in [make_eps0(5), make_eps0T(5)]:
            assert apply_phi(0, 0, e) == e
            assert apply_psi(0, 0, e) == e

    async def test_apply_phi__encoding_outside_E1__raises_error(self):
        with pytest.raises(PreconditionException):
            apply_phi(1, 1, apply_psi(0, 1, make_eps0(3)))

    async def test_apply_psi__encoding_outside_E2__raises_error(self):
        with pytest.raises(PreconditionException):
            apply_psi(1, 1, swapped_eps0(3))

    async def test_apply_phi__foreign_primitive_root__raises_error(self):
        with pytest.raises(InvalidArgumentsException):
            apply_phi(1, 1, make_eps0(5), find_primitive_root(7))

    @pytest.mark.parametrize("p", [3, 5])
    async def test_apply_phi__all_group_pairs__follows_group_compose(self, p: int):
        alpha = find_primitive_root(p)

        for base in [make_eps0(p), make_eps0T(p)]:
            for outer, inner in itertools.product(group_elements(p), repeat=2):
                twice = apply_phi(outer.n, outer.beta, apply_phi(inner.n, inner.beta, base, alpha), alpha)
                composed = group_compose(outer, inner, alpha)

                assert twice == apply_phi(composed.n, composed.beta, base, alpha)

    @pytest.mark.parametrize("p", [3, 5])
    async def test_apply_psi__all_group_pairs__follows_dual_group_compose(self, p: int):
        alpha = find_primitive_root(p)

        for base in [make_eps0(p), make_eps0T(p)]:
            for outer, inner in itertools.product(group_elements(p), repeat=2):
                twice = apply_psi(outer.n, outer.beta, apply_psi(inner.n, inner.beta, base, alpha), alpha)
                composed = group_compose_dual(outer, inner, alpha)

                assert twice == apply_psi(composed.n, composed.beta, base, alpha)

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    async def test_apply_phi__all_group_elements__stay_product_compatible(self, p: int):
        for g in group_elements(p):
            for base in [make_eps0(p), make_eps0T(p)]:
                assert in_E1(apply_phi(g.n, g.beta, base))
                assert in_E2(apply_psi(g.n, g.beta, base))

    async def test_apply_phi__zero_shift__matches_psi_with_zero_shift(self):
        for g in group_elements(5):
            if g.beta.value == 0:
                assert apply_phi(g.n, 0, make_eps0(5)) == apply_psi(g.n, 0, make_eps0(5))

    async def test_expand_id__worked_id__attaches_id_to_psi_image(self):
        id = EncodingId.parse("eps0:psi:3:2", 5)

        e = expand_id(id)

        assert e.id == id
        assert e == apply_psi(3, 2, make_eps0(5))
        assert GroupElem(id.n, id.beta) == GroupElem(3, 2, 5)


@pytest.mark.asyncio
class TestRandomBijection:
    async def test_random_bijection__same_seed__returns_same_table(self):
        first = random_bijection(5, np.random.default_rng(42))
        second = random_bijection(5, np.random.default_rng(42))

        assert first == second

    async def test_random_bijection__many_draws__are_valid_and_vary(self):
        rng = np.random.default_rng(1)

        tables = {random_bijection(3, rng) for _ in range(50)}

        assert len(tables) > 1
