import itertools

import numpy as np
import pytest

from private_product.errors import InvalidArgumentsException
from private_product.field import FpElem
from private_product.qudit import (
    BellLabel,
    LocalOp,
    Qudit,
    StateVec,
    apply_pair,
    bell_measure,
    bell_state,
    equal_up_to_phase,
    label_after,
    pauli_x_z,
    reduce_ops,
    reduce_to_label,
)

sqrt_half = 1 / np.sqrt(2)


def labels(p):
    return [BellLabel(a, b, p) for a in range(p) for b in range(p)]


@pytest.mark.asyncio
class TestBellState:
    async def test_bell_state__binary_zero_label__returns_phi_plus(self):
        state = bell_state(BellLabel(0, 0, 2))

        np.testing.assert_allclose(state.amplitudes, [sqrt_half, 0, 0, sqrt_half], atol=1e-12)

    async def test_bell_state__binary_one_one_label__returns_singlet(self):
        state = bell_state(BellLabel(1, 1, 2))

        # (|10> - |01>) / sqrt(2)
        np.testing.assert_allclose(state.amplitudes, [0, -sqrt_half, sqrt_half, 0], atol=1e-12)

    async def test_bell_state__ternary_zero_label__returns_uniform_diagonal(self):
        state = bell_state(BellLabel(0, 0, 3))

        expected = np.zeros(9)
        expected[[0, 4, 8]] = 1 / np.sqrt(3)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)

    @pytest.mark.parametrize("p", [2, 3, 5])
    async def test_bell_state__all_label_pairs__are_orthonormal(self, p: int):
        for l1, l2 in itertools.product(labels(p), repeat=2):
            overlap = abs(np.vdot(bell_state(l1).amplitudes, bell_state(l2).amplitudes))
            if l1 == l2:
                assert abs(overlap - 1) < 1e-9
            else:
                assert overlap < 1e-9

    async def test_bell_state__prime_above_numeric_cap__raises_error(self):
        with pytest.raises(InvalidArgumentsException):
            bell_state(BellLabel(0, 0, 101))


@pytest.mark.asyncio
class TestApplyPair:
    async def test_apply_pair__worked_example_operators__reach_label_one_three(self):
        state = apply_pair(LocalOp(1, 0, 5), LocalOp(0, 3, 5), bell_state(BellLabel(0, 0, 5)))

        assert equal_up_to_phase(state, bell_state(BellLabel(1, 3, 5)))

    async def test_apply_pair__phase_only_operators__return_to_label_zero(self):
        state = apply_pair(LocalOp(0, 2, 5), LocalOp(0, 3, 5), bell_state(BellLabel(0, 0, 5)))

        assert equal_up_to_phase(state, bell_state(BellLabel(0, 0, 5)))

    async def test_apply_pair__identity_operators__return_same_amplitudes(self):
        for p in [2, 3, 5]:
            for label in labels(p):
                state = bell_state(label)
                result = apply_pair(LocalOp.identity(p), LocalOp.identity(p), state)
                np.testing.assert_array_equal(result.amplitudes, state.amplitudes)

    async def test_apply_pair__different_moduli__raises_error(self):
        with pytest.raises(InvalidArgumentsException):
            apply_pair(LocalOp(1, 0, 3), LocalOp(0, 1, 5), bell_state(BellLabel(0, 0, 3)))

    @pytest.mark.parametrize("p", [2, 3, 5])
    async def test_apply_pair__all_operator_parameters__preserve_norm(self, p: int):
        start = bell_state(BellLabel(0, 0, p))

        for xa, za, xb, zb in itertools.product(range(p), repeat=4):
            state = apply_pair(LocalOp(xa, za, p), LocalOp(xb, zb, p), start)
            assert abs(np.linalg.norm(state.amplitudes) - 1) < 1e-9

    @pytest.mark.parametrize("p", [2, 3])
    async def test_apply_pair__all_parameters_and_labels__reduce_to_one_sided_operator(self, p: int):
        cases = 0
        for xa, za, xb, zb, i, j in itertools.product(range(p), repeat=6):
            state = bell_state(BellLabel(i, j, p))
            two_sided = apply_pair(LocalOp(xa, za, p), LocalOp(xb, zb, p), state)
            one_sided = apply_pair(LocalOp(xa - xb, za + zb, p), LocalOp.identity(p), state)
            assert equal_up_to_phase(two_sided, one_sided, 1e-9)
            cases += 1

        assert cases == p**6

    @pytest.mark.parametrize("p", [2, 3, 5])
    async def test_apply_pair__all_parameters__agree_with_symbolic_label(self, p: int):
        start = bell_state(BellLabel(0, 0, p))

        for xa, za, xb, zb in itertools.product(range(p), repeat=4):
            op_a, op_b = LocalOp(xa, za, p), LocalOp(xb, zb, p)
            state = apply_pair(op_a, op_b, start)
            assert equal_up_to_phase(state, bell_state(reduce_ops(op_a, op_b)))


@pytest.mark.asyncio
class TestEqualUpToPhase:
    async def test_equal_up_to_phase__same_state__returns_true(self):
        state = bell_state(BellLabel(1, 2, 3))

        assert equal_up_to_phase(state, state)

    async def test_equal_up_to_phase__negated_state__returns_true(self):
        state = bell_state(BellLabel(1, 2, 3))

        assert equal_up_to_phase(state, -1 * state)

    async def test_equal_up_to_phase__orthogonal_states__returns_false(self):
        assert not equal_up_to_phase(bell_state(BellLabel(0, 0, 2)), bell_state(BellLabel(0, 1, 2)))


@pytest.mark.asyncio
class TestBellMeasure:
    async def test_bell_measure__bell_state__returns_its_label(self):
        rng = np.random.default_rng(3)

        for _ in range(20):
            assert bell_measure(bell_state(BellLabel(1, 3, 5)), rng) == BellLabel(1, 3, 5)

    async def test_bell_measure__phase_shifted_bell_state__returns_its_label(self):
        rng = np.random.default_rng(4)

        assert bell_measure(-1 * bell_state(BellLabel(1, 1, 2)), rng) == BellLabel(1, 1, 2)

    async def test_bell_measure__superposition__samples_born_rule_frequencies(self):
        rng = np.random.default_rng(2024)
        state = StateVec(2, [sqrt_half, sqrt_half, 0, 0])
        draws = 100_000

        counts = {}
        for _ in range(draws):
            outcome = bell_measure(state, rng).as_tuple()
            counts[outcome] = counts.get(outcome, 0) + 1

        for outcome in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            assert abs(counts.get(outcome, 0) / draws - 0.25) < 0.01


@pytest.mark.asyncio
class TestReduceToLabel:
    async def test_reduce_to_label__z_tensor_x__returns_label_one_one(self):
        label = reduce_to_label(FpElem(0, 2), FpElem(1, 2), FpElem(1, 2), FpElem(0, 2))

        assert label == BellLabel(1, 1, 2)

    async def test_reduce_to_label__x_tensor_x__returns_label_zero_zero(self):
        label = reduce_to_label(FpElem(1, 2), FpElem(0, 2), FpElem(1, 2), FpElem(0, 2))

        assert label == BellLabel(0, 0, 2)

    async def test_reduce_to_label__zero_parameters__returns_label_zero_zero(self):
        zero = FpElem(0, 7)

        assert reduce_to_label(zero, zero, zero, zero) == BellLabel(0, 0, 7)

    async def test_reduce_to_label__different_moduli__raises_error(self):
        with pytest.raises(InvalidArgumentsException):
            reduce_to_label(FpElem(0, 2), FpElem(0, 2), FpElem(0, 3), FpElem(0, 2))

    @pytest.mark.parametrize("p", [2, 3])
    async def test_label_after__each_half__matches_numeric_simulation(self, p: int):
        for label in labels(p):
            for x, z in itertools.product(range(p), repeat=2):
                op = LocalOp(x, z, p)
                for qudit in Qudit:
                    state = pauli_x_z(op, bell_state(label), qudit)
                    assert equal_up_to_phase(state, bell_state(label_after(label, op, qudit)))


@pytest.mark.asyncio
class TestStateVec:
    async def test_init__unnormalized_amplitudes__raises_error(self):
        with pytest.raises(InvalidArgumentsException):
            StateVec(2, [1, 1, 0, 0])

    async def test_serialize__bell_state__writes_row_major_pairs(self):
        state = bell_state(BellLabel(0, 0, 2))

        body = state.serialize()

        assert StateVec.deserialize(body).p == 2
        np.testing.assert_allclose(StateVec.deserialize(body).amplitudes, state.amplitudes)
