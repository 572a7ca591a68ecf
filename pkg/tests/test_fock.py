import math

import numpy as np
import pytest

from twomode.config import DEFAULT_SETTINGS
from twomode.errors import InvalidArgumentError, PrecisionError, ResourceError
from twomode.fock import (
    ExponentialOperator,
    MatrixOperator,
    TwoModeState,
    annihilation,
    annihilation_single,
    creation,
    creation_single,
    embed,
    expectation,
    identity_operator,
    interior_indices,
    number,
    number_single,
    quadrature,
    variance,
)
from twomode.util import Cutoffs
from tests.utils import random_state


class TestSingleMode:
    def test_annihilation(self):
        expected = np.array(
            [[0, 1, 0], [0, 0, math.sqrt(2)], [0, 0, 0]], dtype=np.float64
        )

        assert np.allclose(annihilation_single(3), expected)
        assert np.allclose(creation_single(3), expected.T)
        assert np.allclose(number_single(3), np.diag([0, 1, 2]))

    def test_invalid_cutoff(self):
        with pytest.raises(InvalidArgumentError):
            annihilation_single(0)


class TestTwoModeState:
    def test_fock(self):
        state = TwoModeState.fock(2, 1, 3, 4)

        assert state.cutoffs == Cutoffs(3, 4)
        assert state.vector[2 * 4 + 1] == 1
        assert state.norm() == 1

    def test_fock_outside(self):
        with pytest.raises(InvalidArgumentError, match="does not fit inside"):
            TwoModeState.fock(3, 0, 3, 3)

    @pytest.mark.parametrize("coeffs", [[], [1, 2], [[1, float("nan")]]])
    def test_invalid_coefficients(self, coeffs):
        with pytest.raises(InvalidArgumentError):
            TwoModeState(coeffs)

    def test_immutable(self):
        state = TwoModeState.fock(0, 0, 2, 2)

        with pytest.raises(ValueError):
            state.coeffs[0, 0] = 2

    def test_normalize_zero(self):
        with pytest.raises(InvalidArgumentError, match="zero vector"):
            TwoModeState(np.zeros((2, 2))).normalize()

    def test_overlap_and_swap(self, rng):
        state = random_state(rng, 4, 3)
        swapped = state.swap_modes()

        assert swapped.cutoffs == Cutoffs(3, 4)
        assert np.allclose(swapped.swap_modes().coeffs, state.coeffs)
        assert state.overlap(state * 1j) == pytest.approx(1.0)

    def test_cutoff_mismatch(self):
        with pytest.raises(InvalidArgumentError, match="cutoff mismatch"):
            TwoModeState.fock(0, 0, 2, 2).inner(TwoModeState.fock(0, 0, 2, 3))

    def test_crop_loss(self):
        state = TwoModeState.product([1, 1], [1]).normalize()
        cropped = state.with_cutoffs(1, 1)

        assert cropped.truncation_loss == pytest.approx(0.5)
        assert state.with_cutoffs(4, 2).truncation_loss == 0.0
        assert state.with_cutoffs(4, 2).norm() == pytest.approx(1.0)

    def test_support_cutoffs(self):
        state = TwoModeState.fock(2, 1, 5, 5)

        assert state.support_cutoffs(1e-12) == Cutoffs(3, 2)

    def test_wire_format(self, rng):
        state = random_state(rng, 2, 3)
        payload = state.to_dict()

        assert payload["cutoff_a"] == 2
        assert len(payload["coeffs"]) == 6
        assert np.allclose(TwoModeState.from_dict(payload).coeffs, state.coeffs)

    @pytest.mark.parametrize(
        "payload",
        [
            {"cutoff_a": 1, "cutoff_b": 1},
            {"cutoff_a": 1, "cutoff_b": 1, "coeffs": [1.0]},
            {"cutoff_a": 1, "cutoff_b": 2, "coeffs": [[1.0, 0.0]]},
        ],
    )
    def test_malformed_payload(self, payload):
        with pytest.raises(InvalidArgumentError):
            TwoModeState.from_dict(payload)


class TestEmbedding:
    def test_flattened_convention(self):
        single = annihilation_single(2)
        operator = embed("A", single, 2, 3)

        assert np.allclose(operator.matrix, np.kron(single, np.eye(3)))
        assert np.allclose(
            embed("B", annihilation_single(3), 2, 3).matrix,
            np.kron(np.eye(2), annihilation_single(3)),
        )

    def test_shape_mismatch(self):
        with pytest.raises(InvalidArgumentError, match="does not match cutoff 3"):
            embed("A", annihilation_single(2), 3, 3)

    def test_unknown_mode(self):
        with pytest.raises(InvalidArgumentError, match="mode must be"):
            annihilation("C", 2, 2)

    def test_matrix_operator(self):
        with pytest.raises(InvalidArgumentError, match="does not act on"):
            MatrixOperator(np.eye(3), 2, 2)


class TestLadderPolynomial:
    def test_interior_commutator(self):
        lower = annihilation("A", 4, 3)
        commutator = lower @ lower.dag() - lower.dag() @ lower

        assert np.allclose(commutator.interior_block(), np.eye(3 * 2))

    def test_canonical_commutator(self):
        x_a, p_a = (quadrature("A", which, 4, 3) for which in "xp")
        block = (x_a @ p_a - p_a @ x_a).exact_block()

        assert np.allclose(block, 1j * np.eye(4 * 3), atol=1e-12)

    def test_epr_pair_commutes(self):
        x_a, p_a = (quadrature("A", which, 4, 4) for which in "xp")
        x_b, p_b = (quadrature("B", which, 4, 4) for which in "xp")
        relative, total = x_a - x_b, p_a + p_b
        block = (relative @ total - total @ relative).exact_block()

        assert np.allclose(block, 0, atol=1e-12)

    def test_exact_block(self):
        lower = annihilation("A", 3, 2)
        block = (lower @ lower.dag()).exact_block()

        assert np.allclose(block, np.diag([1, 1, 2, 2, 3, 3]))

    def test_exact_block_dense_limit(self):
        settings = DEFAULT_SETTINGS.replace(dense_limit=4)

        with pytest.raises(ResourceError, match="exceeds the dense limit of 4"):
            annihilation("A", 3, 2, settings).exact_block()

    def test_edge_loss(self):
        image, loss = creation("A", 3, 3).apply(TwoModeState.fock(2, 0, 3, 3))

        assert loss == pytest.approx(3.0)
        assert image.norm() == 0

    def test_interior_action_is_exact(self):
        image, loss = creation("B", 3, 3).apply(TwoModeState.fock(1, 1, 3, 3))

        assert loss == 0
        assert image.coeffs[1, 2] == pytest.approx(math.sqrt(2))

    def test_hermiticity(self):
        x_a = quadrature("A", "x", 5, 4)

        assert x_a.hermitian
        assert x_a.hermiticity_defect() == 0.0
        assert not annihilation("A", 5, 4).hermitian

    def test_as_hermitian_rejects(self):
        with pytest.raises(PrecisionError, match="not Hermitian"):
            annihilation("A", 3, 3).as_hermitian()

    def test_unknown_quadrature(self):
        with pytest.raises(InvalidArgumentError, match="quadrature must be"):
            quadrature("A", "q", 3, 3)

    def test_cutoff_mismatch(self):
        with pytest.raises(InvalidArgumentError, match="cutoff mismatch"):
            annihilation("A", 3, 3) + annihilation("B", 3, 4)

    def test_scalar_arithmetic(self):
        number_a = number("A", 3, 2)
        doubled = 2 * number_a - number_a / 2

        assert np.allclose(doubled.matrix, 1.5 * number_a.matrix)
        assert doubled.hermitian
        assert not (1j * number_a).hermitian


class TestExpectations:
    def test_number(self):
        state = TwoModeState.fock(2, 1, 4, 4)

        assert expectation(number("A", 4, 4), state) == pytest.approx(2.0)
        assert expectation(number("B", 4, 4), state) == pytest.approx(1.0)

    def test_linearity(self, rng):
        state = random_state(rng, 5, 4)
        number_a, number_b = number("A", 5, 4), number("B", 5, 4)

        assert expectation(number_a + 2 * number_b, state) == pytest.approx(
            expectation(number_a, state) + 2 * expectation(number_b, state)
        )

    def test_identity(self, rng):
        state = random_state(rng, 3, 3) * 2.5

        assert expectation(identity_operator(3, 3), state) == pytest.approx(1.0)

    def test_vacuum_quadrature_variance(self):
        state = TwoModeState.fock(0, 0, 1, 1)

        assert variance(quadrature("A", "x", 1, 1), state) == pytest.approx(0.5)

    def test_variance_requires_hermitian(self, vacuum):
        with pytest.raises(InvalidArgumentError, match="Hermitian operator"):
            variance(annihilation("A", 4, 4), vacuum)


class TestExponentialOperator:
    def test_requires_anti_hermitian(self):
        with pytest.raises(InvalidArgumentError, match="anti-Hermitian"):
            ExponentialOperator(quadrature("A", "x", 4, 4))

    def test_displacement(self):
        amplitude = 0.6 - 0.3j
        generator = amplitude * creation("A", 12, 2) - amplitude.conjugate() * (
            annihilation("A", 12, 2)
        )
        displacement = ExponentialOperator(generator)
        image, loss = displacement.apply(TwoModeState.fock(0, 0, 12, 2))
        n = np.arange(12)
        expected = (
            np.exp(-abs(amplitude) ** 2 / 2)
            * amplitude**n
            / np.sqrt([math.factorial(k) for k in n])
        )

        assert np.allclose(image.coeffs[:, 0], expected, atol=1e-10)
        assert loss < 1e-12
        assert displacement.unitarity_defect(4, 2) < 1e-10

    def test_dense_limit(self):
        settings = DEFAULT_SETTINGS.replace(dense_limit=10)
        generator = creation("A", 2, 2, settings) - annihilation("A", 2, 2, settings)

        with pytest.raises(ResourceError):
            ExponentialOperator(generator).sparse


def test_interior_indices():
    assert list(interior_indices(3, 2)) == [0, 2]
