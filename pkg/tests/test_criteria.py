import json

import numpy as np
import pytest

from twomode import __version__
from twomode.config import DEFAULT_SETTINGS
from twomode.criteria import (
    Verdict,
    criteria_report,
    duan_bound,
    duan_test,
    duan_violation_threshold,
    epr_operators,
    judge,
    omega_operator,
    partial_transpose,
    pt_min_eigenvalue,
    pt_moment_identity_check,
    two_oscillator_operator,
    variance_criterion,
)
from twomode.entanglement import DensityMatrix
from twomode.errors import InvalidArgumentError
from twomode.fock import TwoModeState, expectation
from twomode.states import EnsLabel, collective_number, ens_family, ens_state, tmsv
from tests.utils import random_product, random_state


class TestJudge:
    @pytest.mark.parametrize(
        "value, bound, verdict",
        [
            (1.0, 2.0, Verdict.VIOLATED),
            (2.0, 2.0, Verdict.BOUNDARY),
            (2.0 - 1e-10, 2.0, Verdict.BOUNDARY),
            (2.0 + 1e-10, 2.0, Verdict.BOUNDARY),
            (3.0, 2.0, Verdict.SATISFIED),
        ],
    )
    def test_verdicts(self, value, bound, verdict):
        assert judge(value, bound) is verdict

    def test_custom_margin(self):
        settings = DEFAULT_SETTINGS.replace(verdict_margin=0.5)

        assert judge(1.75, 2.0, settings) is Verdict.BOUNDARY

    def test_entangled(self):
        assert Verdict.VIOLATED.entangled
        assert not Verdict.BOUNDARY.entangled
        assert not Verdict.INCONCLUSIVE.entangled
        assert Verdict.BOUNDARY.value == "satisfied (boundary)"


class TestOperators:
    def test_omega_identity(self):
        xi = 0.6
        omega = omega_operator(xi, 6, 6)
        count = collective_number("A", xi, 6, 6)
        expected = (1 / xi - xi) * (2 * count.exact_block() + np.eye(36))

        assert np.allclose(omega.exact_block(), expected, atol=1e-10)

    def test_two_oscillator_diagonal(self):
        xi = 0.4
        total = two_oscillator_operator(xi, 5, 5)
        count_a = collective_number("A", xi, 5, 5).exact_block()
        count_b = collective_number("B", xi, 5, 5).exact_block()
        expected = 2 * (1 / xi - xi) * (count_a + count_b + np.eye(25))

        assert np.allclose(total.exact_block(), expected, atol=1e-10)

    def test_epr_hermitian(self):
        plus, minus = epr_operators(0.5, 4, 4)

        assert plus.hermitian and minus.hermitian

    def test_invalid_xi(self):
        with pytest.raises(InvalidArgumentError, match="strictly inside"):
            epr_operators(1.2, 4, 4)

    def test_thresholds(self):
        assert duan_bound(0.5) == pytest.approx(2.5)
        assert duan_violation_threshold(0.7) == pytest.approx(0.49 / 0.51)


class TestDuan:
    def test_squeezed_vacuum(self):
        result = duan_test(tmsv(0.7, 48), 0.7)

        assert result.value == pytest.approx(1 / 0.7 - 0.7, abs=1e-8)
        assert result.verdict is Verdict.VIOLATED
        assert result.margin < 0

    @pytest.mark.parametrize("xi", [0.5, 0.7])
    def test_degenerate_superpositions(self, rng, xi):
        family = dict(ens_family(xi, 2, 4))

        for n_a in range(3):
            stack = np.array(
                [family[EnsLabel(n_a, n_b, xi)].coeffs for n_b in range(5)]
            )
            weights = rng.normal(size=5) + 1j * rng.normal(size=5)
            state = TwoModeState(np.tensordot(weights, stack, axes=1)).normalize()

            assert variance_criterion(state, xi).value <= 1e-7
            assert duan_test(state, xi).value == pytest.approx(
                (1 / xi - xi) * (2 * n_a + 1), abs=1e-7
            )

    def test_vacuum(self, vacuum):
        result = duan_test(vacuum, 0.5)

        assert result.value == pytest.approx(2.5, abs=1e-12)
        assert result.verdict is Verdict.BOUNDARY

    @pytest.mark.parametrize("n_a, n_b", [(0, 2), (1, 0), (3, 1)])
    def test_entangled_number_states(self, n_a, n_b):
        xi = 0.7
        result = duan_test(ens_state(EnsLabel(n_a, n_b, xi)), xi)
        expected = (1 / xi - xi) * (2 * n_a + 1)

        assert result.value == pytest.approx(expected, abs=1e-7)
        assert result.verdict.entangled == (n_a < duan_violation_threshold(xi))

    def test_products(self, rng):
        for _ in range(5):
            result = duan_test(random_product(rng, 6), 0.5)

            assert result.value >= duan_bound(0.5) - 1e-9


class TestVarianceCriterion:
    def test_entangled_number_state(self, ens_31):
        result = variance_criterion(ens_31, 0.5)

        assert result.value == pytest.approx(0.0, abs=1e-7)
        assert result.verdict is Verdict.VIOLATED

    def test_vacuum(self, vacuum):
        result = variance_criterion(vacuum, 0.5)

        assert result.value == pytest.approx(4.0, abs=1e-12)
        assert result.verdict is Verdict.BOUNDARY

    def test_products(self, rng):
        for _ in range(5):
            result = variance_criterion(random_product(rng, 6), 0.6)

            assert result.value >= 4.0 - 1e-8
            assert not result.verdict.entangled

    def test_mean_subtracted(self, ens_31):
        zero_mean = variance_criterion(ens_31, 0.5)
        subtracted = variance_criterion(ens_31, 0.5, mean_subtracted=True)

        assert subtracted.value == pytest.approx(zero_mean.value, abs=1e-7)


class TestPartialTranspose:
    def test_involution(self, rng):
        rho = DensityMatrix.from_state(random_state(rng, 3, 4))
        twice = partial_transpose(partial_transpose(rho))

        assert np.allclose(twice.matrix, rho.matrix)
        assert partial_transpose(rho).trace == pytest.approx(1.0)

    def test_modes_agree(self, rng):
        rho = DensityMatrix.from_state(random_state(rng, 3, 3))
        on_a = partial_transpose(rho, "A").eigenvalues()
        on_b = partial_transpose(rho, "B").eigenvalues()

        assert np.allclose(on_a, on_b, atol=1e-12)

    def test_needs_two_modes(self):
        with pytest.raises(InvalidArgumentError, match="two-mode"):
            partial_transpose(DensityMatrix(np.eye(2) / 2, (2,)))

    def test_squeezed_vacuum(self):
        assert pt_min_eigenvalue(tmsv(0.5, 20)) < -0.1

    def test_product(self, rng):
        assert pt_min_eigenvalue(random_product(rng, 5)) > -1e-10

    @pytest.mark.parametrize("cutoff_a, cutoff_b", [(2, 2), (4, 5), (6, 3)])
    def test_schmidt_route_matches_dense(self, rng, cutoff_a, cutoff_b):
        state = random_state(rng, cutoff_a, cutoff_b)
        dense = partial_transpose(DensityMatrix.from_state(state)).min_eigenvalue()

        assert pt_min_eigenvalue(state) == pytest.approx(dense, abs=1e-12)

    def test_single_level_mode(self, rng):
        state = random_state(rng, 1, 4)

        assert pt_min_eigenvalue(state) == 0.0
        assert pt_min_eigenvalue(TwoModeState.fock(0, 0, 1, 1)) == 1.0

    def test_too_large(self):
        settings = DEFAULT_SETTINGS.replace(dense_limit=10)

        assert pt_min_eigenvalue(tmsv(0.5, 20), settings) is None

    def test_support_crop(self):
        settings = DEFAULT_SETTINGS.replace(dense_limit=100)
        state = TwoModeState.fock(1, 2, 30, 30)

        assert pt_min_eigenvalue(state, settings) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("xi", [0.3, 0.7])
    def test_moment_identity(self, rng, xi):
        check = pt_moment_identity_check(random_state(rng, 6), xi)

        assert check.defect < 1e-9
        assert check.rhs >= xi**2 - 1e-12


class TestCriteriaReport:
    def test_squeezed_vacuum(self):
        report = criteria_report(tmsv(0.5, 30), 0.5)

        assert report.verdicts == {
            "duan": Verdict.VIOLATED,
            "variance": Verdict.VIOLATED,
            "partial_transpose": Verdict.VIOLATED,
        }

    def test_number_state(self):
        state = ens_state(EnsLabel(3, 1, 0.7))
        report = criteria_report(state, 0.7)

        assert report.verdicts == {
            "duan": Verdict.SATISFIED,
            "variance": Verdict.VIOLATED,
            "partial_transpose": Verdict.VIOLATED,
        }
        assert report.duan.value == pytest.approx(7 * (1 / 0.7 - 0.7), abs=1e-7)
        assert report.variance.value == pytest.approx(0.0, abs=1e-7)
        assert report.pt_min_eigenvalue < -0.1

    def test_to_dict(self, vacuum):
        payload = criteria_report(vacuum, 0.5).to_dict()

        assert payload["provenance"]["version"] == __version__
        assert payload["provenance"]["cutoffs"] == [4, 4]
        assert payload["verdicts"]["duan"]["verdict"] == "satisfied (boundary)"
        assert payload["variance_bound"] == 4.0
        json.dumps(payload)

    def test_inconclusive(self):
        settings = DEFAULT_SETTINGS.replace(dense_limit=10)
        report = criteria_report(tmsv(0.5, 20), 0.5, settings=settings)

        assert report.pt_min_eigenvalue is None
        assert report.pt_verdict is Verdict.INCONCLUSIVE
        assert report.duan.verdict is Verdict.VIOLATED

    def test_unnormalized_input(self, vacuum):
        report = criteria_report(vacuum * 3, 0.5)

        assert report.duan.value == pytest.approx(2.5)

    def test_expectation_of_number(self, ens_31):
        count = collective_number("A", 0.5, *ens_31.cutoffs)

        assert expectation(count, ens_31).real == pytest.approx(3.0, abs=1e-8)
