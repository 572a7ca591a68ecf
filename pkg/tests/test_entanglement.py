import math

import numpy as np
import pytest

from twomode.errors import InvalidArgumentError
from twomode.entanglement import (
    DensityMatrix,
    GridCell,
    completeness_defect,
    entanglement_entropy,
    entropy_from_closed_form,
    entropy_grid,
    entropy_of_weights,
    monotonicity_findings,
    partial_resolution,
    reduced_density,
    schmidt_spectrum_svd,
    witness_states,
)
from twomode.fock import TwoModeState
from twomode.states import EnsLabel, tmsv
from twomode.util import Cutoffs
from tests.utils import random_product, random_state


def thermal_entropy(xi):
    p = xi**2

    return -math.log2(1 - p) - p / (1 - p) * math.log2(p)


class TestReducedDensity:
    def test_trace_and_hermiticity(self, rng):
        state = random_state(rng, 4, 6)

        for keep, size in (("A", 4), ("B", 6)):
            rho = reduced_density(state, keep)

            assert rho.dims == (size,)
            assert rho.trace == pytest.approx(1.0)
            assert rho.hermiticity_defect() < 1e-14
            assert rho.min_eigenvalue() > -1e-12

    def test_same_spectrum(self, rng):
        state = random_state(rng, 4, 6)
        spectrum_a = np.sort(reduced_density(state, "A").eigenvalues())[::-1]
        spectrum_b = np.sort(reduced_density(state, "B").eigenvalues())[::-1]

        assert np.allclose(spectrum_a, spectrum_b[:4], atol=1e-12)
        assert np.allclose(spectrum_a, schmidt_spectrum_svd(state) ** 2, atol=1e-12)

    def test_unknown_mode(self, vacuum):
        with pytest.raises(InvalidArgumentError, match="keep must be"):
            reduced_density(vacuum, "C")

    def test_shape_mismatch(self):
        with pytest.raises(InvalidArgumentError, match="does not match dims"):
            DensityMatrix(np.eye(3), (2, 2))


class TestEntropy:
    def test_squeezed_vacuum(self):
        entropy = entanglement_entropy(tmsv(0.7, 48))

        assert entropy == pytest.approx(thermal_entropy(0.7), abs=1e-9)
        assert entropy == pytest.approx(1.96020, abs=1e-4)

    def test_squeezed_vacuum_increasing(self):
        xis = np.round(np.arange(0.1, 1.0, 0.1), 1)
        entropies = [entanglement_entropy(tmsv(xi, 150)) for xi in xis]

        assert np.all(np.diff(entropies) > 0)
        assert entropies == pytest.approx([thermal_entropy(xi) for xi in xis])

    def test_product(self, rng):
        assert entanglement_entropy(TwoModeState.fock(1, 2, 3, 3)) == 0.0
        assert entanglement_entropy(random_product(rng, 5)) < 1e-9

    def test_weights_below_floor(self):
        assert entropy_of_weights([1.0, 1e-30]) == 0.0
        assert entropy_of_weights([0.5, 0.5]) == pytest.approx(1.0)

    def test_closed_form(self, ens_31):
        assert entropy_from_closed_form(EnsLabel(3, 1, 0.5)) == pytest.approx(
            entanglement_entropy(ens_31), abs=1e-9
        )

    def test_swap_invariant(self):
        assert entropy_from_closed_form(EnsLabel(1, 4, 0.7)) == pytest.approx(
            entropy_from_closed_form(EnsLabel(4, 1, 0.7))
        )


class TestEntropyGrid:
    def test_layout(self):
        cells = entropy_grid(0.5, 2)

        assert [(cell.n_a, cell.n_b) for cell in cells] == [
            (n_a, n_b) for n_a in range(3) for n_b in range(3)
        ]
        assert all(cell.xi == 0.5 for cell in cells)
        assert all(isinstance(cell.cutoffs, Cutoffs) for cell in cells)

    def test_symmetric(self):
        table = {(c.n_a, c.n_b): c.entropy_bits for c in entropy_grid(0.7, 3)}

        for (n_a, n_b), value in table.items():
            assert value == pytest.approx(table[(n_b, n_a)], abs=1e-12)

    def test_workers_keep_order(self):
        serial = entropy_grid(0.5, 2)
        threaded = entropy_grid(0.5, 2, workers=3)

        assert [c.entropy_bits for c in threaded] == [c.entropy_bits for c in serial]

    def test_methods_agree(self):
        closed = entropy_grid(0.5, 1)
        brute = entropy_grid(0.5, 1, method="svd")

        for first, second in zip(closed, brute):
            assert first.entropy_bits == pytest.approx(second.entropy_bits, abs=1e-8)

    def test_limit(self):
        with pytest.raises(InvalidArgumentError, match=r"n_max must lie in \[0, 10\]"):
            entropy_grid(0.5, 11)

    def test_unknown_method(self):
        with pytest.raises(InvalidArgumentError, match="unknown entropy method"):
            entropy_grid(0.5, 1, method="exact")


class TestMonotonicity:
    def grid(self, xi, values):
        return [
            GridCell(n_a, n_b, xi, value)
            for (n_a, n_b), value in zip([(0, 0), (0, 1), (1, 0), (1, 1)], values)
        ]

    def test_findings(self):
        report = monotonicity_findings({0.5: self.grid(0.5, [0.0, 1.0, 1.0, 0.5])})

        assert report.checked == {"n_b": 2, "n_a": 2, "xi": 0}
        assert report.summary() == {"n_b": 0.5, "n_a": 0.5, "xi": 1.0}
        assert {finding.conjecture for finding in report.violations} == {"n_a", "n_b"}
        assert all(finding.delta == -0.5 for finding in report.violations)

    def test_xi(self):
        report = monotonicity_findings(
            {
                0.7: self.grid(0.7, [1.0, 2.0, 2.0, 3.0]),
                0.5: self.grid(0.5, [0.5, 1.0, 2.5, 2.75]),
            }
        )
        (finding,) = report.violations

        assert report.checked["xi"] == 4
        assert report.held("xi") == 3
        assert finding.smaller == EnsLabel(1, 0, 0.5)
        assert finding.larger == EnsLabel(1, 0, 0.7)

    def test_real_grid(self):
        grids = {xi: entropy_grid(xi, 2) for xi in (0.5, 0.7)}
        report = monotonicity_findings(grids)

        assert report.checked == {"n_b": 12, "n_a": 12, "xi": 9}
        assert 0.0 <= report.fraction("xi") <= 1.0


class TestCompleteness:
    def test_witnesses(self):
        assert witness_states(1) == [(0, 0), (0, 1), (1, 0)]
        assert len(witness_states(6)) == 28

    def test_ground_state(self):
        assert completeness_defect(0.5, 0, witness_bound=0) == pytest.approx(0.25)

    def test_decreasing(self):
        assert completeness_defect(0.5, 3, witness_bound=2) < completeness_defect(
            0.5, 1, witness_bound=2
        )

    def test_partial_resolution(self):
        resolution = partial_resolution(0.3, 4, witness_bound=2)

        assert len(resolution.witnesses) == 6
        assert np.allclose(resolution.matrix, resolution.matrix.conj().T)
        assert resolution.defect() < 0.1

    def test_cutoffs_too_small(self):
        with pytest.raises(InvalidArgumentError, match="do not hold the witness"):
            partial_resolution(0.5, 1, witness_bound=6, cutoffs=Cutoffs(5, 5))

    def test_negative_n_max(self):
        with pytest.raises(InvalidArgumentError, match="n_max must be non-negative"):
            completeness_defect(0.5, -1)
