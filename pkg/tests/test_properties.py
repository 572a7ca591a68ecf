import math

import hypothesis
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twomode.criteria import Verdict, judge
from twomode.entanglement import entanglement_entropy, reduced_density
from twomode.fock import identity_operator, quadrature, variance
from twomode.states import EnsLabel, closed_form_schmidt, negative_binomial_pmf
from tests.utils import random_state

quick = hypothesis.settings(deadline=None, max_examples=25)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
cutoffs = st.integers(min_value=1, max_value=6)
squeezing = st.floats(min_value=0.2, max_value=0.8)
levels = st.integers(min_value=0, max_value=3)


@quick
@given(seed=seeds, cutoff_a=cutoffs, cutoff_b=cutoffs)
def test_reduced_density(seed, cutoff_a, cutoff_b):
    state = random_state(np.random.default_rng(seed), cutoff_a, cutoff_b)
    rho = reduced_density(state, "A")

    assert rho.trace == pytest.approx(1.0)
    assert rho.min_eigenvalue() > -1e-12


@quick
@given(seed=seeds, cutoff_a=cutoffs, cutoff_b=cutoffs)
def test_entropy_bounds(seed, cutoff_a, cutoff_b):
    state = random_state(np.random.default_rng(seed), cutoff_a, cutoff_b)
    entropy = entanglement_entropy(state)

    assert -1e-12 <= entropy <= math.log2(min(cutoff_a, cutoff_b)) + 1e-9


@quick
@given(n_a=levels, n_b=levels, xi=squeezing)
def test_schmidt_weights_normalized(n_a, n_b, xi):
    spectrum = closed_form_schmidt(EnsLabel(n_a, n_b, xi))

    assert math.fsum(spectrum.weights) == pytest.approx(1.0, abs=1e-10)


@quick
@given(n_a=st.integers(min_value=0, max_value=5), p=st.floats(0.05, 0.8))
def test_negative_binomial_normalized(n_a, p):
    total = math.fsum(negative_binomial_pmf(n_a, p, np.arange(600)))

    assert total == pytest.approx(1.0, abs=1e-10)


@quick
@given(
    bound=st.floats(min_value=0.1, max_value=10),
    low=st.floats(min_value=-5, max_value=5),
    high=st.floats(min_value=-5, max_value=5),
)
def test_judge_is_monotone(bound, low, high):
    low, high = sorted((bound + low, bound + high))
    rank = {Verdict.VIOLATED: 0, Verdict.BOUNDARY: 1, Verdict.SATISFIED: 2}

    assert rank[judge(low, bound)] <= rank[judge(high, bound)]


@quick
@given(n_a=levels, n_b=levels, xi=squeezing)
def test_swap_symmetry(n_a, n_b, xi):
    label = EnsLabel(n_a, n_b, xi)
    direct = closed_form_schmidt(label)
    swapped = closed_form_schmidt(label.swapped())

    assert np.allclose(direct.coeffs, swapped.coeffs, atol=1e-12)
    assert direct.offset == -swapped.offset


@quick
@given(seed=seeds, shift=st.floats(min_value=-10, max_value=10))
def test_variance_shift_invariance(seed, shift):
    state = random_state(np.random.default_rng(seed), 4, 5)
    quad = quadrature("A", "x", 4, 5) + quadrature("B", "p", 4, 5)
    shifted = quad + shift * identity_operator(4, 5)

    assert variance(shifted, state) == pytest.approx(variance(quad, state), abs=1e-9)
