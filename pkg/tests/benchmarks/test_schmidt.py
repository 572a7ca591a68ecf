import functools

import numpy as np
import pytest

from twomode.entanglement import entropy_from_closed_form, entropy_grid
from twomode.states import EnsLabel, closed_form_schmidt, ens_state


def svd_spectrum(label):
    return np.linalg.svd(ens_state(label).coeffs, compute_uv=False)


@pytest.mark.parametrize("n_a, n_b", [(2, 0), (6, 3), (10, 10)])
@pytest.mark.benchmark(group="schmidt-closed-form")
def test_closed_form(benchmark, n_a, n_b):
    benchmark(functools.partial(closed_form_schmidt, EnsLabel(n_a, n_b, 0.7)))


@pytest.mark.parametrize("n_a, n_b", [(2, 0), (6, 3)])
@pytest.mark.benchmark(group="schmidt-svd")
def test_svd(benchmark, n_a, n_b):
    benchmark(functools.partial(svd_spectrum, EnsLabel(n_a, n_b, 0.7)))


@pytest.mark.benchmark(group="entropy")
def test_entropy_closed_form(benchmark):
    benchmark(functools.partial(entropy_from_closed_form, EnsLabel(10, 4, 0.7)))


@pytest.mark.benchmark(group="entropy-grid")
def test_entropy_grid(benchmark):
    benchmark(functools.partial(entropy_grid, 0.7, 6))
