import numpy as np

from twomode.fock import TwoModeState
from twomode.states import EnsLabel


def random_state(rng, cutoff_a, cutoff_b=None):
    """a normalized random pure state with complex Gaussian amplitudes"""
    cutoff_b = cutoff_a if cutoff_b is None else cutoff_b
    coeffs = rng.normal(size=(cutoff_a, cutoff_b)) + 1j * rng.normal(
        size=(cutoff_a, cutoff_b)
    )

    return TwoModeState(coeffs).normalize()


def random_product(rng, cutoff):
    def local():
        vector = rng.normal(size=cutoff) + 1j * rng.normal(size=cutoff)

        return vector / np.linalg.norm(vector)

    return TwoModeState.product(local(), local())


def ens_grid(n_max, xis=(0.5, 0.7)):
    """labels with ``0 <= N_B <= N_A <= n_max``"""
    return [
        EnsLabel(n_a, n_b, xi)
        for xi in xis
        for n_a in range(n_max + 1)
        for n_b in range(n_a + 1)
    ]


def label_id(label):
    return f"{label.n_a}-{label.n_b}-{label.xi:g}"
