"""
Coherent states of the collective oscillators

``|alpha, beta; xi>`` is the joint eigenstate of ``A`` and ``B`` with
eigenvalues ``alpha`` and ``beta``. It is built three ways: as a double
series over the entangled number states, with the collective displacements
``D_A(alpha) D_B(beta)`` applied to the squeezed vacuum, and with local
displacements of the squeezed vacuum.
"""

from __future__ import annotations

import cmath
import dataclasses
import logging
import math

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .config import DEFAULT_SETTINGS, Settings
from .errors import InvalidArgumentError, TruncationError
from .fock import (
    ExponentialOperator,
    LadderPolynomial,
    TwoModeState,
    annihilation,
    creation,
)
from .states import collective_annihilator, tmsv
from .typing import Callable, ComplexArray, Mode, Optional, RealArray, Tuple
from .util import Cutoffs, check_xi

logger = logging.getLogger(__name__)

#: block on which displacements must be unitary
UNITARITY_BLOCK = (4, 4)
UNITARITY_TOLERANCE = 1e-8
#: times the series working window doubles its extra levels before giving up
SERIES_GROWTH_ATTEMPTS = 5


@dataclasses.dataclass(frozen=True)
class CoherentLabel:
    """
    :param alpha: eigenvalue of ``A``
    :param beta: eigenvalue of ``B``
    :param xi: squeezing parameter, strictly inside ``(0, 1)``
    """

    alpha: complex
    beta: complex
    xi: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            value = complex(getattr(self, name))

            if not cmath.isfinite(value):
                raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "xi", check_xi(self.xi))

    def check(self, settings: Settings = DEFAULT_SETTINGS) -> CoherentLabel:
        """
        :raise InvalidArgumentError: when an amplitude exceeds the cap
        """

        for name in ("alpha", "beta"):
            _check_amplitude(getattr(self, name), settings, name)

        return self

    def __str__(self) -> str:
        return f"|{self.alpha:g},{self.beta:g};{self.xi:g}>"


def _check_amplitude(
    amplitude: complex, settings: Settings, name: str = "amplitude"
) -> complex:
    amplitude = complex(amplitude)

    if not cmath.isfinite(amplitude) or abs(amplitude) > settings.amplitude_cap:
        raise InvalidArgumentError(
            f"|{name}| must not exceed {settings.amplitude_cap}, got {amplitude!r}"
        )

    return amplitude


def local_displacement_decomposition(label: CoherentLabel) -> Tuple[complex, complex]:
    """
    ``((alpha + xi beta^*)/sqrt(1 - xi^2), (beta + xi alpha^*)/sqrt(1 - xi^2))``:
    the local displacements taking the squeezed vacuum to ``|alpha, beta; xi>``
    """

    scale = math.sqrt(1 - label.xi**2)

    return (
        (label.alpha + label.xi * label.beta.conjugate()) / scale,
        (label.beta + label.xi * label.alpha.conjugate()) / scale,
    )


def displaced_thermal_distribution(
    thermal: float, amplitude: complex, size: int
) -> RealArray:
    """
    Photon number probabilities ``p_n``, ``n < size``, of a thermal state
    with mean ``t = thermal`` displaced by ``l = amplitude``:
    ``r^n/(1 + t) e^{-|l|^2/(1 + t)} L_n(-|l|^2/(t (1 + t)))`` with
    ``r = t/(1 + t)``.

    ``u_n = r^n L_n`` follows the forward Laguerre recurrence, which is
    stable for a negative argument and stays finite as ``t -> 0``.
    """

    shift = abs(amplitude) ** 2
    ratio = thermal / (1 + thermal)
    drive = shift / (1 + thermal) ** 2
    scaled = np.zeros(size)
    scaled[0] = 1.0

    if size > 1:
        scaled[1] = ratio + drive
    for n in range(1, size - 1):
        scaled[n + 1] = (
            ((2 * n + 1) * ratio + drive) * scaled[n] - n * ratio**2 * scaled[n - 1]
        ) / (n + 1)

    return scaled * math.exp(-shift / (1 + thermal)) / (1 + thermal)


def suggested_cutoffs(
    label: CoherentLabel, settings: Settings = DEFAULT_SETTINGS
) -> Cutoffs:
    """
    Each mode is a displaced thermal state with ``t = xi^2/(1 - xi^2)``
    thermal photons. The cutoff is the smallest ``D`` for which
    ``sum_{n >= D - 1} (n + 1) p_n``, the weight one raising step can push
    past the edge, stays below a tenth of the truncation tolerance.
    """

    thermal = label.xi**2 / (1 - label.xi**2)
    budget = settings.truncation_tolerance / 10

    def cutoff(local: complex) -> int:
        shift = abs(local) ** 2
        sigma = math.sqrt(thermal * (thermal + 1) + shift * (2 * thermal + 1))
        size = 60 + 3 * math.ceil(
            thermal + shift + settings.sigma_margin * sigma + settings.cutoff_padding
        )
        weights = displaced_thermal_distribution(thermal, local, size)
        leak = np.cumsum(((np.arange(size) + 1) * weights)[::-1])[::-1]
        above = np.flatnonzero(leak > budget)

        return max(int(above[-1]) + 2 if above.size else 1, 2)

    local_alpha, local_beta = local_displacement_decomposition(label)

    return Cutoffs(cutoff(local_alpha), cutoff(local_beta))


def _displacement(
    lowering: LadderPolynomial,
    raising: LadderPolynomial,
    amplitude: complex,
    context: str,
) -> ExponentialOperator:
    generator = amplitude * raising - amplitude.conjugate() * lowering
    displacement = ExponentialOperator(generator)
    defect = displacement.unitarity_defect(*UNITARITY_BLOCK)

    if defect > UNITARITY_TOLERANCE:
        raise TruncationError(defect, UNITARITY_TOLERANCE, f"{context} unitarity")

    return displacement


def collective_displacement(
    which: Mode,
    amplitude: complex,
    xi: float,
    cutoff_a: int,
    cutoff_b: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> ExponentialOperator:
    """
    ``D_A(alpha) = exp(alpha A^dagger - alpha^* A)`` (or the ``B`` analogue)

    :raise InvalidArgumentError: when the amplitude exceeds the cap
    :raise TruncationError: when unitarity fails on the low block
    """

    amplitude = _check_amplitude(amplitude, settings)
    lowering = collective_annihilator(which, xi, cutoff_a, cutoff_b, settings)

    return _displacement(
        lowering, lowering.dag(), amplitude, f"D_{which}({amplitude:g})"
    )


def local_displacement(
    mode: Mode,
    amplitude: complex,
    cutoff_a: int,
    cutoff_b: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> ExponentialOperator:
    """``exp(l a^dagger - l^* a)`` acting on one mode only"""
    amplitude = complex(amplitude)

    return _displacement(
        annihilation(mode, cutoff_a, cutoff_b, settings),
        creation(mode, cutoff_a, cutoff_b, settings),
        amplitude,
        f"D_{mode.lower()}({amplitude:g})",
    )


def poisson_cutoff(amplitude: complex, tolerance: float) -> int:
    """
    the smallest ``n_max`` leaving at most ``tolerance`` of the Poisson
    weight ``e^{-|z|^2} |z|^{2n} / n!`` beyond it
    """

    mean = abs(amplitude) ** 2

    if mean == 0:
        return 0
    size = math.ceil(mean + 10 * math.sqrt(mean)) + 40

    while True:
        below = np.flatnonzero(poisson.sf(np.arange(size), mean) <= tolerance)

        if below.size:
            return int(below[0])
        size *= 2


def _series(
    raising: LadderPolynomial, amplitude: complex, source: TwoModeState, n_max: int
) -> Tuple[TwoModeState, float]:
    """``sum_n (z R)^n / n! |source>`` and the absolute squared norm leaked"""
    term, total, leaked = source, source, 0.0

    for n in range(1, n_max + 1):
        image, loss = raising.apply(term)
        factor = amplitude / n
        term = image * factor
        leaked += abs(factor) ** 2 * loss
        total = total + term

    return total, leaked


def coherent_state_series(
    label: CoherentLabel,
    cutoffs: Optional[Cutoffs] = None,
    n_max: Optional[int] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoModeState:
    """
    ``e^{-|alpha|^2/2 - |beta|^2/2} sum_{n,m} alpha^n beta^m / sqrt(n! m!) |n, m; xi>``
    evaluated by ladder recursion on the squeezed vacuum.

    The recursion runs on a window at least ``n_max + 1`` levels past
    ``cutoffs``; the extra levels double (up to
    :data:`SERIES_GROWTH_ATTEMPTS` times) until the weight cropped back to
    ``cutoffs`` fits the tolerance.

    :param n_max: last index of both sums; defaults to the Poisson quantile
     of the larger amplitude leaving ``tolerance**2`` behind, so the dropped
     amplitude stays below the tolerance
    :raise TruncationError: when the Poisson tail beyond ``n_max`` or the
     ladder loss exceeds the tolerance
    """

    label.check(settings)
    cutoffs = cutoffs or suggested_cutoffs(label, settings)
    tolerance = settings.truncation_tolerance
    largest = max(abs(label.alpha), abs(label.beta))

    if n_max is None:
        n_max = poisson_cutoff(largest, tolerance**2)
    tail = float(poisson.sf(n_max, largest**2)) if largest else 0.0

    if tail > tolerance:
        raise TruncationError(tail, tolerance, f"series for {label} stops at n={n_max}")
    extra = n_max + 1

    for _ in range(SERIES_GROWTH_ATTEMPTS):
        state = _series_state(label, cutoffs.grown(extra, extra), n_max, settings)
        state = TwoModeState(
            state.coeffs, tolerance, state.truncation_loss + tail
        ).with_cutoffs(*cutoffs)
        logger.debug(
            "series for %s on %s with %d extra levels: n_max=%d loss %.2e",
            label,
            cutoffs,
            extra,
            n_max,
            state.truncation_loss,
        )

        if state.truncation_loss <= tolerance:
            return state.normalize()
        extra *= 2

    raise TruncationError(
        state.truncation_loss, tolerance, f"series for {label} at cutoffs {cutoffs}"
    )


def _series_state(
    label: CoherentLabel, working: Cutoffs, n_max: int, settings: Settings
) -> TwoModeState:
    """
    the unnormalized double series on the ``working`` window. The raising
    operators lower the other mode, so the squeezed vacuum tail missing
    beyond ``working`` is pulled back down and amplified at every order;
    only a window well past the output cutoffs keeps it out of them.
    """

    vacuum = tmsv(label.xi, *working, settings=settings)
    lower_a = collective_annihilator("A", label.xi, *working, settings=settings)
    lower_b = collective_annihilator("B", label.xi, *working, settings=settings)
    inner, leaked_b = _series(lower_b.dag(), label.beta, vacuum, n_max)
    state, leaked_a = _series(lower_a.dag(), label.alpha, inner, n_max)
    weight = math.exp(-(abs(label.alpha) ** 2 + abs(label.beta) ** 2))
    loss = vacuum.truncation_loss + (leaked_a + leaked_b) * weight

    return TwoModeState(state.coeffs, settings.truncation_tolerance, loss)


def _apply_all(
    operators: Callable[[Cutoffs], Tuple[ExponentialOperator, ...]],
    xi: float,
    cutoffs: Cutoffs,
    context: str,
    settings: Settings,
) -> TwoModeState:
    """
    apply ``operators`` to the squeezed vacuum on cutoffs grown by
    ``settings.cutoff_padding`` and crop the result back to ``cutoffs``;
    the intermediate states may reach further than the final one
    """

    padded = cutoffs.grown(settings.cutoff_padding, settings.cutoff_padding)
    state = tmsv(xi, *padded, settings=settings)
    total_loss = state.truncation_loss

    for operator in operators(padded):
        state, loss = operator.apply(state)
        total_loss += loss
    state = TwoModeState(
        state.coeffs, settings.truncation_tolerance, total_loss
    ).with_cutoffs(*cutoffs)

    if state.truncation_loss > settings.truncation_tolerance:
        raise TruncationError(
            state.truncation_loss, settings.truncation_tolerance, context
        )

    return state.normalize()


def displaced_coherent_state(
    label: CoherentLabel,
    cutoffs: Optional[Cutoffs] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoModeState:
    """``D_A(alpha) D_B(beta) |0, 0; xi>``"""
    label.check(settings)

    def displacements(padded: Cutoffs) -> Tuple[ExponentialOperator, ...]:
        return (
            collective_displacement("B", label.beta, label.xi, *padded, settings),
            collective_displacement("A", label.alpha, label.xi, *padded, settings),
        )

    return _apply_all(
        displacements,
        label.xi,
        cutoffs or suggested_cutoffs(label, settings),
        f"collective displacement of {label}",
        settings,
    )


def local_displacement_state(
    label: CoherentLabel,
    cutoffs: Optional[Cutoffs] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoModeState:
    """the squeezed vacuum displaced by :func:`local_displacement_decomposition`"""
    label.check(settings)
    local_alpha, local_beta = local_displacement_decomposition(label)

    def displacements(padded: Cutoffs) -> Tuple[ExponentialOperator, ...]:
        return (
            local_displacement("A", local_alpha, *padded, settings),
            local_displacement("B", local_beta, *padded, settings),
        )

    return _apply_all(
        displacements,
        label.xi,
        cutoffs or suggested_cutoffs(label, settings),
        f"local displacement of {label}",
        settings,
    )


def coherent_amplitudes(amplitude: complex, cutoff: int) -> ComplexArray:
    """``e^{-|z|^2/2} z^n / sqrt(n!)`` for ``n < cutoff``"""
    n = np.arange(cutoff)
    amplitude = complex(amplitude)

    if amplitude == 0:
        return (n == 0).astype(np.complex128)
    magnitude = np.exp(
        -abs(amplitude) ** 2 / 2 + n * math.log(abs(amplitude)) - 0.5 * gammaln(n + 1)
    )

    return magnitude * np.exp(1j * cmath.phase(amplitude) * n)


def coherent_product(
    alpha: complex,
    beta: complex,
    cutoff_a: int,
    cutoff_b: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoModeState:
    """
    the bare product ``|alpha>_A |beta>_B``

    :raise TruncationError: when the Poisson tails do not fit the cutoffs
    """

    tail = sum(
        float(poisson.sf(cutoff - 1, abs(amplitude) ** 2))
        for amplitude, cutoff in ((alpha, cutoff_a), (beta, cutoff_b))
    )

    if tail > settings.truncation_tolerance:
        raise TruncationError(
            tail,
            settings.truncation_tolerance,
            f"coherent product at {cutoff_a}x{cutoff_b}",
        )

    state = TwoModeState.product(
        coherent_amplitudes(alpha, cutoff_a), coherent_amplitudes(beta, cutoff_b)
    )

    return TwoModeState(state.coeffs, settings.truncation_tolerance, tail).normalize()
