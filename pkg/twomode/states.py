"""
The two-mode squeezed vacuum and the entangled number states

``|N_A, N_B; xi> = (A^dagger)^N_A (B^dagger)^N_B |0, 0; xi> / sqrt(N_A! N_B!)``
with the collective annihilators ``A = (a - xi b^dagger)/sqrt(1 - xi^2)``
and ``B = (b - xi a^dagger)/sqrt(1 - xi^2)``; ``|0, 0; xi>`` is the two-mode
squeezed vacuum.
"""

from __future__ import annotations

import dataclasses
import logging
import math

import numpy as np
from deprecated.sphinx import versionadded
from scipy.special import gammaln
from scipy.stats import nbinom

from .config import DEFAULT_SETTINGS, Settings
from .errors import InvalidArgumentError, PrecisionError, TruncationError
from .fock import (
    ExponentialOperator,
    LadderPolynomial,
    TwoModeState,
    annihilation,
    creation,
)
from .typing import (
    Dict,
    Iterator,
    List,
    Mode,
    NamedTuple,
    Optional,
    RealArray,
    Tuple,
    Union,
)
from .util import Cutoffs, check_cutoff, check_xi

logger = logging.getLogger(__name__)

#: unitarity must hold to this level on the squeezer's check block
UNITARITY_TOLERANCE = 1e-8


@dataclasses.dataclass(frozen=True)
class EnsLabel:
    """
    Label of an entangled number state.

    :param n_a: eigenvalue of ``A^dagger A``
    :param n_b: eigenvalue of ``B^dagger B``
    :param xi: squeezing parameter, strictly inside ``(0, 1)``
    """

    n_a: int
    n_b: int
    xi: float

    def __post_init__(self) -> None:
        for name in ("n_a", "n_b"):
            value = getattr(self, name)

            if int(value) != value or value < 0:
                raise InvalidArgumentError(
                    f"{name} must be a non-negative integer, got {value!r}"
                )
            object.__setattr__(self, name, int(value))
        object.__setattr__(self, "xi", check_xi(self.xi))

    @property
    def r(self) -> float:
        """the squeezing strength ``r = artanh(xi)``"""
        return squeezing_parameter(self.xi)

    @property
    def offset(self) -> int:
        """``N_A - N_B``: the Schmidt pairing shift"""
        return self.n_a - self.n_b

    def swapped(self) -> EnsLabel:
        return EnsLabel(self.n_b, self.n_a, self.xi)

    def ordered(self) -> EnsLabel:
        """the label with ``N_A >= N_B`` (swapping the modes if needed)"""
        return self if self.n_a >= self.n_b else self.swapped()

    def __str__(self) -> str:
        return f"|{self.n_a},{self.n_b};{self.xi:g}>"


class Moments(NamedTuple):
    """
    Mean and variance of a photon number distribution
    """

    mean: float
    variance: float


@dataclasses.dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """
    The signed Schmidt coefficients ``C_m`` of an entangled number state.

    For ``offset >= 0`` the weight ``C_m`` sits on ``|offset + m>_A |m>_B``;
    for a negative offset it sits on ``|m>_A |m - offset>_B``.
    """

    offset: int
    coeffs: RealArray
    xi: float
    n_a: int
    n_b: int
    #: estimated squared norm beyond the last computed coefficient
    tail_mass: float = 0.0

    @property
    def m_max(self) -> int:
        return int(self.coeffs.size - 1)

    @property
    def cutoffs(self) -> Cutoffs:
        """the smallest cutoffs holding every computed coefficient"""
        last_a, last_b = self.pairing(self.m_max)

        return Cutoffs(last_a + 1, last_b + 1)

    @property
    def weights(self) -> RealArray:
        """the photon number distribution ``|C_m|^2`` of the smaller mode"""
        return self.coeffs**2

    def norm(self) -> float:
        """``sum_m C_m^2`` computed with compensated summation"""
        return math.fsum(self.weights)

    def moments(self) -> Moments:
        """mean and variance of ``m`` under ``|C_m|^2``"""
        m = np.arange(self.coeffs.size, dtype=np.float64)
        weights = self.weights
        mean = math.fsum(m * weights)

        return Moments(mean, math.fsum((m - mean) ** 2 * weights))

    def pairing(self, m: int) -> Tuple[int, int]:
        """
        :return: ``(n_A, n_B)`` of the product state carrying ``C_m``
        """

        if self.offset >= 0:
            return self.offset + m, m

        return m, m - self.offset

    def sign_changes(self, threshold: float = 0.0) -> int:
        """
        number of sign changes (nodes) in ``C_m``, ignoring coefficients with
        ``|C_m| <= threshold``
        """

        signs = np.sign(self.coeffs[np.abs(self.coeffs) > threshold])

        return int(np.count_nonzero(signs[1:] != signs[:-1]))

    def nodes(self, relative: float = 1e-12) -> int:
        """sign changes among coefficients above ``relative * max|C_m|``"""
        return self.sign_changes(relative * float(np.max(np.abs(self.coeffs))))

    def to_state(self, cutoff_a: int, cutoff_b: int) -> TwoModeState:
        """
        place the coefficients on their product states inside the given
        cutoffs (coefficients falling outside are dropped)
        """

        coeffs = np.zeros((cutoff_a, cutoff_b), dtype=np.complex128)

        for m, value in enumerate(self.coeffs):
            n_a, n_b = self.pairing(m)

            if n_a < cutoff_a and n_b < cutoff_b:
                coeffs[n_a, n_b] = value

        return TwoModeState(coeffs)

    def header(self) -> Dict[str, Union[int, float]]:
        return {"N_A": self.n_a, "N_B": self.n_b, "xi": self.xi, "offset": self.offset}

    def rows(self) -> List[Tuple[int, float, float]]:
        """``(m, C_m, C_m^2)`` rows in the CSV column order"""
        return [(m, float(c), float(c) ** 2) for m, c in enumerate(self.coeffs)]


def squeezing_parameter(xi: float) -> float:
    """``r = artanh(xi)``, so that ``tanh(r) = xi``"""
    return math.atanh(check_xi(xi))


def photon_number_moments(label: EnsLabel) -> Moments:
    """
    Closed form mean and variance of ``n_b = b^dagger b``:
    ``(N_B + xi^2 (N_A + 1)) / (1 - xi^2)`` and
    ``xi^2 (N_A + N_B + 2 N_A N_B + 1) / (1 - xi^2)^2``.
    """

    xi2 = label.xi**2
    n_a, n_b = label.n_a, label.n_b

    return Moments(
        (n_b + xi2 * (n_a + 1)) / (1 - xi2),
        xi2 * (n_a + n_b + 2 * n_a * n_b + 1) / (1 - xi2) ** 2,
    )


def _schmidt_coefficients(n_a: int, n_b: int, xi: float, m_max: int) -> RealArray:
    """
    signed ``C_m`` for ``m = 0..m_max`` with ``n_a >= n_b``. Every term of
    the alternating sum is carried as a log magnitude and a sign; the terms
    are rescaled by the largest one and added with :func:`math.fsum`.
    """

    shift = n_a - n_b
    log_rest = math.log1p(-(xi**2))
    log_xi = math.log(xi)
    prefactor = 0.5 * (shift + 1) * log_rest + 0.5 * (
        gammaln(n_a + 1) + gammaln(n_b + 1)
    )
    coeffs = np.zeros(m_max + 1, dtype=np.float64)

    for m in range(m_max + 1):
        k = np.arange(min(m, n_b) + 1)
        logs = (
            prefactor
            + 0.5 * (gammaln(shift + m + 1) + gammaln(m + 1))
            + k * log_rest
            + (n_b + m - 2 * k) * log_xi
            - gammaln(k + 1)
            - gammaln(m - k + 1)
            - gammaln(shift + k + 1)
            - gammaln(n_b - k + 1)
        )
        signs = np.where((n_b - k) % 2 == 1, -1.0, 1.0)
        largest = float(logs.max())
        coeffs[m] = math.exp(largest) * math.fsum(signs * np.exp(logs - largest))

    return coeffs


def _tail_estimate(weights: RealArray) -> float:
    """
    geometric estimate of the mass beyond the last weight, from the slowest
    decay among the last few ratios
    """

    if weights[-1] == 0:
        return 0.0
    if weights.size < 2:
        return math.inf
    recent = weights[-4:]
    ratios = recent[1:] / np.where(recent[:-1] > 0, recent[:-1], np.inf)
    ratio = float(ratios.max())

    if ratio >= 1:
        return math.inf

    return float(weights[-1]) * ratio / (1 - ratio)


def suggested_cutoffs(
    label: EnsLabel, settings: Settings = DEFAULT_SETTINGS
) -> Cutoffs:
    """
    Cutoffs for ``ens_state(label)``.

    The smaller mode keeps ``mean + sigma_margin * sqrt(variance) + N + padding``
    levels (moments from :func:`photon_number_moments` of the ordered label),
    the larger one ``|N_A - N_B|`` more. The cutoff then grows until the
    closed form tail past the edge, weighted by the ladder leakage factor,
    fits a tenth of the truncation tolerance.
    """

    ordered = label.ordered()
    mean, var = photon_number_moments(ordered)
    spread = settings.sigma_margin * math.sqrt(var)
    smaller = math.ceil(mean + spread + ordered.n_b + settings.cutoff_padding)
    shift = ordered.n_a - ordered.n_b
    weights = (
        _schmidt_coefficients(ordered.n_a, ordered.n_b, ordered.xi, 3 * smaller + 60)
        ** 2
    )
    budget = settings.truncation_tolerance / 10
    levels = np.arange(weights.size) + shift + 1

    while smaller < weights.size:
        leak = math.fsum(levels[smaller - 1 :] * weights[smaller - 1 :])

        if leak <= budget:
            break
        smaller = math.ceil(smaller * 1.1) + 1
        logger.debug("growing cutoff for %s to %d (leak %.2e)", label, smaller, leak)

    if label.n_a >= label.n_b:
        return Cutoffs(smaller + shift, smaller)

    return Cutoffs(smaller, smaller + shift)


def tmsv(
    xi: float,
    cutoff: int,
    cutoff_b: Optional[int] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoModeState:
    """
    The two-mode squeezed vacuum ``sqrt(1 - xi^2) sum_n xi^n |n>|n>``,
    renormalized over the truncated window.

    :param cutoff: cutoff of mode ``A`` (and of ``B`` unless ``cutoff_b``)
    :raise InvalidArgumentError: unless ``0 < xi < 1``
    :raise TruncationError: when ``xi^(2 cutoff)`` exceeds the tolerance
    """

    xi = check_xi(xi)
    cutoff_a = check_cutoff(cutoff, "cutoff")
    cutoff_b = check_cutoff(cutoff if cutoff_b is None else cutoff_b, "cutoff_b")
    diagonal = min(cutoff_a, cutoff_b)
    tail = xi ** (2 * diagonal)

    if tail > settings.truncation_tolerance:
        raise TruncationError(
            tail, settings.truncation_tolerance, f"tmsv(xi={xi}) at cutoff {diagonal}"
        )
    coeffs = np.zeros((cutoff_a, cutoff_b), dtype=np.complex128)
    n = np.arange(diagonal)
    coeffs[n, n] = math.sqrt(1 - xi**2) * xi**n

    return TwoModeState(coeffs, settings.truncation_tolerance, tail).normalize()


def collective_annihilator(
    which: Mode,
    xi: float,
    cutoff_a: int,
    cutoff_b: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> LadderPolynomial:
    """
    ``A = (a - xi b^dagger)/sqrt(1 - xi^2)`` (``which="A"``) or
    ``B = (b - xi a^dagger)/sqrt(1 - xi^2)`` (``which="B"``)

    :raise InvalidArgumentError: unless ``0 < xi < 1``
    """

    xi = check_xi(xi)

    if which not in ("A", "B"):
        raise InvalidArgumentError(f"which must be 'A' or 'B', got {which!r}")
    other: Mode = "B" if which == "A" else "A"
    lower = annihilation(which, cutoff_a, cutoff_b, settings)
    partner = creation(other, cutoff_a, cutoff_b, settings)

    return (lower - xi * partner) / math.sqrt(1 - xi**2)


def collective_number(
    which: Mode,
    xi: float,
    cutoff_a: int,
    cutoff_b: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> LadderPolynomial:
    """``A^dagger A`` or ``B^dagger B``"""
    lower = collective_annihilator(which, xi, cutoff_a, cutoff_b, settings)

    return (lower.dag() @ lower).as_hermitian()


def _raise(
    operator: LadderPolynomial, state: TwoModeState, level: int
) -> Tuple[TwoModeState, float]:
    image, loss = operator.apply(state)
    total = image.norm() ** 2 + loss

    return image * (1 / math.sqrt(level)), (loss / total if total else 0.0)


def ens_family(
    xi: float,
    n_a_max: int,
    n_b_max: int,
    cutoffs: Optional[Cutoffs] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> Iterator[Tuple[EnsLabel, TwoModeState]]:
    """
    Generate ``|N_A, N_B; xi>`` for ``N_A <= n_a_max``, ``N_B <= n_b_max``
    (row-major in ``N_A``) on common cutoffs by ladder recursion.

    :param cutoffs: defaults to the componentwise largest suggestion over
     the corner labels of the family
    :raise TruncationError: when a chain's relative loss exceeds tolerance
    """

    xi = check_xi(xi)

    if cutoffs is None:
        corners = [
            suggested_cutoffs(EnsLabel(n_a, n_b, xi), settings)
            for n_a, n_b in ((n_a_max, n_b_max), (n_a_max, 0), (0, n_b_max))
        ]
        cutoffs = Cutoffs(*(max(values) for values in zip(*corners)))
    pad = n_a_max + n_b_max + 1
    cutoff_a, cutoff_b = cutoffs.grown(pad, pad)
    raise_a = collective_annihilator("A", xi, cutoff_a, cutoff_b, settings).dag()
    raise_b = collective_annihilator("B", xi, cutoff_a, cutoff_b, settings).dag()
    base = tmsv(xi, cutoff_a, cutoff_b, settings)
    base_loss = base.truncation_loss

    for n_a in range(n_a_max + 1):
        if n_a:
            base, loss = _raise(raise_a, base, n_a)
            base_loss += loss
        current, chain_loss = base, base_loss

        for n_b in range(n_b_max + 1):
            if n_b:
                current, loss = _raise(raise_b, current, n_b)
                chain_loss += loss
            label = EnsLabel(n_a, n_b, xi)
            state = TwoModeState(
                current.coeffs, settings.truncation_tolerance, chain_loss
            ).with_cutoffs(*cutoffs)

            if state.truncation_loss > settings.truncation_tolerance:
                raise TruncationError(
                    state.truncation_loss,
                    settings.truncation_tolerance,
                    f"{label} at cutoffs {cutoffs}",
                )

            yield label, state.normalize()


def ens_state(
    label: EnsLabel,
    cutoffs: Optional[Cutoffs] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoModeState:
    """
    Build ``|N_A, N_B; xi>`` by applying the collective creation operators
    to the two-mode squeezed vacuum.

    The recursion runs ``N_A + N_B + 1`` levels past ``cutoffs`` in each
    mode before cropping, so the lowering parts of the collective operators
    never see the dropped amplitudes inside the returned window.

    :param cutoffs: defaults to :func:`suggested_cutoffs`
    :raise TruncationError: when the cumulative loss exceeds tolerance
    """

    cutoffs = cutoffs or suggested_cutoffs(label, settings)
    pad = label.n_a + label.n_b + 1
    cutoff_a, cutoff_b = cutoffs.grown(pad, pad)
    state = tmsv(label.xi, cutoff_a, cutoff_b, settings)
    total_loss = state.truncation_loss

    for which, count in (("B", label.n_b), ("A", label.n_a)):
        if not count:
            continue
        raising = collective_annihilator(
            which, label.xi, cutoff_a, cutoff_b, settings  # type: ignore[arg-type]
        ).dag()

        for level in range(1, count + 1):
            state, loss = _raise(raising, state, level)
            total_loss += loss
    state = TwoModeState(
        state.coeffs, settings.truncation_tolerance, total_loss
    ).with_cutoffs(*cutoffs)
    logger.debug(
        "built %s on %s, truncation loss %.2e", label, cutoffs, state.truncation_loss
    )

    if state.truncation_loss > settings.truncation_tolerance:
        raise TruncationError(
            state.truncation_loss,
            settings.truncation_tolerance,
            f"{label} at cutoffs {cutoffs}",
        )

    return state.normalize()


def closed_form_schmidt(
    label: EnsLabel,
    m_max: Optional[int] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> SchmidtSpectrum:
    """
    The Schmidt coefficients from the finite alternating sum over ``k``.

    Labels with ``N_A < N_B`` are evaluated on the swapped label and
    reported with a negative offset.

    :param m_max: last coefficient computed; defaults to the smaller mode's
     :func:`suggested_cutoffs` minus one
    :raise TruncationError: when the estimated mass beyond ``m_max`` exceeds
     the truncation tolerance
    :raise PrecisionError: when cancellation spoils ``sum C_m^2 = 1``
    """

    ordered = label.ordered()

    if m_max is None:
        m_max = min(suggested_cutoffs(ordered, settings)) - 1
    if m_max < 0:
        raise InvalidArgumentError(f"m_max must be non-negative, got {m_max}")
    coeffs = _schmidt_coefficients(ordered.n_a, ordered.n_b, ordered.xi, m_max)
    weights = coeffs**2
    tail = _tail_estimate(weights)

    if tail > settings.truncation_tolerance:
        raise TruncationError(
            tail, settings.truncation_tolerance, f"{label} with m_max={m_max}"
        )
    defect = abs(1 - math.fsum(weights))

    if defect > settings.normalization_tolerance + tail:
        raise PrecisionError(
            defect,
            settings.normalization_tolerance,
            f"alternating sum for {label} lost precision",
        )

    return SchmidtSpectrum(
        offset=label.offset,
        coeffs=coeffs,
        xi=label.xi,
        n_a=label.n_a,
        n_b=label.n_b,
        tail_mass=tail,
    )


def _check_probability(p: float) -> float:
    if not (isinstance(p, (int, float)) and 0 < p < 1):
        raise InvalidArgumentError(f"p must lie strictly inside (0, 1), got {p!r}")

    return float(p)


def negative_binomial_pmf(
    n_a: int, p: float, m: Union[int, np.ndarray]
) -> Union[float, RealArray]:
    """
    ``(1 - p)^(1 + N_A) p^m (N_A + m)! / (N_A! m!)``, the photon number
    distribution of the reduced state of ``|N_A, 0; xi>`` with ``p = xi^2``

    :raise InvalidArgumentError: unless ``0 < p < 1`` and ``n_a >= 0``
    """

    p = _check_probability(p)

    if n_a < 0:
        raise InvalidArgumentError(f"n_a must be non-negative, got {n_a}")
    values = nbinom.pmf(m, n_a + 1, 1 - p)

    return float(values) if np.ndim(values) == 0 else np.asarray(values)


@versionadded(version="1.0")
def negative_binomial_moments(n_a: int, p: float) -> Moments:
    """
    mean ``p (N_A + 1)/(1 - p)`` and variance ``p (N_A + 1)/(1 - p)^2``
    """

    p = _check_probability(p)
    mean, var = nbinom.stats(n_a + 1, 1 - p, moments="mv")

    return Moments(float(mean), float(var))


def two_mode_squeezer(
    r: float,
    cutoff_a: int,
    cutoff_b: int,
    check_block: Tuple[int, int] = (4, 4),
    settings: Settings = DEFAULT_SETTINGS,
) -> ExponentialOperator:
    """
    The parametric amplifier ``U = exp(r (a^dagger b^dagger - a b))``, so that
    ``U |0>|0> = |0, 0; tanh r>``.

    :param check_block: ``U^dagger U = 1`` is verified on the basis states
     with ``n_A < check_block[0]`` and ``n_B < check_block[1]``
    :raise InvalidArgumentError: for a negative or non-finite ``r``
    :raise TruncationError: when the unitarity defect on the check block
     exceeds ``1e-8``
    """

    if not (math.isfinite(r) and r >= 0):
        raise InvalidArgumentError(f"r must be a non-negative number, got {r!r}")
    pair_creation = creation("A", cutoff_a, cutoff_b, settings) @ creation(
        "B", cutoff_a, cutoff_b, settings
    )
    generator = r * (pair_creation - pair_creation.dag())
    squeezer = ExponentialOperator(generator)
    defect = squeezer.unitarity_defect(*check_block)

    if defect > UNITARITY_TOLERANCE:
        raise TruncationError(
            defect,
            UNITARITY_TOLERANCE,
            f"squeezer r={r} unitarity on cutoffs {cutoff_a}x{cutoff_b}",
        )

    return squeezer
