"""
Separability tests built on the total noise operator ``Omega(xi)``

``Omega(xi) = Var(omega_+) + Var(omega_-)`` for the EPR-like operators
``omega_+ = x_A / sqrt(xi) - sqrt(xi) x_B`` and
``omega_- = p_A / sqrt(xi) + sqrt(xi) p_B``. Separable states satisfy
``<Omega(xi)> >= 1/xi + xi`` and ``Var(Omega(xi)) >= 4``.
"""

from __future__ import annotations

import dataclasses
import enum
import logging
import math

import numpy as np

from ._version import __version__
from .config import DEFAULT_SETTINGS, Settings
from .entanglement import DensityMatrix, schmidt_spectrum_svd
from .errors import InvalidArgumentError, ResourceError
from .fock import (
    LadderPolynomial,
    TwoModeState,
    annihilation,
    expectation,
    identity_operator,
    quadrature,
    variance,
)
from .states import collective_number
from .typing import Any, Dict, Mode, NamedTuple, Optional, Tuple
from .util import Cutoffs, check_xi

logger = logging.getLogger(__name__)

#: separable states satisfy ``Var(Omega(xi)) >= VARIANCE_BOUND`` for every xi
VARIANCE_BOUND = 4.0


class Verdict(enum.Enum):
    """outcome of one separability test"""

    VIOLATED = "violated"
    SATISFIED = "satisfied"
    BOUNDARY = "satisfied (boundary)"
    INCONCLUSIVE = "inconclusive"

    @property
    def entangled(self) -> bool:
        """a violation certifies entanglement; nothing else does"""
        return self is Verdict.VIOLATED


class CriterionResult(NamedTuple):
    value: float
    bound: float
    verdict: Verdict

    @property
    def margin(self) -> float:
        """``value - bound``; negative when the bound is violated"""
        return self.value - self.bound

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "bound": self.bound,
            "verdict": self.verdict.value,
            "margin": self.margin,
        }


def judge(value: float, bound: float, settings: Settings = DEFAULT_SETTINGS) -> Verdict:
    """
    ``violated`` iff ``value < bound - verdict_margin``; values within the
    margin of the bound are ``satisfied (boundary)``
    """

    if value < bound - settings.verdict_margin:
        return Verdict.VIOLATED
    if abs(value - bound) <= settings.verdict_margin:
        return Verdict.BOUNDARY

    return Verdict.SATISFIED


def _scale(xi: float, inverse: bool) -> float:
    xi = check_xi(xi)

    return 1 / xi if inverse else xi


def epr_operators(
    xi: float,
    cutoff_a: int,
    cutoff_b: int,
    inverse: bool = False,
    settings: Settings = DEFAULT_SETTINGS,
) -> Tuple[LadderPolynomial, LadderPolynomial]:
    """
    ``(omega_+, omega_-)`` at ``xi``, or at ``1/xi`` when ``inverse`` is set

    :raise InvalidArgumentError: unless ``0 < xi < 1``
    """

    scale = math.sqrt(_scale(xi, inverse))
    x_a, p_a = (quadrature("A", which, cutoff_a, cutoff_b, settings) for which in "xp")
    x_b, p_b = (quadrature("B", which, cutoff_a, cutoff_b, settings) for which in "xp")

    return x_a / scale - scale * x_b, p_a / scale + scale * p_b


def omega_operator(
    xi: float,
    cutoff_a: int,
    cutoff_b: int,
    inverse: bool = False,
    shift: Tuple[float, float] = (0.0, 0.0),
    settings: Settings = DEFAULT_SETTINGS,
) -> LadderPolynomial:
    """
    The total noise operator ``(omega_+ - s_+)^2 + (omega_- - s_-)^2``.

    With the default zero ``shift`` this is
    ``(2 a^dagger a + 1)/xi + xi (2 b^dagger b + 1) - 2 (a b + a^dagger b^dagger)``,
    which equals ``(1/xi - xi)(2 A^dagger A + 1)``. ``inverse`` builds
    ``Omega(1/xi)`` from the same ``xi``.

    :param shift: the means ``(<omega_+>, <omega_->)`` to subtract
    :raise InvalidArgumentError: unless ``0 < xi < 1``
    """

    plus, minus = epr_operators(xi, cutoff_a, cutoff_b, inverse, settings)
    unit = identity_operator(cutoff_a, cutoff_b, settings)
    plus = plus - shift[0] * unit
    minus = minus - shift[1] * unit

    return (plus @ plus + minus @ minus).as_hermitian()


def two_oscillator_operator(
    xi: float, cutoff_a: int, cutoff_b: int, settings: Settings = DEFAULT_SETTINGS
) -> LadderPolynomial:
    """
    ``Omega(xi) + Omega(1/xi) = 2 (1/xi - xi)(A^dagger A + B^dagger B + 1)``,
    diagonal on the entangled number states
    """

    return omega_operator(xi, cutoff_a, cutoff_b, settings=settings) + omega_operator(
        xi, cutoff_a, cutoff_b, inverse=True, settings=settings
    )


def duan_bound(xi: float) -> float:
    xi = check_xi(xi)

    return 1 / xi + xi


def duan_test(
    state: TwoModeState, xi: float, settings: Settings = DEFAULT_SETTINGS
) -> CriterionResult:
    """
    ``Var(omega_+) + Var(omega_-)`` against ``1/xi + xi``. The variances
    subtract the means, so displaced states are handled too.
    """

    plus, minus = epr_operators(xi, state.cutoff_a, state.cutoff_b, settings=settings)
    value = variance(plus, state) + variance(minus, state)
    bound = duan_bound(xi)

    return CriterionResult(value, bound, judge(value, bound, settings))


def duan_violation_threshold(xi: float) -> float:
    """
    ``xi^2 / (1 - xi^2)``: the entangled number states with ``N_A`` below this
    value (and any ``N_B``) violate the total noise bound
    """

    xi = check_xi(xi)

    return xi**2 / (1 - xi**2)


def variance_criterion(
    state: TwoModeState,
    xi: float,
    mean_subtracted: bool = False,
    settings: Settings = DEFAULT_SETTINGS,
) -> CriterionResult:
    """
    ``Var(Omega(xi))`` against ``4``.

    :param mean_subtracted: build ``Omega`` from ``omega_+- - <omega_+->``
     instead of the zero mean form
    """

    shift = (0.0, 0.0)

    if mean_subtracted:
        plus, minus = epr_operators(
            xi, state.cutoff_a, state.cutoff_b, settings=settings
        )
        shift = (expectation(plus, state).real, expectation(minus, state).real)
    omega = omega_operator(
        xi, state.cutoff_a, state.cutoff_b, shift=shift, settings=settings
    )
    value = variance(omega, state)

    return CriterionResult(
        value, VARIANCE_BOUND, judge(value, VARIANCE_BOUND, settings)
    )


def partial_transpose(
    rho: DensityMatrix, mode: Mode = "B", settings: Settings = DEFAULT_SETTINGS
) -> DensityMatrix:
    """
    transpose the indices of one mode: ``rho(n, m; n', m') -> rho(n, m'; n', m)``
    for ``mode="B"``. The result need not be positive.

    :raise ResourceError: beyond the dense dimension limit
    """

    if not rho.is_two_mode:
        raise InvalidArgumentError(
            "partial transposition needs a two-mode density matrix"
        )
    dimension = rho.matrix.shape[0]

    if dimension > settings.dense_limit:
        raise ResourceError(dimension, settings.dense_limit)
    cutoff_a, cutoff_b = rho.dims
    tensor = rho.matrix.reshape(cutoff_a, cutoff_b, cutoff_a, cutoff_b)

    if mode == "B":
        swapped = tensor.transpose(0, 3, 2, 1)
    elif mode == "A":
        swapped = tensor.transpose(2, 1, 0, 3)
    else:
        raise InvalidArgumentError(f"mode must be 'A' or 'B', got {mode!r}")

    return DensityMatrix(swapped.reshape(dimension, dimension), rho.dims)


def pt_min_eigenvalue(
    state: TwoModeState, settings: Settings = DEFAULT_SETTINGS
) -> Optional[float]:
    """
    smallest eigenvalue of the partially transposed ``|psi><psi|``, or
    ``None`` when the support of the state is wider than the dense limit in
    either mode.

    With Schmidt coefficients ``s_1 >= s_2 >= ...`` the transposed projector
    has the eigenvalues ``s_i^2`` and ``+-s_i s_j`` for ``i < j``, so the
    minimum is ``-s_1 s_2`` and the ``D_A D_B`` square matrix is never formed.
    """

    state = state.normalize()
    cutoffs = state.support_cutoffs(settings.truncation_tolerance)

    if max(cutoffs) > settings.dense_limit:
        logger.debug(
            "skipping partial transpose: support %s exceeds the dense limit %d",
            cutoffs,
            settings.dense_limit,
        )

        return None
    singular = schmidt_spectrum_svd(state.with_cutoffs(*cutoffs).normalize())

    if singular.size < 2:
        return 0.0 if state.cutoffs.dimension > 1 else 1.0

    return float(-singular[0] * singular[1])


class PtMomentCheck(NamedTuple):
    """
    Both sides of
    ``(1 - xi^2)^2 Var_PT(A^dagger A) = Var((a^dagger - xi b^dagger)(a - xi b)) + xi^2``
    """

    lhs: float
    rhs: float
    defect: float


def pt_moment_identity_check(
    state: TwoModeState, xi: float, settings: Settings = DEFAULT_SETTINGS
) -> PtMomentCheck:
    """
    Evaluate the left side on the explicitly transposed density matrix and
    the right side directly on the state.

    :raise ResourceError: beyond the dense dimension limit
    """

    xi = check_xi(xi)
    state = state.normalize()
    cutoff_a, cutoff_b = state.cutoffs
    rho = DensityMatrix.from_state(state, settings)
    transposed = partial_transpose(rho, "B", settings)
    count = collective_number("A", xi, cutoff_a, cutoff_b, settings)
    first = np.trace(transposed.matrix @ count.exact_block()).real
    second = np.trace(transposed.matrix @ (count @ count).exact_block()).real
    lhs = (1 - xi**2) ** 2 * (second - first**2)
    lowered = annihilation("A", cutoff_a, cutoff_b, settings) - xi * annihilation(
        "B", cutoff_a, cutoff_b, settings
    )
    rhs = variance((lowered.dag() @ lowered).as_hermitian(), state) + xi**2

    return PtMomentCheck(float(lhs), float(rhs), float(abs(lhs - rhs)))


@dataclasses.dataclass
class CriteriaReport:
    """
    Both separability tests and the partial transpose for one state
    """

    xi: float
    duan: CriterionResult
    variance: CriterionResult
    pt_min_eigenvalue: Optional[float]
    pt_verdict: Verdict
    cutoffs: Cutoffs
    mean_subtracted: bool = False
    settings: Settings = DEFAULT_SETTINGS
    #: extra provenance supplied by the caller (state description, losses)
    provenance: Dict[str, Any] = dataclasses.field(default_factory=dict)

    @property
    def verdicts(self) -> Dict[str, Verdict]:
        return {
            "duan": self.duan.verdict,
            "variance": self.variance.verdict,
            "partial_transpose": self.pt_verdict,
        }

    def to_dict(self) -> Dict[str, Any]:
        """the JSON representation, with a provenance block"""
        return {
            "xi": self.xi,
            "duan_value": self.duan.value,
            "duan_bound": self.duan.bound,
            "variance_value": self.variance.value,
            "variance_bound": self.variance.bound,
            "pt_min_eigenvalue": self.pt_min_eigenvalue,
            "verdicts": {
                "duan": self.duan.to_dict(),
                "variance": self.variance.to_dict(),
                "partial_transpose": {
                    "value": self.pt_min_eigenvalue,
                    "bound": 0.0,
                    "verdict": self.pt_verdict.value,
                },
            },
            "provenance": {
                "version": __version__,
                "xi": self.xi,
                "cutoffs": list(self.cutoffs),
                "mean_subtracted": self.mean_subtracted,
                "settings": self.settings.as_dict(),
                **self.provenance,
            },
        }


def criteria_report(
    state: TwoModeState,
    xi: float,
    mean_subtracted: bool = False,
    settings: Settings = DEFAULT_SETTINGS,
) -> CriteriaReport:
    """
    Run the total noise test, the variance criterion and the partial
    transpose. The partial transpose is ``inconclusive`` when the state is
    too large for dense work.
    """

    xi = check_xi(xi)
    state = state.normalize()
    pt_value = pt_min_eigenvalue(state, settings)
    pt_verdict = (
        Verdict.INCONCLUSIVE if pt_value is None else judge(pt_value, 0.0, settings)
    )
    report = CriteriaReport(
        xi=xi,
        duan=duan_test(state, xi, settings),
        variance=variance_criterion(state, xi, mean_subtracted, settings),
        pt_min_eigenvalue=pt_value,
        pt_verdict=pt_verdict,
        cutoffs=state.cutoffs,
        mean_subtracted=mean_subtracted,
        settings=settings,
    )
    logger.debug(
        "criteria at xi=%g: %s",
        xi,
        {name: verdict.value for name, verdict in report.verdicts.items()},
    )

    return report
