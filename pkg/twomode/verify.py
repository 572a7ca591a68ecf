"""
Self checks of the closed forms against the numerical constructions

Each check is registered under a name with the suites (``fast``, ``full``)
that run it. Hard checks fail the run; soft checks (the entropy
conjectures) only report findings. Every random draw comes from one
:func:`numpy.random.default_rng` seeded by the caller, so a run is
reproducible.
"""

from __future__ import annotations

import dataclasses
import logging
import math

import numpy as np

from .coherent import (
    CoherentLabel,
    coherent_product,
    coherent_state_series,
    displaced_coherent_state,
    local_displacement_state,
)
from .config import DEFAULT_SETTINGS, Settings
from .criteria import (
    duan_test,
    omega_operator,
    partial_transpose,
    pt_min_eigenvalue,
    pt_moment_identity_check,
    two_oscillator_operator,
    variance_criterion,
)
from .entanglement import (
    DensityMatrix,
    completeness_defect,
    entanglement_entropy,
    entropy_grid,
    monotonicity_findings,
    schmidt_spectrum_svd,
)
from .errors import PrecisionError, ResourceError, TruncationError
from .fock import TwoModeState, identity_operator
from .states import (
    EnsLabel,
    closed_form_schmidt,
    collective_annihilator,
    collective_number,
    ens_family,
    ens_state,
    negative_binomial_pmf,
    photon_number_moments,
    squeezing_parameter,
    tmsv,
    two_mode_squeezer,
)
from .typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Literal,
    NamedTuple,
    Optional,
    Tuple,
)
from .util import Cutoffs

logger = logging.getLogger(__name__)

Suite = Literal["fast", "full"]


class CheckResult(NamedTuple):
    """
    Outcome of one check: ``value`` is the worst observed quantity and
    ``passed`` compares it with ``tolerance``
    """

    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""
    hard: bool = True
    #: widest window among the states the check built
    cutoffs: Optional[Cutoffs] = None
    truncation_loss: float = 0.0

    @property
    def status(self) -> str:
        if self.passed:
            return "pass"

        return "fail" if self.hard else "finding"


@dataclasses.dataclass
class Context:
    suite: Suite
    rng: np.random.Generator
    settings: Settings = DEFAULT_SETTINGS
    cutoffs: Optional[Cutoffs] = None
    truncation_loss: float = 0.0

    @property
    def full(self) -> bool:
        return self.suite == "full"

    def grid(self) -> Iterator[EnsLabel]:
        """``0 <= N_B <= N_A <= 6`` (3 in the fast suite) over the xi grid"""
        n_max = 6 if self.full else 3
        xis = (0.3, 0.5, 0.7, 0.8) if self.full else (0.5, 0.7)

        for xi in xis:
            for n_a in range(n_max + 1):
                for n_b in range(n_a + 1):
                    yield EnsLabel(n_a, n_b, xi)

    def random_vector(self, size: int) -> np.ndarray:
        vector = self.rng.normal(size=size) + 1j * self.rng.normal(size=size)

        return vector / np.linalg.norm(vector)

    def random_product(self, cutoff: int) -> TwoModeState:
        return TwoModeState.product(
            self.random_vector(cutoff), self.random_vector(cutoff)
        )

    def track(self, state: TwoModeState) -> TwoModeState:
        """widen the recorded window to cover ``state`` and keep its loss"""
        if self.cutoffs is None:
            self.cutoffs = state.cutoffs
        else:
            self.cutoffs = Cutoffs(*map(max, zip(self.cutoffs, state.cutoffs)))
        self.truncation_loss = max(self.truncation_loss, state.truncation_loss)

        return state

    def ens(self, label: EnsLabel) -> TwoModeState:
        return self.track(ens_state(label, settings=self.settings))


CheckFn = Callable[[Context], List[CheckResult]]


@dataclasses.dataclass(frozen=True)
class Check:
    name: str
    run: CheckFn
    suites: Tuple[Suite, ...]
    description: str


CHECKS: Dict[str, Check] = {}


def register(
    name: str, suites: Tuple[Suite, ...] = ("fast", "full")
) -> Callable[[CheckFn], CheckFn]:
    def decorator(fn: CheckFn) -> CheckFn:
        CHECKS[name] = Check(name, fn, suites, (fn.__doc__ or "").strip())

        return fn

    return decorator


def _bound(
    name: str, value: float, tolerance: float, detail: str = "", hard: bool = True
) -> CheckResult:
    """passes when ``value <= tolerance``"""
    return CheckResult(
        name, bool(value <= tolerance), float(value), tolerance, detail, hard
    )


def _residual(image: TwoModeState, state: TwoModeState, value: complex) -> float:
    """
    ``|(X - value) psi|`` one level inside the window: the outermost levels
    of an eigenvalue equation see amplitudes the truncation dropped
    """

    cutoff_a, cutoff_b = state.cutoffs

    return (image - state * value).with_cutoffs(cutoff_a - 1, cutoff_b - 1).norm()


@register("schmidt_oracle")
def schmidt_oracle(ctx: Context) -> List[CheckResult]:
    """closed form |C_m| against the singular values of the built state"""
    worst, where = 0.0, ""

    for label in ctx.grid():
        spectrum = closed_form_schmidt(label, settings=ctx.settings)
        closed = np.sort(np.abs(spectrum.coeffs))[::-1]
        singular = schmidt_spectrum_svd(ctx.ens(label))
        size = min(closed.size, singular.size)
        error = float(np.max(np.abs(closed[:size] - singular[:size])))

        if error >= worst:
            worst, where = error, str(label)

    return [_bound("schmidt_oracle", worst, 1e-9, f"worst at {where}")]


@register("eigenstates")
def eigenstates(ctx: Context) -> List[CheckResult]:
    """collective number residuals and the two oscillator spectrum"""
    number_worst, pair_worst = 0.0, 0.0

    for label in ctx.grid():
        state = ctx.ens(label)
        cutoff_a, cutoff_b = state.cutoffs

        for which, value in (("A", label.n_a), ("B", label.n_b)):
            count = collective_number(
                which,  # type: ignore[arg-type]
                label.xi,
                cutoff_a,
                cutoff_b,
                ctx.settings,
            )
            number_worst = max(
                number_worst, _residual(count.apply(state).state, state, value)
            )
        pair = two_oscillator_operator(label.xi, cutoff_a, cutoff_b, ctx.settings)
        level = 2 * (1 / label.xi - label.xi) * (label.n_a + label.n_b + 1)
        pair_worst = max(pair_worst, _residual(pair.apply(state).state, state, level))

    return [
        _bound("eigenstates.collective_number", number_worst, 1e-8),
        _bound("eigenstates.two_oscillator", pair_worst, 1e-7),
    ]


@register("omega_spectrum")
def omega_spectrum(ctx: Context) -> List[CheckResult]:
    """Omega(xi) = (1/xi - xi)(2 A^dagger A + 1) and its ten lowest levels"""
    xi, cutoff = 0.5, 30
    omega = omega_operator(xi, cutoff, cutoff, settings=ctx.settings)
    count = collective_number("A", xi, cutoff, cutoff, ctx.settings)
    unit = identity_operator(cutoff, cutoff, ctx.settings)
    oscillator = (1 / xi - xi) * (2 * count + unit)
    identity_error = float(
        np.max(np.abs(omega.exact_block() - oscillator.exact_block()))
    )
    level_error = 0.0

    for k in range(10):
        state = ctx.ens(EnsLabel(k, 0, xi))
        ladder = omega_operator(xi, *state.cutoffs, settings=ctx.settings)
        level = (1 / xi - xi) * (2 * k + 1)
        level_error = max(
            level_error, _residual(ladder.apply(state).state, state, level)
        )

    return [
        _bound("omega_spectrum.identity", identity_error, 1e-10),
        _bound("omega_spectrum.levels", level_error, 1e-6),
    ]


@register("orthonormality")
def orthonormality(ctx: Context) -> List[CheckResult]:
    """Gram matrix of the entangled number states"""
    n_max = 4 if ctx.full else 2
    worst = 0.0

    for xi in (0.5, 0.7):
        family = ens_family(xi, n_max, n_max, settings=ctx.settings)
        basis = np.array([state.vector for _, state in family])
        gram = basis.conj() @ basis.T
        worst = max(worst, float(np.max(np.abs(gram - np.eye(len(basis))))))

    return [_bound("orthonormality", worst, 1e-8)]


@register("swap_symmetry")
def swap_symmetry(ctx: Context) -> List[CheckResult]:
    """mode exchange maps |N_A, N_B> onto |N_B, N_A>"""
    worst = 0.0

    for label in ctx.grid():
        if label.n_a == label.n_b:
            continue
        swapped = ctx.ens(label).swap_modes()
        other = ctx.ens(label.swapped())
        worst = max(worst, float(np.max(np.abs(swapped.coeffs - other.coeffs))))

    return [_bound("swap_symmetry", worst, 1e-10)]


@register("moments")
def moments(ctx: Context) -> List[CheckResult]:
    """photon number moments and the negative binomial law"""
    moment_worst, nb_worst = 0.0, 0.0

    for label in ctx.grid():
        spectrum = closed_form_schmidt(label, settings=ctx.settings)
        expected = photon_number_moments(label)
        observed = spectrum.moments()
        moment_worst = max(
            moment_worst,
            abs(observed.mean - expected.mean),
            abs(observed.variance - expected.variance),
        )

        if label.n_b == 0:
            m = np.arange(spectrum.coeffs.size)
            law = negative_binomial_pmf(label.n_a, label.xi**2, m)
            nb_worst = max(nb_worst, float(np.max(np.abs(spectrum.weights - law))))

    return [
        _bound("moments.closed_form", moment_worst, 1e-8),
        _bound("moments.negative_binomial", nb_worst, 1e-10),
    ]


@register("duan_saturation")
def duan_saturation(ctx: Context) -> List[CheckResult]:
    """the squeezed vacuum reaches 1/xi - xi, the vacuum sits on 1/xi + xi"""
    squeezed, vacuum_error = 0.0, 0.0
    vacuum = TwoModeState.fock(0, 0, 4, 4)

    for xi in (0.3, 0.5, 0.7):
        state = ctx.ens(EnsLabel(0, 0, xi))
        squeezed = max(
            squeezed, abs(duan_test(state, xi, ctx.settings).value - (1 / xi - xi))
        )
        vacuum_error = max(
            vacuum_error, abs(duan_test(vacuum, xi, ctx.settings).value - (1 / xi + xi))
        )

    return [
        _bound("duan_saturation.tmsv", squeezed, 1e-8),
        _bound("duan_saturation.vacuum", vacuum_error, 1e-8),
    ]


@register("variance_criterion")
def variance_bound(ctx: Context) -> List[CheckResult]:
    """entangled number states reach zero, separable states stay above 4"""

    def value(state: TwoModeState, xi: float) -> float:
        return variance_criterion(state, xi, settings=ctx.settings).value

    ens_worst = max(
        value(ctx.ens(label), label.xi) for label in ctx.grid()
    )
    vacuum = TwoModeState.fock(0, 0, 4, 4)
    vacuum_error = max(abs(value(vacuum, xi) - 4) for xi in (0.3, 0.7))
    deficit = 0.0

    for _ in range(50 if ctx.full else 10):
        state = ctx.random_product(6)

        for xi in (0.3, 0.7):
            deficit = max(deficit, 4 - value(state, xi))

    return [
        _bound("variance_criterion.ens", ens_worst, 1e-7),
        _bound("variance_criterion.vacuum", vacuum_error, 1e-8),
        _bound("variance_criterion.products", deficit, 1e-8),
    ]


@register("degeneracy")
def degeneracy(ctx: Context) -> List[CheckResult]:
    """random superpositions over N_B at fixed N_A keep both Omega values"""
    variance_worst, duan_worst = 0.0, 0.0

    for xi in (0.5, 0.7):
        family = {
            label: ctx.track(state)
            for label, state in ens_family(xi, 2, 4, settings=ctx.settings)
        }

        for n_a in range(3):
            stack = np.array(
                [family[EnsLabel(n_a, n_b, xi)].coeffs for n_b in range(5)]
            )
            level = (1 / xi - xi) * (2 * n_a + 1)

            for _ in range(5 if ctx.full else 2):
                coeffs = np.tensordot(ctx.random_vector(5), stack, axes=1)
                state = TwoModeState(coeffs, ctx.settings.truncation_tolerance)
                state = state.normalize()
                variance_worst = max(
                    variance_worst,
                    variance_criterion(state, xi, settings=ctx.settings).value,
                )
                duan_worst = max(
                    duan_worst, abs(duan_test(state, xi, ctx.settings).value - level)
                )

    return [
        _bound("degeneracy.variance", variance_worst, 1e-7),
        _bound("degeneracy.duan", duan_worst, 1e-7),
    ]


@register("partial_transpose")
def partial_transpose_signs(ctx: Context) -> List[CheckResult]:
    """squeezed and number states are NPT, product states are not"""
    results = []
    labels = {"tmsv": EnsLabel(0, 0, 0.5), "ens_1_0": EnsLabel(1, 0, 0.5)}

    for name, label in labels.items():
        state = ctx.ens(label).with_cutoffs(20, 20).normalize()
        value = pt_min_eigenvalue(state, ctx.settings)
        results.append(
            CheckResult(
                f"partial_transpose.{name}",
                value is not None and value < -1e-4,
                math.nan if value is None else value,
                -1e-4,
                f"{label} at cutoff 20",
            )
        )
    lowest = min(
        pt_min_eigenvalue(ctx.random_product(6), ctx.settings) or 0.0
        for _ in range(20 if ctx.full else 5)
    )
    results.append(_bound("partial_transpose.products", -lowest, 1e-8))
    mismatch = 0.0

    for _ in range(10 if ctx.full else 3):
        state = TwoModeState.from_vector(ctx.random_vector(30), 5, 6)
        rho = DensityMatrix.from_state(state, ctx.settings)
        dense = partial_transpose(rho, "B", ctx.settings).min_eigenvalue()
        mismatch = max(
            mismatch, abs(dense - (pt_min_eigenvalue(state, ctx.settings) or 0.0))
        )
    results.append(_bound("partial_transpose.schmidt_route", mismatch, 1e-10))

    return results


@register("pt_moments")
def pt_moments(ctx: Context) -> List[CheckResult]:
    """the partial transpose moment identity on random states"""
    worst, floor = 0.0, 0.0

    for _ in range(50 if ctx.full else 10):
        state = TwoModeState.from_vector(ctx.random_vector(64), 8, 8)

        for xi in (0.3, 0.7):
            check = pt_moment_identity_check(state, xi, ctx.settings)
            worst = max(worst, check.defect)
            floor = max(floor, xi**2 - check.rhs)

    return [
        _bound("pt_moments.defect", worst, 1e-8),
        _bound("pt_moments.lower_bound", floor, 1e-8),
    ]


@register("entropy")
def entropy(ctx: Context) -> List[CheckResult]:
    """squeezed vacuum entropy, grid symmetry and the conjectures"""
    xi = 0.7
    state = ctx.ens(EnsLabel(0, 0, xi))
    reference = -math.log2(1 - xi**2) - xi**2 / (1 - xi**2) * math.log2(xi**2)
    n_max = 10 if ctx.full else 4
    grids = {
        value: entropy_grid(value, n_max, settings=ctx.settings) for value in (0.5, 0.7)
    }
    table = {(cell.n_a, cell.n_b): cell.entropy_bits for cell in grids[0.7]}
    asymmetry = max(abs(table[a, b] - table[b, a]) for a, b in table)
    report = monotonicity_findings(grids)
    results = [
        _bound(
            "entropy.tmsv",
            abs(entanglement_entropy(state, ctx.settings) - reference),
            1e-4,
        ),
        _bound("entropy.grid_symmetry", asymmetry, 1e-9),
    ]

    for conjecture, fraction in report.summary().items():
        held, checked = report.held(conjecture), report.checked[conjecture]
        results.append(
            CheckResult(
                f"entropy.conjecture_{conjecture}",
                fraction == 1.0,
                fraction,
                1.0,
                f"{held}/{checked} adjacent pairs increase",
                hard=False,
            )
        )

    return results


@register("completeness")
def completeness(ctx: Context) -> List[CheckResult]:
    """the number states fill the identity on low Fock states"""
    xi = 0.5
    ground = completeness_defect(xi, 0, witness_bound=0, settings=ctx.settings)
    small, large = (4, 12) if ctx.full else (1, 3)
    coarse = completeness_defect(xi, small, settings=ctx.settings)
    fine = completeness_defect(xi, large, settings=ctx.settings)

    return [
        _bound("completeness.ground", abs(ground - 0.25), 1e-10),
        CheckResult(
            "completeness.decreasing",
            fine < coarse,
            fine,
            coarse,
            f"n_max {small} -> {large}",
        ),
    ]


@register("limits")
def limits(ctx: Context) -> List[CheckResult]:
    """small xi reduces to Fock states and the squeezer agrees with the ladder"""
    label = EnsLabel(3, 2, 1e-8)
    state = ctx.ens(label)
    product = TwoModeState.fock(3, 2, *state.cutoffs)
    strength = squeezing_parameter(0.5)
    worst = 0.0

    for n in range(4):
        target = ctx.ens(EnsLabel(n, 0, 0.5))
        squeezer = two_mode_squeezer(strength, *target.cutoffs, settings=ctx.settings)
        image = squeezer.apply(TwoModeState.fock(n, 0, *target.cutoffs)).state
        worst = max(worst, 1 - target.overlap(image))

    return [
        _bound("limits.small_xi", 1 - state.overlap(product), 1e-5),
        _bound("limits.squeezer", worst, 1e-8),
    ]


@register("coherent")
def coherent(ctx: Context) -> List[CheckResult]:
    """three constructions of the collective coherent states agree"""
    labels = [CoherentLabel(0.5 + 0.3j, -0.4, 0.5), CoherentLabel(1.0, 0.5j, 0.7)]

    if ctx.full:
        for xi in (0.3, 0.7, 0.8):
            alpha, beta = ctx.rng.uniform(-1, 1, (2, 2)) @ np.array([1, 1j])
            labels.append(CoherentLabel(alpha, beta, xi))
    overlap_gap, residual, entropy_gap, noise_gap = 0.0, 0.0, 0.0, 0.0

    for label in labels:
        series = ctx.track(coherent_state_series(label, settings=ctx.settings))
        cutoffs = series.cutoffs

        for other in (
            displaced_coherent_state(label, cutoffs, ctx.settings),
            local_displacement_state(label, cutoffs, ctx.settings),
        ):
            overlap_gap = max(overlap_gap, 1 - series.overlap(other))

        for which, value in (("A", label.alpha), ("B", label.beta)):
            lower = collective_annihilator(
                which, label.xi, *cutoffs, ctx.settings  # type: ignore[arg-type]
            )
            image = lower.apply(series).state
            residual = max(residual, _residual(image, series, value))
        vacuum = tmsv(label.xi, *cutoffs, settings=ctx.settings)
        entropy_gap = max(
            entropy_gap,
            abs(
                entanglement_entropy(series, ctx.settings)
                - entanglement_entropy(vacuum, ctx.settings)
            ),
        )
        shifted = variance_criterion(
            series, label.xi, mean_subtracted=True, settings=ctx.settings
        )
        reference = variance_criterion(vacuum, label.xi, settings=ctx.settings)
        noise_gap = max(noise_gap, abs(shifted.value - reference.value))
    limit = ctx.track(
        coherent_state_series(CoherentLabel(1, 0.5, 1e-8), settings=ctx.settings)
    )
    bare = coherent_product(1, 0.5, *limit.cutoffs, ctx.settings)

    return [
        _bound("coherent.constructions", overlap_gap, 1e-7),
        _bound("coherent.eigenvalues", residual, 1e-7),
        _bound("coherent.entropy", entropy_gap, 1e-7),
        _bound("coherent.mean_subtracted_variance", noise_gap, 1e-6),
        _bound("coherent.small_xi", 1 - limit.overlap(bare), 1e-5),
    ]


@register("node_structure", suites=("full",))
def node_structure(ctx: Context) -> List[CheckResult]:
    """N_A = 120 at xi = 0.7: N_B nodes and the negative binomial law"""
    miscount, nb_worst = 0, 0.0

    for n_b in range(5):
        spectrum = closed_form_schmidt(EnsLabel(120, n_b, 0.7), settings=ctx.settings)
        miscount += abs(spectrum.nodes() - n_b)

        if n_b == 0:
            law = negative_binomial_pmf(120, 0.49, np.arange(spectrum.coeffs.size))
            nb_worst = float(np.max(np.abs(spectrum.weights - law)))

    return [
        _bound("node_structure.nodes", miscount, 0),
        _bound("node_structure.negative_binomial", nb_worst, 1e-10),
    ]


def _run_check(check: Check, ctx: Context) -> List[CheckResult]:
    ctx.cutoffs, ctx.truncation_loss = None, 0.0

    try:
        outcome = check.run(ctx)
    except (TruncationError, PrecisionError, ResourceError) as error:
        logger.error("%s could not complete: %s", check.name, error)

        return [
            CheckResult(
                check.name,
                False,
                math.inf,
                0.0,
                f"{type(error).__name__}: {error}",
                cutoffs=ctx.cutoffs,
                truncation_loss=ctx.truncation_loss,
            )
        ]

    return [
        result._replace(cutoffs=ctx.cutoffs, truncation_loss=ctx.truncation_loss)
        for result in outcome
    ]


def run_suite(
    suite: Suite = "fast", seed: int = 0, settings: Settings = DEFAULT_SETTINGS
) -> List[CheckResult]:
    """
    run every check registered for ``suite`` in registration order. A check
    that cannot complete within the numerical limits is reported as a
    single failed result.
    """

    if suite not in ("fast", "full"):
        raise ValueError(f"unknown suite {suite!r}")
    ctx = Context(suite, np.random.default_rng(seed), settings)
    results: List[CheckResult] = []

    for check in CHECKS.values():
        if suite not in check.suites:
            continue
        logger.info("running %s", check.name)
        outcome = _run_check(check, ctx)

        for result in outcome:
            if not result.passed:
                log = logger.error if result.hard else logger.info
                log(
                    "%s: %s (value %.3e, tolerance %.1e) %s",
                    result.name,
                    result.status,
                    result.value,
                    result.tolerance,
                    result.detail,
                )
        results.extend(outcome)

    return results


def failed(results: List[CheckResult]) -> bool:
    """whether any hard check failed"""
    return any(result.hard and not result.passed for result in results)


__all__ = [
    "CHECKS",
    "Check",
    "CheckResult",
    "Context",
    "failed",
    "register",
    "run_suite",
]
