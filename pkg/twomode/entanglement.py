"""
Reduced states, Schmidt spectra and the entanglement entropy of pure
two-mode states
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.special import entr

from .config import DEFAULT_SETTINGS, Settings
from .errors import InvalidArgumentError, ResourceError
from .fock import TwoModeState
from .states import EnsLabel, closed_form_schmidt, ens_family, ens_state
from .typing import (
    ComplexArray,
    Dict,
    Iterable,
    List,
    Literal,
    Mode,
    NamedTuple,
    Optional,
    RealArray,
    Sequence,
    Tuple,
)
from .util import Cutoffs, check_xi

logger = logging.getLogger(__name__)

EntropyMethod = Literal["closed_form", "svd"]

#: the entropy conjectures, keyed by the quantity that is increased
CONJECTURES = {
    "n_b": "entropy grows with N_B at fixed N_A",
    "n_a": "entropy grows with N_A at fixed N_B",
    "xi": "entropy grows with xi at fixed N_A and N_B",
}


@dataclasses.dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    A density operator on a single mode (``dims == (D,)``) or on the
    flattened two-mode basis (``dims == (D_A, D_B)``).
    """

    matrix: ComplexArray
    dims: Tuple[int, ...]

    def __post_init__(self) -> None:
        size = math.prod(self.dims)

        if self.matrix.shape != (size, size):
            raise InvalidArgumentError(
                f"matrix of shape {self.matrix.shape} does not match dims {self.dims}"
            )

    @classmethod
    def from_state(
        cls, state: TwoModeState, settings: Settings = DEFAULT_SETTINGS
    ) -> DensityMatrix:
        """
        ``|psi><psi|`` on the flattened basis

        :raise ResourceError: beyond the dense dimension limit
        """

        dimension = state.cutoffs.dimension

        if dimension > settings.dense_limit:
            raise ResourceError(dimension, settings.dense_limit)
        vector = state.vector

        return cls(np.outer(vector, vector.conj()), state.cutoffs)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def is_two_mode(self) -> bool:
        return len(self.dims) == 2

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def eigenvalues(self) -> RealArray:
        """eigenvalues of the Hermitian part, ascending"""
        return np.linalg.eigvalsh(self.matrix)

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])


def reduced_density(state: TwoModeState, keep: Mode) -> DensityMatrix:
    """
    Trace out one mode. With ``C`` the coefficient matrix, the reduced
    state of ``A`` is ``C C^dagger`` and that of ``B`` is ``C^T C^*``.
    """

    coeffs = state.coeffs

    if keep == "A":
        return DensityMatrix(coeffs @ coeffs.conj().T, (state.cutoff_a,))
    if keep == "B":
        return DensityMatrix(coeffs.T @ coeffs.conj(), (state.cutoff_b,))
    raise InvalidArgumentError(f"keep must be 'A' or 'B', got {keep!r}")


def schmidt_spectrum_svd(state: TwoModeState) -> RealArray:
    """
    :return: the singular values of the coefficient matrix, descending
    """

    return np.linalg.svd(state.coeffs, compute_uv=False)


def entropy_of_weights(
    weights: Iterable[float], settings: Settings = DEFAULT_SETTINGS
) -> float:
    """
    Shannon entropy in bits of squared Schmidt coefficients. Weights whose
    Schmidt value lies below ``settings.entropy_floor`` are dropped.
    """

    weights = np.asarray(list(weights), dtype=np.float64)
    kept = weights[weights > settings.entropy_floor**2]

    return math.fsum(entr(kept)) / math.log(2)


def entanglement_entropy(
    state: TwoModeState, settings: Settings = DEFAULT_SETTINGS
) -> float:
    """
    von Neumann entropy (bits) of either reduced state of a pure state
    """

    return entropy_of_weights(schmidt_spectrum_svd(state) ** 2, settings)


def entropy_from_closed_form(
    label: EnsLabel, settings: Settings = DEFAULT_SETTINGS
) -> float:
    """
    entropy (bits) of ``|N_A, N_B; xi>`` from the closed form Schmidt
    coefficients

    :raise PrecisionError: when the alternating sum loses precision
    """

    spectrum = closed_form_schmidt(label, settings=settings)

    return entropy_of_weights(spectrum.weights, settings)


class PartialResolution(NamedTuple):
    """
    The partial sum ``sum |N_A, N_B; xi><N_A, N_B; xi|`` compressed onto
    the witness Fock states
    """

    witnesses: List[Tuple[int, int]]
    matrix: ComplexArray

    def defect(self) -> float:
        """``max |M - 1|`` over the witness block"""
        return float(np.max(np.abs(self.matrix - np.eye(len(self.witnesses)))))


def witness_states(bound: int) -> List[Tuple[int, int]]:
    """Fock labels ``(n_A, n_B)`` with ``n_A + n_B <= bound``"""
    return [
        (n_a, total - n_a) for total in range(bound + 1) for n_a in range(total + 1)
    ]


def partial_resolution(
    xi: float,
    n_max: int,
    witness_bound: Optional[int] = None,
    cutoffs: Optional[Cutoffs] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> PartialResolution:
    """
    Sum the projectors onto ``|N_A, N_B; xi>`` for ``N_A, N_B <= n_max``
    within the span of the witness Fock states.

    :param witness_bound: defaults to ``settings.witness_bound``
    :raise TruncationError: when the family cannot be built on ``cutoffs``
    """

    xi = check_xi(xi)

    if n_max < 0:
        raise InvalidArgumentError(f"n_max must be non-negative, got {n_max}")
    bound = settings.witness_bound if witness_bound is None else witness_bound
    witnesses = witness_states(bound)

    if cutoffs is not None and min(cutoffs) <= bound:
        raise InvalidArgumentError(
            f"cutoffs {cutoffs} do not hold the witness states n_A + n_B <= {bound}"
        )
    rows, cols = (np.array(index) for index in zip(*witnesses))
    overlaps = np.array(
        [
            state.coeffs[rows, cols]
            for _, state in ens_family(xi, n_max, n_max, cutoffs, settings)
        ]
    )

    return PartialResolution(witnesses, overlaps.conj().T @ overlaps)


def completeness_defect(
    xi: float,
    n_max: int,
    cutoffs: Optional[Cutoffs] = None,
    witness_bound: Optional[int] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> float:
    """
    How far the entangled number states with ``N_A, N_B <= n_max`` are from
    resolving the identity on the witness subspace
    """

    defect = partial_resolution(xi, n_max, witness_bound, cutoffs, settings).defect()
    logger.debug("completeness defect xi=%g n_max=%d: %.3e", xi, n_max, defect)

    return defect


class GridCell(NamedTuple):
    """One row of the entropy grid"""

    n_a: int
    n_b: int
    xi: float
    entropy_bits: float
    #: cutoffs the value was computed at and the squared norm lost past them
    cutoffs: Optional[Cutoffs] = None
    truncation_loss: float = 0.0


def _cell_entropy(
    label: EnsLabel, method: EntropyMethod, settings: Settings
) -> GridCell:
    if method == "closed_form":
        spectrum = closed_form_schmidt(label, settings=settings)
        return GridCell(
            label.n_a,
            label.n_b,
            label.xi,
            entropy_of_weights(spectrum.weights, settings),
            spectrum.cutoffs,
            spectrum.tail_mass,
        )
    state = ens_state(label, settings=settings)

    return GridCell(
        label.n_a,
        label.n_b,
        label.xi,
        entanglement_entropy(state, settings),
        state.cutoffs,
        state.truncation_loss,
    )


def entropy_grid(
    xi: float,
    n_max: int,
    method: EntropyMethod = "closed_form",
    workers: Optional[int] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> List[GridCell]:
    """
    Entropy of every ``|N_A, N_B; xi>`` with ``0 <= N_A, N_B <= n_max``,
    row-major in ``N_A``.

    :param method: ``closed_form`` (default) or ``svd`` of the constructed state
    :param workers: evaluate cells on this many threads; the output order
     does not depend on it
    :raise InvalidArgumentError: when ``n_max`` exceeds the configured limit
    """

    xi = check_xi(xi)

    if not 0 <= n_max <= settings.entropy_grid_limit:
        raise InvalidArgumentError(
            f"n_max must lie in [0, {settings.entropy_grid_limit}], got {n_max}"
        )
    if method not in ("closed_form", "svd"):
        raise InvalidArgumentError(f"unknown entropy method {method!r}")
    labels = [
        EnsLabel(n_a, n_b, xi)
        for n_a, n_b in itertools.product(range(n_max + 1), repeat=2)
    ]

    def evaluate(label: EnsLabel) -> GridCell:
        return _cell_entropy(label, method, settings)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(evaluate, labels))

    return [evaluate(label) for label in labels]


class Finding(NamedTuple):
    """A pair of labels for which an entropy conjecture fails"""

    conjecture: str
    smaller: EnsLabel
    larger: EnsLabel
    delta: float


@dataclasses.dataclass
class MonotonicityReport:
    """
    Outcome of the entropy conjectures over a grid. These are findings:
    nothing here is treated as a failure.
    """

    checked: Dict[str, int] = dataclasses.field(
        default_factory=lambda: dict.fromkeys(CONJECTURES, 0)
    )
    violations: List[Finding] = dataclasses.field(default_factory=list)

    def held(self, conjecture: str) -> int:
        return self.checked[conjecture] - sum(
            1 for finding in self.violations if finding.conjecture == conjecture
        )

    def fraction(self, conjecture: str) -> float:
        """fraction of adjacent pairs for which ``conjecture`` holds"""
        checked = self.checked[conjecture]

        return self.held(conjecture) / checked if checked else 1.0

    def summary(self) -> Dict[str, float]:
        return {conjecture: self.fraction(conjecture) for conjecture in CONJECTURES}


def monotonicity_findings(
    grids: Dict[float, Sequence[GridCell]]
) -> MonotonicityReport:
    """
    Compare adjacent cells of entropy grids (keyed by ``xi``, all over the
    same ``n_max``) against the three conjectures: each pair counts as held
    when the entropy strictly increases.
    """

    report = MonotonicityReport()
    tables = {
        xi: {(cell.n_a, cell.n_b): cell.entropy_bits for cell in cells}
        for xi, cells in grids.items()
    }

    def compare(
        conjecture: str, first: EnsLabel, second: EnsLabel, delta: float
    ) -> None:
        report.checked[conjecture] += 1

        if not delta > 0:
            finding = Finding(conjecture, first, second, delta)
            logger.info(
                "conjecture '%s' fails: %s -> %s",
                CONJECTURES[conjecture],
                first,
                second,
            )
            report.violations.append(finding)

    for xi, table in tables.items():
        for (n_a, n_b), value in sorted(table.items()):
            neighbours = {"n_b": (n_a, n_b + 1), "n_a": (n_a + 1, n_b)}

            for conjecture, neighbour in neighbours.items():
                if neighbour in table:
                    compare(
                        conjecture,
                        EnsLabel(n_a, n_b, xi),
                        EnsLabel(*neighbour, xi),
                        table[neighbour] - value,
                    )
    ordered = sorted(tables)

    for low, high in zip(ordered, ordered[1:]):
        for key in sorted(set(tables[low]) & set(tables[high])):
            compare(
                "xi",
                EnsLabel(*key, low),
                EnsLabel(*key, high),
                tables[high][key] - tables[low][key],
            )

    return report
