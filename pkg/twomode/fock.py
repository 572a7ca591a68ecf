"""
Truncated two-mode Fock space: states, operators and expectations

Basis states ``|n_A>|n_B>`` are flattened everywhere with the index
``n_A * cutoff_b + n_B``, i.e. row-major over the coefficient matrix
``coeffs[n_A, n_B]``. The JSON wire format of :class:`TwoModeState` uses the
same ordering.
"""

from __future__ import annotations

import functools
import logging
import math
from abc import ABCMeta, abstractmethod

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .config import DEFAULT_SETTINGS, Settings
from .errors import InvalidArgumentError, PrecisionError, ResourceError
from .typing import (
    Any,
    ComplexArray,
    Dict,
    MatrixBuilder,
    Mode,
    NamedTuple,
    OperatorMatrix,
    Optional,
    Quadrature,
    SparseMatrix,
    Tuple,
    Union,
)
from .util import Cutoffs, check_cutoff

logger = logging.getLogger(__name__)

Scalar = Union[int, float, complex]


def interior_indices(cutoff_a: int, cutoff_b: int) -> np.ndarray:
    """
    flattened indices of the basis states with ``n_A < D_A - 1`` and
    ``n_B < D_B - 1``; commutator identities are only checked on this block
    since truncation breaks ``[a, a^dagger] = 1`` on the last level.
    """

    n_a, n_b = np.meshgrid(
        np.arange(cutoff_a - 1), np.arange(cutoff_b - 1), indexing="ij"
    )

    return (n_a * cutoff_b + n_b).ravel()


def window_indices(cutoff_a: int, cutoff_b: int, padded_b: int) -> np.ndarray:
    """
    flattened indices, in a space whose mode ``B`` cutoff is ``padded_b``,
    of the basis states that lie inside the ``cutoff_a x cutoff_b`` window
    """

    n_a, n_b = np.meshgrid(np.arange(cutoff_a), np.arange(cutoff_b), indexing="ij")

    return (n_a * padded_b + n_b).ravel()


class TwoModeState:
    """
    A (not necessarily normalized) pure state of two bosonic modes truncated
    to ``cutoff_a x cutoff_b`` Fock levels.

    Instances are immutable; every operation returns a new state.

    :param coeffs: amplitudes indexed ``[n_A][n_B]``
    :param truncation_tolerance: the declared maximum squared norm that may
     have been lost to truncation while preparing this state
    :param truncation_loss: the squared norm measured as lost while preparing
     this state (relative to the normalized state)
    """

    __slots__ = ["coeffs", "truncation_tolerance", "truncation_loss"]

    def __init__(
        self,
        coeffs: Any,
        truncation_tolerance: float = DEFAULT_SETTINGS.truncation_tolerance,
        truncation_loss: float = 0.0,
    ):
        amplitudes = np.array(coeffs, dtype=np.complex128)

        if amplitudes.ndim != 2 or min(amplitudes.shape) < 1:
            raise InvalidArgumentError(
                f"coefficients must form a non-empty matrix, got shape {amplitudes.shape}"
            )
        if not np.all(np.isfinite(amplitudes)):
            raise InvalidArgumentError("amplitudes must be finite")
        amplitudes.setflags(write=False)
        self.coeffs: ComplexArray = amplitudes
        self.truncation_tolerance = float(truncation_tolerance)
        self.truncation_loss = float(truncation_loss)

    @classmethod
    def fock(
        cls,
        n_a: int,
        n_b: int,
        cutoff_a: int,
        cutoff_b: int,
        truncation_tolerance: float = DEFAULT_SETTINGS.truncation_tolerance,
    ) -> TwoModeState:
        """
        the product number state ``|n_a>_A |n_b>_B``
        """

        check_cutoff(cutoff_a, "cutoff_a")
        check_cutoff(cutoff_b, "cutoff_b")

        if not (0 <= n_a < cutoff_a and 0 <= n_b < cutoff_b):
            raise InvalidArgumentError(
                f"|{n_a},{n_b}> does not fit inside cutoffs {cutoff_a}x{cutoff_b}"
            )
        coeffs = np.zeros((cutoff_a, cutoff_b), dtype=np.complex128)
        coeffs[n_a, n_b] = 1

        return cls(coeffs, truncation_tolerance)

    @classmethod
    def product(
        cls,
        amplitudes_a: Any,
        amplitudes_b: Any,
        truncation_tolerance: float = DEFAULT_SETTINGS.truncation_tolerance,
    ) -> TwoModeState:
        """
        the product state built from one amplitude vector per mode
        """

        return cls(
            np.outer(
                np.asarray(amplitudes_a, dtype=np.complex128),
                np.asarray(amplitudes_b, dtype=np.complex128),
            ),
            truncation_tolerance,
        )

    @classmethod
    def from_vector(
        cls,
        vector: Any,
        cutoff_a: int,
        cutoff_b: int,
        truncation_tolerance: float = DEFAULT_SETTINGS.truncation_tolerance,
    ) -> TwoModeState:
        flat = np.asarray(vector, dtype=np.complex128)

        if flat.size != cutoff_a * cutoff_b:
            raise InvalidArgumentError(
                f"vector of size {flat.size} does not match cutoffs {cutoff_a}x{cutoff_b}"
            )

        return cls(flat.reshape(cutoff_a, cutoff_b), truncation_tolerance)

    @property
    def cutoff_a(self) -> int:
        return int(self.coeffs.shape[0])

    @property
    def cutoff_b(self) -> int:
        return int(self.coeffs.shape[1])

    @property
    def cutoffs(self) -> Cutoffs:
        return Cutoffs(self.cutoff_a, self.cutoff_b)

    @property
    def vector(self) -> ComplexArray:
        """the amplitudes in the flattened ``n_A * D_B + n_B`` order"""
        return self.coeffs.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def normalize(self) -> TwoModeState:
        """
        :raise InvalidArgumentError: for the zero vector
        """

        norm = self.norm()

        if norm == 0:
            raise InvalidArgumentError("cannot normalize the zero vector")

        return self._derive(self.coeffs / norm)

    def inner(self, other: TwoModeState) -> complex:
        """
        :return: ``<self|other>``
        """

        self._check_cutoffs(other)

        return complex(np.vdot(self.coeffs, other.coeffs))

    def overlap(self, other: TwoModeState) -> float:
        """
        :return: the fidelity ``|<self|other>|^2 / (<self|self><other|other>)``
        """

        return abs(self.inner(other)) ** 2 / (self.norm() ** 2 * other.norm() ** 2)

    def swap_modes(self) -> TwoModeState:
        """the state with modes ``A`` and ``B`` exchanged"""
        return self._derive(self.coeffs.T)

    def with_cutoffs(self, cutoff_a: int, cutoff_b: int) -> TwoModeState:
        """
        the state zero padded (or cropped) to new cutoffs. Cropping discards
        amplitudes; the relative squared norm dropped is added to
        :attr:`truncation_loss`.
        """

        check_cutoff(cutoff_a, "cutoff_a")
        check_cutoff(cutoff_b, "cutoff_b")
        coeffs = np.zeros((cutoff_a, cutoff_b), dtype=np.complex128)
        keep_a, keep_b = min(cutoff_a, self.cutoff_a), min(cutoff_b, self.cutoff_b)
        coeffs[:keep_a, :keep_b] = self.coeffs[:keep_a, :keep_b]
        weight = self.norm() ** 2
        dropped = weight - float(np.linalg.norm(coeffs)) ** 2

        return TwoModeState(
            coeffs,
            self.truncation_tolerance,
            self.truncation_loss + (max(0.0, dropped) / weight if weight else 0.0),
        )

    def support_cutoffs(self, tolerance: float) -> Cutoffs:
        """
        the smallest cutoffs whose window keeps all but ``tolerance`` of the
        squared norm (half of it per mode)
        """

        def kept(weights: np.ndarray) -> int:
            tails = np.cumsum(weights[::-1])[::-1]
            outside = np.nonzero(tails > tolerance / 2)[0]

            return int(outside[-1]) + 1 if outside.size else 1

        weights = np.abs(self.coeffs) ** 2

        return Cutoffs(kept(weights.sum(axis=1)), kept(weights.sum(axis=0)))

    def to_dict(self) -> Dict[str, Any]:
        """
        the JSON wire representation: row-major ``[re, im]`` pairs
        """

        return {
            "cutoff_a": self.cutoff_a,
            "cutoff_b": self.cutoff_b,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.vector],
            "truncation_tolerance": self.truncation_tolerance,
            "truncation_loss": self.truncation_loss,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> TwoModeState:
        """
        :raise InvalidArgumentError: if the payload is malformed
        """

        try:
            pairs = np.asarray(payload["coeffs"], dtype=np.float64)
            cutoff_a, cutoff_b = int(payload["cutoff_a"]), int(payload["cutoff_b"])
            tolerance = float(
                payload.get(
                    "truncation_tolerance", DEFAULT_SETTINGS.truncation_tolerance
                )
            )
            loss = float(payload.get("truncation_loss", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"malformed state payload: {exc}") from exc

        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise InvalidArgumentError("coeffs must be a list of [re, im] pairs")

        state = cls.from_vector(pairs[:, 0] + 1j * pairs[:, 1], cutoff_a, cutoff_b)

        return cls(state.coeffs, tolerance, loss)

    def _derive(self, coeffs: Any) -> TwoModeState:
        return TwoModeState(coeffs, self.truncation_tolerance, self.truncation_loss)

    def _check_cutoffs(self, other: TwoModeState) -> None:
        if self.cutoffs != other.cutoffs:
            raise InvalidArgumentError(
                f"cutoff mismatch: {self.cutoffs} vs {other.cutoffs}"
            )

    def __add__(self, other: TwoModeState) -> TwoModeState:
        self._check_cutoffs(other)

        return TwoModeState(
            self.coeffs + other.coeffs,
            max(self.truncation_tolerance, other.truncation_tolerance),
            self.truncation_loss + other.truncation_loss,
        )

    def __sub__(self, other: TwoModeState) -> TwoModeState:
        return self + (-1) * other

    def __mul__(self, scalar: Scalar) -> TwoModeState:
        return self._derive(self.coeffs * scalar)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"TwoModeState(cutoffs={self.cutoffs}, norm={self.norm():.12g})"


class Reach(NamedTuple):
    """
    How many Fock levels an operator can move each mode up (``raise``) or
    down (``lower``) in a single application
    """

    raise_a: int = 0
    lower_a: int = 0
    raise_b: int = 0
    lower_b: int = 0

    def then(self, other: Reach) -> Reach:
        """reach of a product of two operators"""
        return Reach(*(mine + theirs for mine, theirs in zip(self, other)))

    def widest(self, other: Reach) -> Reach:
        """reach of a sum of two operators"""
        return Reach(*(max(mine, theirs) for mine, theirs in zip(self, other)))

    def adjoint(self) -> Reach:
        return Reach(self.lower_a, self.raise_a, self.lower_b, self.raise_b)


class Applied(NamedTuple):
    """
    Result of applying an operator to a state
    """

    #: the (unnormalized) image inside the cutoff window
    state: TwoModeState
    #: squared norm of the image that landed outside the cutoff window
    truncation_loss: float


class TwoModeOperator(metaclass=ABCMeta):
    """
    Base class of operators acting on the flattened two-mode basis.

    :param cutoff_a: Fock cutoff of mode ``A``
    :param cutoff_b: Fock cutoff of mode ``B``
    :param hermitian: whether the operator is known to be Hermitian
    :param settings: numerical policy (dense limit, tolerances)
    """

    def __init__(
        self,
        cutoff_a: int,
        cutoff_b: int,
        hermitian: bool = False,
        settings: Settings = DEFAULT_SETTINGS,
    ):
        self.cutoff_a = check_cutoff(cutoff_a, "cutoff_a")
        self.cutoff_b = check_cutoff(cutoff_b, "cutoff_b")
        self.hermitian = hermitian
        self.settings = settings

    @property
    def cutoffs(self) -> Cutoffs:
        return Cutoffs(self.cutoff_a, self.cutoff_b)

    @property
    def dimension(self) -> int:
        return self.cutoff_a * self.cutoff_b

    @property
    @abstractmethod
    def sparse(self) -> SparseMatrix:
        """
        the truncated matrix in compressed sparse row form
        """
        raise NotImplementedError

    @abstractmethod
    def apply(self, state: TwoModeState) -> Applied:
        """
        Apply the operator to a state

        :param state: a state with the same cutoffs as this operator
        :return: (image inside the window, truncation loss)
        """
        raise NotImplementedError

    @property
    def matrix(self) -> OperatorMatrix:
        """
        the truncated matrix; dense up to :attr:`Settings.dense_limit`,
        sparse beyond it
        """

        if self.dimension <= self.settings.dense_limit:
            return self.sparse.toarray()

        return self.sparse

    def triplets(self) -> Tuple[np.ndarray, np.ndarray, ComplexArray]:
        """
        :return: ``(rows, columns, values)`` of the non-zero entries
        """

        coo = self.sparse.tocoo()

        return coo.row, coo.col, coo.data

    def interior_block(self) -> ComplexArray:
        """
        the dense matrix restricted to :func:`interior_indices`
        """

        indices = interior_indices(self.cutoff_a, self.cutoff_b)

        return self.sparse[indices][:, indices].toarray()

    def hermiticity_defect(self) -> float:
        """
        :return: ``max|M - M^dagger|`` over the truncated matrix
        """

        difference = self.sparse - self.sparse.conj().T

        return float(abs(difference).max()) if difference.nnz else 0.0

    def check_state(self, state: TwoModeState) -> None:
        """
        :raise InvalidArgumentError: if the state lives on different cutoffs
        """

        if state.cutoffs != self.cutoffs:
            raise InvalidArgumentError(
                f"cutoff mismatch: operator {self.cutoffs} vs state {state.cutoffs}"
            )

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(cutoffs={self.cutoffs}, "
            f"hermitian={self.hermitian})"
        )


class MatrixOperator(TwoModeOperator):
    """
    An operator given by a fixed truncated matrix. Its action is taken as
    exact, so :meth:`apply` always reports zero truncation loss.
    """

    def __init__(
        self,
        matrix: Any,
        cutoff_a: int,
        cutoff_b: int,
        hermitian: bool = False,
        settings: Settings = DEFAULT_SETTINGS,
    ):
        super().__init__(cutoff_a, cutoff_b, hermitian, settings)
        self._sparse = sp.csr_matrix(matrix, dtype=np.complex128)

        if self._sparse.shape != (self.dimension, self.dimension):
            raise InvalidArgumentError(
                f"matrix of shape {self._sparse.shape} does not act on "
                f"cutoffs {self.cutoffs}"
            )

    @property
    def sparse(self) -> SparseMatrix:
        return self._sparse

    def apply(self, state: TwoModeState) -> Applied:
        self.check_state(state)

        return Applied(
            TwoModeState.from_vector(
                self._sparse @ state.vector,
                self.cutoff_a,
                self.cutoff_b,
                state.truncation_tolerance,
            ),
            0.0,
        )


class LadderPolynomial(TwoModeOperator):
    """
    A polynomial in the ladder operators of both modes.

    The operator keeps the recipe that builds its matrix for any pair of
    cutoffs, and its :class:`Reach`. :meth:`apply` evaluates the action in
    a space padded by the raising reach, so the part of the image inside
    the window is the exact (untruncated) action and the reported loss is
    exactly the squared norm pushed past the cutoffs.

    :param builder: ``(cutoff_a, cutoff_b) -> csr matrix`` recipe
    :param reach: maximal number of levels moved per mode
    """

    def __init__(
        self,
        builder: MatrixBuilder,
        cutoff_a: int,
        cutoff_b: int,
        reach: Reach,
        hermitian: bool = False,
        settings: Settings = DEFAULT_SETTINGS,
    ):
        super().__init__(cutoff_a, cutoff_b, hermitian, settings)
        self.builder = builder
        self.reach = reach

    @functools.cached_property
    def sparse(self) -> SparseMatrix:
        return sp.csr_matrix(
            self.builder(self.cutoff_a, self.cutoff_b), dtype=np.complex128
        )

    @property
    def padded_cutoffs(self) -> Cutoffs:
        return self.cutoffs.grown(self.reach.raise_a, self.reach.raise_b)

    @functools.cached_property
    def padded(self) -> SparseMatrix:
        """the matrix rebuilt on :attr:`padded_cutoffs`"""
        return sp.csr_matrix(self.builder(*self.padded_cutoffs), dtype=np.complex128)

    def with_cutoffs(self, cutoff_a: int, cutoff_b: int) -> LadderPolynomial:
        return LadderPolynomial(
            self.builder, cutoff_a, cutoff_b, self.reach, self.hermitian, self.settings
        )

    def apply(self, state: TwoModeState) -> Applied:
        self.check_state(state)
        padded_a, padded_b = self.padded_cutoffs
        source = np.zeros((padded_a, padded_b), dtype=np.complex128)
        source[: self.cutoff_a, : self.cutoff_b] = state.coeffs
        image = (self.padded @ source.reshape(-1)).reshape(padded_a, padded_b)
        loss = (
            np.linalg.norm(image[self.cutoff_a :, :]) ** 2
            + np.linalg.norm(image[: self.cutoff_a, self.cutoff_b :]) ** 2
        )

        return Applied(
            TwoModeState(
                image[: self.cutoff_a, : self.cutoff_b], state.truncation_tolerance
            ),
            float(loss),
        )

    def exact_block(self) -> ComplexArray:
        """
        dense matrix elements ``<i|O|j>`` between basis states of the window,
        equal to those of the untruncated operator
        """

        if self.dimension > self.settings.dense_limit:
            raise ResourceError(self.dimension, self.settings.dense_limit)
        _, padded_b = self.padded_cutoffs
        indices = window_indices(self.cutoff_a, self.cutoff_b, padded_b)

        return self.padded[indices][:, indices].toarray()

    def as_hermitian(self) -> LadderPolynomial:
        """
        flag the operator as Hermitian after checking it

        :raise PrecisionError: when the Hermiticity defect is above tolerance
        """

        defect = self.hermiticity_defect()

        if defect > self.settings.hermiticity_tolerance:
            raise PrecisionError(
                defect, self.settings.hermiticity_tolerance, "operator is not Hermitian"
            )

        return LadderPolynomial(
            self.builder, self.cutoff_a, self.cutoff_b, self.reach, True, self.settings
        )

    def dag(self) -> LadderPolynomial:
        """the adjoint operator"""
        builder = self.builder

        def adjoint(cutoff_a: int, cutoff_b: int) -> SparseMatrix:
            return sp.csr_matrix(builder(cutoff_a, cutoff_b).conj().T)

        return LadderPolynomial(
            adjoint,
            self.cutoff_a,
            self.cutoff_b,
            self.reach.adjoint(),
            self.hermitian,
            self.settings,
        )

    def _compatible(self, other: LadderPolynomial) -> None:
        if not isinstance(other, LadderPolynomial):
            raise InvalidArgumentError(
                f"cannot combine a ladder polynomial with {other.__class__.__name__}"
            )
        if self.cutoffs != other.cutoffs:
            raise InvalidArgumentError(
                f"cutoff mismatch: {self.cutoffs} vs {other.cutoffs}"
            )

    def __matmul__(self, other: LadderPolynomial) -> LadderPolynomial:
        self._compatible(other)
        left, right = self.builder, other.builder

        def product(cutoff_a: int, cutoff_b: int) -> SparseMatrix:
            return sp.csr_matrix(left(cutoff_a, cutoff_b) @ right(cutoff_a, cutoff_b))

        return LadderPolynomial(
            product,
            self.cutoff_a,
            self.cutoff_b,
            self.reach.then(other.reach),
            self.hermitian and other is self,
            self.settings,
        )

    def __add__(self, other: LadderPolynomial) -> LadderPolynomial:
        self._compatible(other)
        left, right = self.builder, other.builder

        def total(cutoff_a: int, cutoff_b: int) -> SparseMatrix:
            return sp.csr_matrix(left(cutoff_a, cutoff_b) + right(cutoff_a, cutoff_b))

        return LadderPolynomial(
            total,
            self.cutoff_a,
            self.cutoff_b,
            self.reach.widest(other.reach),
            self.hermitian and other.hermitian,
            self.settings,
        )

    def __sub__(self, other: LadderPolynomial) -> LadderPolynomial:
        return self + (-1) * other

    def __neg__(self) -> LadderPolynomial:
        return (-1) * self

    def __mul__(self, scalar: Scalar) -> LadderPolynomial:
        if not isinstance(scalar, (int, float, complex, np.number)):
            return NotImplemented
        builder = self.builder

        def scaled(cutoff_a: int, cutoff_b: int) -> SparseMatrix:
            return sp.csr_matrix(builder(cutoff_a, cutoff_b) * scalar)

        return LadderPolynomial(
            scaled,
            self.cutoff_a,
            self.cutoff_b,
            self.reach,
            self.hermitian and complex(scalar).imag == 0,
            self.settings,
        )

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> LadderPolynomial:
        return self * (1 / scalar)


class ExponentialOperator(TwoModeOperator):
    """
    ``exp(G)`` for an anti-Hermitian ladder polynomial ``G``, i.e. a unitary
    such as a displacement or the two-mode squeezer.

    The generator is exponentiated on cutoffs enlarged by
    :attr:`Settings.expm_margin` and the result restricted to the window;
    the loss reported by :meth:`apply` is the norm deficit of the image.
    """

    def __init__(self, generator: LadderPolynomial, margin: Optional[int] = None):
        super().__init__(
            generator.cutoff_a, generator.cutoff_b, False, generator.settings
        )
        self.generator = generator
        self.margin = generator.settings.expm_margin if margin is None else margin
        defect = float(
            abs(generator.sparse + generator.sparse.conj().T).max()
            if generator.sparse.nnz
            else 0.0
        )

        if defect > 1e-10:
            raise InvalidArgumentError(
                f"generator must be anti-Hermitian (defect {defect:.2e})"
            )

    @property
    def padded_cutoffs(self) -> Cutoffs:
        return self.cutoffs.grown(self.margin, self.margin)

    @functools.cached_property
    def padded_generator(self) -> SparseMatrix:
        return self.generator.with_cutoffs(*self.padded_cutoffs).sparse

    @functools.cached_property
    def sparse(self) -> SparseMatrix:
        padded_a, padded_b = self.padded_cutoffs

        if padded_a * padded_b > self.settings.dense_limit:
            raise ResourceError(padded_a * padded_b, self.settings.dense_limit)
        indices = window_indices(self.cutoff_a, self.cutoff_b, padded_b)
        unitary = scipy.linalg.expm(self.padded_generator.toarray())

        return sp.csr_matrix(unitary[np.ix_(indices, indices)])

    def _propagate(self, columns: ComplexArray) -> ComplexArray:
        return expm_multiply(self.padded_generator, columns)

    def apply(self, state: TwoModeState) -> Applied:
        self.check_state(state)
        padded_a, padded_b = self.padded_cutoffs
        source = np.zeros((padded_a, padded_b), dtype=np.complex128)
        source[: self.cutoff_a, : self.cutoff_b] = state.coeffs
        image = self._propagate(source.reshape(-1)).reshape(padded_a, padded_b)
        window = image[: self.cutoff_a, : self.cutoff_b]
        loss = max(0.0, state.norm() ** 2 - float(np.linalg.norm(window)) ** 2)

        return Applied(TwoModeState(window, state.truncation_tolerance), loss)

    def unitarity_defect(self, block_a: int, block_b: int) -> float:
        """
        :return: ``max|(U^dagger U)_{ij} - delta_ij|`` over basis states
         ``|i>, |j>`` with ``n_A < block_a`` and ``n_B < block_b``
        """

        padded_a, padded_b = self.padded_cutoffs
        block_a, block_b = min(block_a, self.cutoff_a), min(block_b, self.cutoff_b)
        sources = window_indices(block_a, block_b, padded_b)
        columns = np.zeros((padded_a * padded_b, sources.size), dtype=np.complex128)
        columns[sources, np.arange(sources.size)] = 1
        images = self._propagate(columns)
        inside = images[window_indices(self.cutoff_a, self.cutoff_b, padded_b)]
        gram = inside.conj().T @ inside

        return float(np.max(np.abs(gram - np.eye(sources.size))))


def _single_mode(kind: str, cutoff: int) -> SparseMatrix:
    ladder = np.sqrt(np.arange(1, cutoff, dtype=np.float64))

    if kind == "annihilate":
        return sp.diags(ladder, 1, (cutoff, cutoff))
    if kind == "create":
        return sp.diags(ladder, -1, (cutoff, cutoff))
    if kind == "number":
        return sp.diags(np.arange(cutoff, dtype=np.float64), 0, (cutoff, cutoff))

    return sp.identity(cutoff, format="csr")


def annihilation_single(cutoff: int) -> np.ndarray:
    """
    the single mode annihilation operator, ``M[n - 1][n] = sqrt(n)``

    :raise InvalidArgumentError: if ``cutoff < 1``
    """

    return _single_mode("annihilate", check_cutoff(cutoff)).toarray()


def creation_single(cutoff: int) -> np.ndarray:
    return annihilation_single(cutoff).T


def number_single(cutoff: int) -> np.ndarray:
    return _single_mode("number", check_cutoff(cutoff)).toarray()


def _kron(mode: Mode, single: Any, cutoff_a: int, cutoff_b: int) -> SparseMatrix:
    if mode == "A":
        return sp.kron(single, sp.identity(cutoff_b), format="csr")

    return sp.kron(sp.identity(cutoff_a), single, format="csr")


def _check_mode(mode: str) -> None:
    if mode not in ("A", "B"):
        raise InvalidArgumentError(f"mode must be 'A' or 'B', got {mode!r}")


def embed(
    mode: Mode,
    single_mode_matrix: Any,
    cutoff_a: int,
    cutoff_b: int,
    hermitian: bool = False,
    settings: Settings = DEFAULT_SETTINGS,
) -> MatrixOperator:
    """
    Embed a single mode matrix as ``M (x) 1`` (mode ``A``) or ``1 (x) M``
    (mode ``B``) in the flattened ``n_A * D_B + n_B`` convention.

    :raise InvalidArgumentError: if the matrix does not match the cutoff of
     the requested mode
    """

    _check_mode(mode)
    single = sp.csr_matrix(single_mode_matrix)
    cutoff = check_cutoff(cutoff_a if mode == "A" else cutoff_b)

    if single.shape != (cutoff, cutoff):
        raise InvalidArgumentError(
            f"single mode matrix of shape {single.shape} does not match "
            f"cutoff {cutoff} of mode {mode}"
        )

    return MatrixOperator(
        _kron(mode, single, cutoff_a, cutoff_b), cutoff_a, cutoff_b, hermitian, settings
    )


def _ladder(
    kind: str,
    mode: Mode,
    cutoff_a: int,
    cutoff_b: int,
    reach: Reach,
    hermitian: bool,
    settings: Settings,
) -> LadderPolynomial:
    _check_mode(mode)

    def builder(ca: int, cb: int) -> SparseMatrix:
        return _kron(mode, _single_mode(kind, ca if mode == "A" else cb), ca, cb)

    return LadderPolynomial(builder, cutoff_a, cutoff_b, reach, hermitian, settings)


def annihilation(
    mode: Mode, cutoff_a: int, cutoff_b: int, settings: Settings = DEFAULT_SETTINGS
) -> LadderPolynomial:
    """``a`` (mode ``A``) or ``b`` (mode ``B``)"""
    reach = Reach(lower_a=1) if mode == "A" else Reach(lower_b=1)

    return _ladder("annihilate", mode, cutoff_a, cutoff_b, reach, False, settings)


def creation(
    mode: Mode, cutoff_a: int, cutoff_b: int, settings: Settings = DEFAULT_SETTINGS
) -> LadderPolynomial:
    """``a^dagger`` (mode ``A``) or ``b^dagger`` (mode ``B``)"""
    reach = Reach(raise_a=1) if mode == "A" else Reach(raise_b=1)

    return _ladder("create", mode, cutoff_a, cutoff_b, reach, False, settings)


def number(
    mode: Mode, cutoff_a: int, cutoff_b: int, settings: Settings = DEFAULT_SETTINGS
) -> LadderPolynomial:
    """the number operator of one mode; exact on every truncation"""
    return _ladder("number", mode, cutoff_a, cutoff_b, Reach(), True, settings)


def identity_operator(
    cutoff_a: int, cutoff_b: int, settings: Settings = DEFAULT_SETTINGS
) -> LadderPolynomial:
    def builder(ca: int, cb: int) -> SparseMatrix:
        return sp.identity(ca * cb, dtype=np.complex128, format="csr")

    return LadderPolynomial(builder, cutoff_a, cutoff_b, Reach(), True, settings)


def quadrature(
    mode: Mode,
    which: Quadrature,
    cutoff_a: int,
    cutoff_b: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> LadderPolynomial:
    """
    ``x = (a + a^dagger)/sqrt(2)`` or ``p = (a - a^dagger)/(i sqrt(2))``
    """

    lower = annihilation(mode, cutoff_a, cutoff_b, settings)
    upper = creation(mode, cutoff_a, cutoff_b, settings)

    if which == "x":
        return ((lower + upper) / math.sqrt(2)).as_hermitian()
    if which == "p":
        return ((lower - upper) / (1j * math.sqrt(2))).as_hermitian()

    raise InvalidArgumentError(f"quadrature must be 'x' or 'p', got {which!r}")


def apply(op: TwoModeOperator, state: TwoModeState) -> Applied:
    """
    Apply ``op`` to ``state`` without normalizing

    :raise InvalidArgumentError: on a cutoff mismatch
    """

    return op.apply(state)


def expectation(op: TwoModeOperator, state: TwoModeState) -> complex:
    """
    ``<psi|O|psi> / <psi|psi>``

    :raise InvalidArgumentError: on a cutoff mismatch
    :raise PrecisionError: if a Hermitian operator yields an imaginary part
     above :attr:`Settings.imaginary_tolerance`
    """

    image = op.apply(state).state
    value = state.inner(image) / state.norm() ** 2

    if op.hermitian:
        tolerance = op.settings.imaginary_tolerance * max(1.0, abs(value.real))

        if abs(value.imag) > tolerance:
            raise PrecisionError(
                abs(value.imag), tolerance, "imaginary expectation of a Hermitian operator"
            )

    return value


def variance(op: TwoModeOperator, state: TwoModeState) -> float:
    """
    ``<O^2> - <O>^2`` for a Hermitian operator, with ``<O^2>`` taken as
    ``||O psi||^2`` including the part of the image outside the window.
    Negative values within the imaginary tolerance are clamped to zero.

    :raise InvalidArgumentError: for operators not flagged Hermitian
    :raise PrecisionError: for a variance below ``-imaginary_tolerance``
    """

    if not op.hermitian:
        raise InvalidArgumentError("variance requires a Hermitian operator")
    image, loss = op.apply(state)
    weight = state.norm() ** 2
    mean = (state.inner(image) / weight).real
    second = (image.norm() ** 2 + loss) / weight
    value = second - mean**2
    tolerance = op.settings.imaginary_tolerance * max(1.0, second)

    if value < -tolerance:
        raise PrecisionError(-value, tolerance, "negative variance")

    return max(0.0, float(value))
