from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Type,
    TypeVar,
    Union,
)

import numpy as np
import numpy.typing as npt
from typing_extensions import ClassVar, Literal, Protocol, TypeAlias

if TYPE_CHECKING:
    import scipy.sparse

Mode: TypeAlias = Literal["A", "B"]
Quadrature: TypeAlias = Literal["x", "p"]

ComplexArray: TypeAlias = "npt.NDArray[np.complex128]"
RealArray: TypeAlias = "npt.NDArray[np.float64]"
SparseMatrix: TypeAlias = "scipy.sparse.csr_matrix"
OperatorMatrix = Union[ComplexArray, SparseMatrix]

R = TypeVar("R")


class MatrixBuilder(Protocol):
    def __call__(self, cutoff_a: int, cutoff_b: int) -> SparseMatrix: ...


__all__ = [
    "Any",
    "Callable",
    "ClassVar",
    "ComplexArray",
    "Dict",
    "Iterable",
    "Iterator",
    "List",
    "Literal",
    "MatrixBuilder",
    "Mode",
    "NamedTuple",
    "OperatorMatrix",
    "Optional",
    "Protocol",
    "Quadrature",
    "R",
    "RealArray",
    "Sequence",
    "SparseMatrix",
    "Tuple",
    "Type",
    "TypeAlias",
    "TypeVar",
    "Union",
]
