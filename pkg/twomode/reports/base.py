from __future__ import annotations

import dataclasses
import functools
import io
import math
import os
from abc import abstractmethod

from ..errors import InvalidArgumentError, ReportError
from ..typing import (
    Any,
    Callable,
    ClassVar,
    Dict,
    List,
    Literal,
    Optional,
    R,
    Sequence,
    Tuple,
    Type,
    Union,
)
from .registry import FormatRegistry

Destination = Union[str, "os.PathLike[str]", io.TextIOBase]


@dataclasses.dataclass(frozen=True)
class Plot:
    """
    How the SVG writer draws a table.

    ``lines`` draws ``y`` against ``x`` with one polyline per value of
    ``group``, shifted by ``offsets[group]`` (a presentation offset only);
    ``heatmap`` colours the ``(x, y)`` cells by ``value``.
    """

    kind: Literal["lines", "heatmap"]
    x: str
    y: str
    group: Optional[str] = None
    value: Optional[str] = None
    offsets: Dict[Any, float] = dataclasses.field(default_factory=dict)
    title: str = ""


@dataclasses.dataclass
class Report:
    """
    Output of one command: a table (``columns`` and ``rows``) and/or a JSON
    ``document``, plus the ``metadata`` header written by every format
    (version, configuration echo, cutoffs, truncation loss).
    """

    name: str
    metadata: Dict[str, Any]
    columns: List[str] = dataclasses.field(default_factory=list)
    rows: List[Sequence[Any]] = dataclasses.field(default_factory=list)
    document: Optional[Dict[str, Any]] = None
    plot: Optional[Plot] = None

    @property
    def tabular(self) -> bool:
        return bool(self.columns)

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)

        return [row[index] for row in self.rows]


def _wrap_errors(writer: ReportWriter, fn: Callable[..., R]) -> Callable[..., R]:
    @functools.wraps(fn)
    def inner(*args: Any, **kwargs: Any) -> R:
        try:
            return fn(*args, **kwargs)
        except writer.base_exceptions as exc:
            if writer.wrap_exceptions:
                raise ReportError(exc) from exc
            raise

    return inner


class ReportWriter(metaclass=FormatRegistry):
    """
    Base class to extend when implementing an output format.
    """

    OUTPUT_FORMAT: ClassVar[Optional[str]] = None
    """The format name to register against this implementation"""

    EXTENSION: ClassVar[str] = ""
    """File suffix selecting this format when ``--format`` is not given"""

    def __new__(cls, *args: Any, **kwargs: Any) -> ReportWriter:
        inst = super().__new__(cls)
        setattr(inst, "write", _wrap_errors(inst, inst.write))

        return inst

    def __init__(self, wrap_exceptions: bool = False, **options: Any):
        """
        :param wrap_exceptions: Whether to wrap output failures in
         :exc:`twomode.errors.ReportError` before raising it.
        """

        self.wrap_exceptions = wrap_exceptions
        self.options = options

    @property
    def base_exceptions(self) -> Union[Type[Exception], Tuple[Type[Exception], ...]]:
        return OSError

    @abstractmethod
    def render(self, report: Report) -> str:
        """
        :return: the complete file contents for ``report``
        :raise InvalidArgumentError: if the format cannot express the report
        """
        raise NotImplementedError

    def write(self, report: Report, destination: Destination) -> None:
        """
        write the rendered report to a path or an open text stream
        """

        content = self.render(report)

        if isinstance(destination, io.TextIOBase):
            destination.write(content)
        else:
            with open(destination, "w", encoding="utf-8", newline="") as handle:
                handle.write(content)

    def _require_table(self, report: Report) -> None:
        if not report.tabular:
            raise InvalidArgumentError(
                f"the {self.OUTPUT_FORMAT} format needs tabular data; "
                f"'{report.name}' only has a document"
            )


def number(value: Any) -> Any:
    """floats with round-trip precision, everything else unchanged"""
    if isinstance(value, float):
        return format(value, ".17g")

    return value


def plain(value: Any) -> Any:
    """numpy scalars and non-finite floats made JSON safe"""
    if hasattr(value, "item") and not isinstance(value, (dict, list, tuple)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]

    return value
