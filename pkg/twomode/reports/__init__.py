"""
Output formats for the command line reports
"""

from ..errors import ConfigurationError
from ..typing import Any
from .base import Plot, Report, ReportWriter
from .csv import CsvWriter
from .json import JsonWriter
from .registry import FORMATS
from .svg import SvgWriter


def writer_from_string(format_string: str, **options: Any) -> ReportWriter:
    """
    Factory function to get a report writer for an output format name.
    for example::

        from twomode.reports import writer_from_string

        csv = writer_from_string("csv")
        svg = writer_from_string("svg", wrap_exceptions=True)

    :param format_string: one of the registered formats (``csv``, ``json``,
     ``svg``)
    :param options: all remaining keyword arguments are passed to the
     constructor of the writer class
    :raises ConfigurationError: when the format is not registered
    """

    name = format_string.strip().lower()

    if name not in FORMATS:
        raise ConfigurationError("unknown output format : %s" % format_string)

    return FORMATS[name](**options)


__all__ = [
    "writer_from_string",
    "CsvWriter",
    "JsonWriter",
    "Plot",
    "Report",
    "ReportWriter",
    "SvgWriter",
]
