"""
Output formats register themselves when their writer class is created
"""

from __future__ import annotations

import os
from abc import ABCMeta

from ..errors import ConfigurationError
from ..typing import Any, Dict, Optional, Tuple

#: writer class per format name
FORMATS: Dict[str, FormatRegistry] = {}
#: format name per file suffix (``.csv`` -> ``csv``)
SUFFIXES: Dict[str, str] = {}


class FormatRegistry(ABCMeta):
    """
    Metaclass of the report writers. A class body declaring
    ``OUTPUT_FORMAT`` claims that (lower case) format name and the file
    suffix in ``EXTENSION``, which defaults to ``.<format>``.
    """

    def __new__(
        mcs, name: str, bases: Tuple[type, ...], dct: Dict[str, Any]
    ) -> FormatRegistry:
        output_format: Optional[str] = dct.get("OUTPUT_FORMAT")
        cls = super().__new__(mcs, name, bases, dct)

        if not output_format:
            return cls
        key = output_format.lower()

        if key in FORMATS and FORMATS[key].__qualname__ != cls.__qualname__:
            raise ConfigurationError(
                f"format {key!r} is already written by {FORMATS[key].__qualname__}"
            )
        FORMATS[key] = cls
        SUFFIXES[(dct.get("EXTENSION") or f".{key}").lower()] = key

        return cls


def format_for_path(path: str) -> Optional[str]:
    """
    the format registered for the suffix of ``path``, or ``None`` for
    stdout (``-``) and unknown suffixes
    """

    if path == "-":
        return None

    return SUFFIXES.get(os.path.splitext(path)[1].lower())
