from __future__ import annotations

import json

from .base import Report, ReportWriter, plain


class JsonWriter(ReportWriter):
    """
    A single JSON object: ``metadata`` plus the document and/or the table as
    a list of row objects
    """

    OUTPUT_FORMAT = "json"
    EXTENSION = ".json"

    def render(self, report: Report) -> str:
        payload: dict = {"report": report.name, "metadata": report.metadata}

        if report.document is not None:
            payload.update(report.document)
        if report.tabular:
            payload["rows"] = [dict(zip(report.columns, row)) for row in report.rows]

        indent = self.options.get("indent", 2)

        return json.dumps(plain(payload), indent=indent, sort_keys=True) + "\n"
