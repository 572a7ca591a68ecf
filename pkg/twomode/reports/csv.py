from __future__ import annotations

import csv
import io
import json

from .base import Report, ReportWriter, number, plain


class CsvWriter(ReportWriter):
    """
    Comma separated rows preceded by ``# key: value`` comment lines holding
    the report metadata (JSON encoded values)
    """

    OUTPUT_FORMAT = "csv"
    EXTENSION = ".csv"

    def render(self, report: Report) -> str:
        self._require_table(report)
        buffer = io.StringIO()

        for key, value in report.metadata.items():
            buffer.write(f"# {key}: {json.dumps(plain(value), sort_keys=True)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(report.columns)
        writer.writerows([number(value) for value in row] for row in report.rows)

        return buffer.getvalue()
