from __future__ import annotations

import json
from xml.sax.saxutils import escape

from ..errors import InvalidArgumentError
from ..typing import Any, Dict, List, Sequence, Tuple
from .base import Plot, Report, ReportWriter, plain

WIDTH, HEIGHT, MARGIN = 640, 420, 56
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
#: viridis anchors for the heatmap
RAMP = [(68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37)]


def _colour(fraction: float) -> str:
    fraction = min(max(fraction, 0.0), 1.0) * (len(RAMP) - 1)
    low = min(int(fraction), len(RAMP) - 2)
    weight = fraction - low
    rgb = (
        round(a + (b - a) * weight) for a, b in zip(RAMP[low], RAMP[low + 1])
    )

    return "#%02x%02x%02x" % tuple(rgb)


def _fmt(value: float) -> str:
    return format(value, ".2f")


def _scale(values: Sequence[float], low: float, high: float) -> Tuple[float, float]:
    lo, hi = min(values), max(values)

    if hi == lo:
        hi = lo + 1.0

    return lo, (high - low) / (hi - lo)


class SvgWriter(ReportWriter):
    """
    Static plots emitted as plain SVG primitives. The report metadata is
    embedded as JSON inside a ``<metadata>`` element.
    """

    OUTPUT_FORMAT = "svg"
    EXTENSION = ".svg"

    def render(self, report: Report) -> str:
        self._require_table(report)

        if report.plot is None:
            raise InvalidArgumentError(f"'{report.name}' has no plot description")
        plot = report.plot

        if plot.kind == "lines":
            body = self._lines(report, plot)
        elif plot.kind == "heatmap":
            body = self._heatmap(report, plot)
        else:
            raise InvalidArgumentError(f"unknown plot kind {plot.kind!r}")
        metadata = escape(json.dumps(plain(report.metadata), sort_keys=True))
        title = escape(plot.title or report.name)
        lines = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f"<metadata>{metadata}</metadata>",
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2}" y="{MARGIN / 2}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>',
            *body,
            "</svg>",
        ]

        return "\n".join(lines) + "\n"

    def _axes(
        self,
        x_label: str,
        y_label: str,
        x_range: Tuple[float, float],
        y_range: Tuple[float, float],
    ) -> List[str]:
        left, bottom = MARGIN, HEIGHT - MARGIN
        right, top = WIDTH - MARGIN / 2, MARGIN

        return [
            f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
            f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>',
            f'<text x="{(left + right) / 2}" y="{HEIGHT - 12}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{escape(x_label)}</text>',
            f'<text x="14" y="{(top + bottom) / 2}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 14 {(top + bottom) / 2})">{escape(y_label)}</text>',
            f'<text x="{left}" y="{bottom + 16}" font-family="sans-serif" '
            f'font-size="10">{x_range[0]:g}</text>',
            f'<text x="{right}" y="{bottom + 16}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{x_range[1]:g}</text>',
            f'<text x="{left - 4}" y="{bottom}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{y_range[0]:.3g}</text>',
            f'<text x="{left - 4}" y="{top + 8}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{y_range[1]:.3g}</text>',
        ]

    def _lines(self, report: Report, plot: Plot) -> List[str]:
        xs = [float(v) for v in report.column(plot.x)]
        groups = report.column(plot.group) if plot.group else [None] * len(xs)
        ys = [
            float(v) + plot.offsets.get(group, 0.0)
            for v, group in zip(report.column(plot.y), groups)
        ]
        series: Dict[Any, List[Tuple[float, float]]] = {}

        for x, y, group in zip(xs, ys, groups):
            series.setdefault(group, []).append((x, y))
        x0, x_scale = _scale(xs, MARGIN, WIDTH - MARGIN / 2)
        y0, y_scale = _scale(ys, 0, HEIGHT - 2 * MARGIN)
        bottom = HEIGHT - MARGIN
        body = self._axes(plot.x, plot.y, (min(xs), max(xs)), (min(ys), max(ys)))

        for index, (group, points) in enumerate(series.items()):
            colour = PALETTE[index % len(PALETTE)]
            path = " ".join(
                f"{_fmt(MARGIN + (x - x0) * x_scale)},{_fmt(bottom - (y - y0) * y_scale)}"
                for x, y in points
            )
            body.append(
                f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{path}"/>'
            )

            if group is not None:
                body.append(
                    f'<text x="{WIDTH - MARGIN / 2}" y="{MARGIN + 14 * (index + 1)}" '
                    f'text-anchor="end" font-family="sans-serif" font-size="11" '
                    f'fill="{colour}">{escape(f"{plot.group}={group}")}</text>'
                )

        return body

    def _heatmap(self, report: Report, plot: Plot) -> List[str]:
        if plot.value is None:
            raise InvalidArgumentError("a heatmap needs a value column")
        xs = [int(v) for v in report.column(plot.x)]
        ys = [int(v) for v in report.column(plot.y)]
        values = [float(v) for v in report.column(plot.value)]
        columns, rows = max(xs) + 1, max(ys) + 1
        cell_w = (WIDTH - 1.5 * MARGIN) / columns
        cell_h = (HEIGHT - 2 * MARGIN) / rows
        low, span = min(values), (max(values) - min(values)) or 1.0
        bottom = HEIGHT - MARGIN
        body = self._axes(plot.x, plot.y, (0, columns - 1), (0, rows - 1))

        for x, y, value in zip(xs, ys, values):
            body.append(
                f'<rect x="{_fmt(MARGIN + x * cell_w)}" y="{_fmt(bottom - (y + 1) * cell_h)}" '
                f'width="{_fmt(cell_w)}" height="{_fmt(cell_h)}" '
                f'fill="{_colour((value - low) / span)}"><title>{plot.x}={x} {plot.y}={y} '
                f"{plot.value}={value:.6g}</title></rect>"
            )

        return body
