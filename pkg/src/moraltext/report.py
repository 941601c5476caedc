"""Render correlation and F1 tables as markdown, CSV, and JSON.

Numbers are printed to three decimals with ties rounded away from zero,
matching the visible precision of the tables this layout mirrors. The
quantization runs on the shortest decimal repr of the float, so a value
that prints as 0.1505 rounds to 0.151 the way a reader would expect, not
down through its binary expansion. Stars mark significance bands (*** for
p < 0.001, * for p < 0.05); plain=True drops them for the bare layout.
Rendering is pure string work: identical inputs give identical bytes.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .dimensions import DIMENSIONS
from .errors import IncompleteMatrix
from .lexicon import SELECTED_CATEGORIES

UNDEFINED_CELL = "—"  # em dash, the conventional empty-cell marker

ROW_LABELS = {
    "positive emotion": "Pos. emotion",
    "negative emotion": "Neg. emotion",
    "anger": "Anger",
    "anxiety": "Anxiety",
    "sadness": "Sadness",
}

FORMATS = ("markdown", "csv", "json")


def format_number(value):
    """Three decimals, ties away from zero, '.' regardless of locale."""
    quantized = Decimal(repr(float(value))).quantize(Decimal("0.001"),
                                                     rounding=ROUND_HALF_UP)
    if quantized.is_zero():
        quantized = abs(quantized)  # never print -0.000
    return str(quantized)


def _check_format(fmt):
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")


def _check_complete(matrix):
    for category in SELECTED_CATEGORIES:
        for dim in DIMENSIONS:
            if (category, dim) not in matrix.cells:
                raise IncompleteMatrix(
                    f"matrix is missing cell ({category!r}, {dim.slug})")


def _correlation_cell_text(cell, plain):
    if cell.undefined:
        return UNDEFINED_CELL
    text = format_number(cell.r)
    if not plain:
        text += cell.stars
    return text


def _markdown_table(header, rows):
    """Pipe table with padded columns; width fixed by the widest cell."""
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = []
    lines.append("| " + " | ".join(h.ljust(w) for h, w in zip(header, widths)) + " |")
    lines.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
    for row in rows:
        lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
    return "\n".join(lines) + "\n"


def _csv_table(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def render_correlation(matrix, fmt="markdown", plain=False):
    """Emotion categories down the side, the ten dimensions across the top."""
    _check_format(fmt)
    _check_complete(matrix)
    if fmt == "json":
        payload = {"n": matrix.n, "rows": {}}
        for category in SELECTED_CATEGORIES:
            label = ROW_LABELS[category]
            row = {}
            for dim in DIMENSIONS:
                cell = matrix.cells[(category, dim)]
                if cell.undefined:
                    row[dim.slug] = {"undefined": True}
                else:
                    entry = {"r": float(format_number(cell.r)), "p": cell.p}
                    if not plain:
                        entry["stars"] = cell.stars
                    row[dim.slug] = entry
            payload["rows"][label] = row
        return json.dumps(payload, indent=2) + "\n"

    header = [""] + [dim.display_name for dim in DIMENSIONS]
    rows = []
    for category in SELECTED_CATEGORIES:
        cells = [_correlation_cell_text(matrix.cells[(category, dim)], plain)
                 for dim in DIMENSIONS]
        rows.append([ROW_LABELS[category]] + cells)
    if fmt == "markdown":
        return _markdown_table(header, rows)
    return _csv_table(["category"] + [dim.slug for dim in DIMENSIONS], rows)


def _f1_cell_text(ev):
    if ev.skipped or ev.mean_f1 is None:
        return UNDEFINED_CELL
    return format_number(ev.mean_f1)


def render_f1(reports, fmt="markdown"):
    """One row per corpus (sorted by name), mean F1 per dimension."""
    _check_format(fmt)
    names = sorted(reports)
    if fmt == "json":
        payload = {"rows": {}}
        for name in names:
            report = reports[name]
            row = {}
            for dim in DIMENSIONS:
                ev = report.per_dimension[dim]
                if ev.skipped or ev.mean_f1 is None:
                    row[dim.slug] = {"skipped": True}
                else:
                    row[dim.slug] = {"f1": float(format_number(ev.mean_f1))}
            payload["rows"][name] = row
        return json.dumps(payload, indent=2) + "\n"

    header = ["corpus"] + [dim.display_name for dim in DIMENSIONS]
    rows = []
    for name in names:
        report = reports[name]
        rows.append([name] + [_f1_cell_text(report.per_dimension[dim])
                              for dim in DIMENSIONS])
    if fmt == "markdown":
        return _markdown_table(header, rows)
    return _csv_table(["corpus"] + [dim.slug for dim in DIMENSIONS], rows)


def parse_starred_value(text):
    """Split a rendered cell like '0.600***' into (float, stars).

    Returns (None, '') for the undefined marker; the counterpart of the
    CSV renderer, used to check that formats agree numerically.
    """
    text = text.strip()
    if text == UNDEFINED_CELL:
        return None, ""
    stripped = text.rstrip("*")
    return float(stripped), text[len(stripped):]


@dataclass
class ReportBundle:
    """Everything one run emits: per-corpus correlations, F1, run metadata.

    run_meta holds only input-derived facts (config hash, per-corpus
    document counts, the corpus timestamp range) so a re-run writes
    identical bytes.
    """

    correlations: dict = field(default_factory=dict)  # corpus name -> matrix
    f1_reports: dict = field(default_factory=dict)    # corpus name -> EvalReport
    run_meta: dict = field(default_factory=dict)

    def write(self, outdir, plain=False):
        """Write every table in every format; returns the paths written."""
        outdir.mkdir(parents=True, exist_ok=True)
        paths = []
        suffix = {"markdown": "md", "csv": "csv", "json": "json"}
        for name in sorted(self.correlations):
            matrix = self.correlations[name]
            for fmt in FORMATS:
                path = outdir / f"correlations_{name}.{suffix[fmt]}"
                path.write_text(render_correlation(matrix, fmt, plain=plain),
                                encoding="utf-8")
                paths.append(path)
        if self.f1_reports:
            for fmt in FORMATS:
                path = outdir / f"f1.{suffix[fmt]}"
                path.write_text(render_f1(self.f1_reports, fmt), encoding="utf-8")
                paths.append(path)
        meta_path = outdir / "run_meta.json"
        meta_path.write_text(json.dumps(self.run_meta, indent=2, sort_keys=True) + "\n",
                             encoding="utf-8")
        paths.append(meta_path)
        return paths
