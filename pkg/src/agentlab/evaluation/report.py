"""Human-readable and JSON benchmark reports."""

from __future__ import annotations

import json
from collections.abc import Sequence
from pathlib import Path

from agentlab.evaluation.metrics import AggregateReport

LEVELS = (1, 2, 3)


def format_table(reports: Sequence[AggregateReport]) -> str:
    """Fixed-width table: one row per metric, columns Average and Level 1..3."""
    header = ["Metric", "Average", *(f"Level {lv}" for lv in LEVELS)]
    rows = []
    for rep in reports:
        cells = [rep.label, f"{rep.average:.2f}"]
        for lv in LEVELS:
            cells.append(f"{rep.per_level[lv]:.2f}" if lv in rep.per_level else "-")
        rows.append(cells)
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]

    def line(cells: list[str]) -> str:
        first = cells[0].ljust(widths[0])
        rest = (c.rjust(w) for c, w in zip(cells[1:], widths[1:]))
        return "  ".join([first, *rest]).rstrip()

    out = [line(header), "  ".join("-" * w for w in widths)]
    out.extend(line(r) for r in rows)
    return "\n".join(out) + "\n"


def format_counts(report: AggregateReport) -> str:
    parts = [f"level {lv}: {n}" for lv, n in sorted(report.counts.items())]
    return f"questions: {report.n_questions} ({', '.join(parts)})"


def report_dict(primary: AggregateReport, reports: Sequence[AggregateReport], info: dict) -> dict:
    return {"info": info, "primary": primary.to_dict(), "metrics": [r.to_dict() for r in reports]}


def write_report(
    out_dir: str | Path, primary: AggregateReport, reports: Sequence[AggregateReport], info: dict
) -> None:
    out = Path(out_dir)
    payload = report_dict(primary, reports, info)
    (out / "report.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    text = f"primary: {primary.label}\n{format_counts(primary)}\n\n{format_table(reports)}"
    (out / "report.txt").write_text(text, encoding="utf-8")
