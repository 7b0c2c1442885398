# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Report files: summary.csv, summary.svg, embedding CSVs and run.yaml.

The SVG is written by hand: two line charts, correlations per day on top and
absolute accuracies per day below. Every series is one <polyline> tagged with
a data-series attribute.
"""

import logging
import math
from pathlib import Path
from typing import Any
from xml.sax.saxutils import escape
import pandas as pd
import yaml

from emg_align.application.utils.diagnostics import Embedding2D
from emg_align.domain.entities.experiment_config import ExperimentConfig
from emg_align.domain.entities.reports import DayReport
from emg_align.domain.exceptions import IngestionError, ParameterError

logger = logging.getLogger(__name__)

SUMMARY_CSV = "summary.csv"
SUMMARY_SVG = "summary.svg"
RUN_META = "run.yaml"
FLOAT_FORMAT = "%.17g"

CORRELATION_SERIES = [
    ("mean_canonical_correlation_aligned", "aligned (CCA)", "#1f77b4"),
    ("mean_channelwise_correlation_unaligned", "unaligned (channel-wise)", "#d62728"),
    ("within_day_upper_bound", "within-day bound", "#7f7f7f"),
]
ACCURACY_SERIES = [
    ("acc_aligned", "aligned", "#1f77b4"),
    ("acc_unaligned", "unaligned", "#d62728"),
    ("acc_pooled", "pooled", "#2ca02c"),
]

CHART_WIDTH = 640
CHART_HEIGHT = 280
MARGIN = 50


def reports_frame(reports: list[DayReport]) -> pd.DataFrame:
    return pd.DataFrame([vars(r) for r in reports], columns=DayReport.field_names())


def write_summary_csv(reports: list[DayReport], path: Path) -> None:
    reports_frame(reports).to_csv(path, index=False, float_format=FLOAT_FORMAT)


def read_summary(path: Path) -> list[DayReport]:
    path = Path(path)
    if not path.exists():
        raise IngestionError("file not found", path=str(path))
    frame = pd.read_csv(path, dtype={"day_id": str})
    missing = [f for f in DayReport.field_names() if f not in frame.columns]
    if missing:
        raise IngestionError(f"missing columns {missing}", path=str(path))
    reports = []
    for row in frame.itertuples(index=False):
        values: dict[str, Any] = {f: float(getattr(row, f)) for f in DayReport.field_names() if f != "day_id"}
        reports.append(DayReport(day_id=str(row.day_id), **values))
    return reports


def _chart(
    reports: list[DayReport],
    series: list[tuple[str, str, str]],
    title: str,
    top: float,
    reference: float | None = None,
) -> list[str]:
    values = [[getattr(r, field) for r in reports] for field, _, _ in series]
    finite = [v for row in values for v in row if math.isfinite(v)]
    low = min(0.0, min(finite)) if finite else 0.0
    high = max(1.0, max(finite)) if finite else 1.0
    width = CHART_WIDTH - 2 * MARGIN
    height = CHART_HEIGHT - 2 * MARGIN
    count = len(reports)

    def x_of(i: int) -> float:
        return MARGIN + (width * i / (count - 1) if count > 1 else width / 2)

    def y_of(v: float) -> float:
        return top + MARGIN + height * (high - v) / (high - low)

    out = [
        '<g class="chart">',
        f'<text x="{CHART_WIDTH / 2:.1f}" y="{top + 20:.1f}" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{y_of(low):.2f}" x2="{MARGIN + width}" y2="{y_of(low):.2f}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{y_of(low):.2f}" x2="{MARGIN}" y2="{y_of(high):.2f}" stroke="black"/>',
    ]
    for tick in (low, (low + high) / 2, high):
        out.append(f'<text x="{MARGIN - 6}" y="{y_of(tick) + 4:.2f}" text-anchor="end" font-size="10">{tick:.2f}</text>')
    for i, report in enumerate(reports):
        out.append(f'<text x="{x_of(i):.2f}" y="{y_of(low) + 16:.2f}" text-anchor="middle" font-size="10">{escape(report.day_id)}</text>')
    if reference is not None and math.isfinite(reference):
        out.append(
            f'<line x1="{MARGIN}" y1="{y_of(reference):.2f}" x2="{MARGIN + width}" y2="{y_of(reference):.2f}" '
            f'stroke="#999999" stroke-dasharray="4 3"/>'
        )
    for (field, label, color), row in zip(series, values):
        points = " ".join(f"{x_of(i):.2f},{y_of(v):.2f}" for i, v in enumerate(row) if math.isfinite(v))
        out.append(f'<polyline data-series="{field}" fill="none" stroke="{color}" stroke-width="2" points="{points}"/>')
    for k, (_, label, color) in enumerate(series):
        y = top + MARGIN + 14 * k
        out.append(f'<text x="{MARGIN + width - 150}" y="{y:.1f}" font-size="10" fill="{color}">{escape(label)}</text>')
    out.append("</g>")
    return out


def render_svg(reports: list[DayReport]) -> str:
    total_height = 2 * CHART_HEIGHT
    reference = reports[0].acc_reference if reports else None
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CHART_WIDTH}" height="{total_height}" '
        f'viewBox="0 0 {CHART_WIDTH} {total_height}">',
        *_chart(reports, CORRELATION_SERIES, "Correlation across days", 0.0),
        *_chart(reports, ACCURACY_SERIES, "Classification accuracy", float(CHART_HEIGHT), reference),
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


def write_summary_svg(reports: list[DayReport], path: Path) -> None:
    path.write_text(render_svg(reports))


def emit_report(reports: list[DayReport], out_dir: Path) -> list[Path]:
    """summary.csv and summary.svg; returns the written paths"""
    if not reports:
        raise ParameterError("no day reports to emit")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / SUMMARY_CSV
    svg_path = out_dir / SUMMARY_SVG
    write_summary_csv(reports, csv_path)
    write_summary_svg(reports, svg_path)
    logger.info(f"Report written to {out_dir} ({len(reports)} days)")
    return [csv_path, svg_path]


def write_embedding(embedding: Embedding2D, path: Path) -> None:
    """Columns source, x, y, label"""
    frame = pd.DataFrame({
        "source": embedding.source,
        "x": embedding.x,
        "y": embedding.y,
        "label": embedding.label,
    })
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


def write_run_metadata(config: ExperimentConfig, out_dir: Path, extra: dict[str, Any] | None = None) -> Path:
    """Config and every seed used, next to summary.csv"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    meta: dict[str, Any] = {
        "config": config.model_dump(mode="json"),
        "seeds": {
            "experiment": config.seed,
            "svm": config.svm.seed,
            "days": {str(d): config.seed + d for d in range(2, config.days + 1)},
        },
    }
    if extra:
        meta.update(extra)
    path = out_dir / RUN_META
    with open(path, "w") as file_handle:
        yaml.safe_dump(meta, file_handle, sort_keys=False)
    return path
