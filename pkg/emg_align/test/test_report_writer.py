# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

import math
import re
import pandas as pd
import pytest
import yaml

from emg_align.domain.entities.experiment_config import ExperimentConfig
from emg_align.domain.entities.reports import DayReport
from emg_align.domain.exceptions import IngestionError, ParameterError
from emg_align.infrastructure.reporting.report_writer import (
    ACCURACY_SERIES,
    CORRELATION_SERIES,
    emit_report,
    read_summary,
    render_svg,
    write_run_metadata,
)


def _report(day_id: str, aligned: float = 0.9, pooled: float = 0.8) -> DayReport:
    return DayReport(
        day_id=day_id,
        mean_canonical_correlation_aligned=0.95,
        mean_channelwise_correlation_unaligned=0.4,
        correlation_gain=0.55,
        within_day_upper_bound=0.97,
        normalized_aligned_correlation=0.95 / 0.97,
        acc_unaligned=0.2,
        acc_aligned=aligned,
        acc_pooled=pooled,
        acc_reference=0.99,
        relative_accuracy=aligned / 0.99,
    )


def test_single_day_summary(tmp_path):
    csv_path, svg_path = emit_report([_report("2")], tmp_path)
    frame = pd.read_csv(csv_path, dtype={"day_id": str})
    assert list(frame.columns) == DayReport.field_names()
    assert len(frame) == 1
    assert read_summary(csv_path) == [_report("2")]
    assert svg_path.read_text().startswith("<svg")


def test_summary_reparses_exactly(tmp_path):
    reports = [_report(str(d), aligned=0.9 + d / 1000, pooled=1 / 3) for d in range(2, 11)]
    csv_path, _ = emit_report(reports, tmp_path)
    assert read_summary(csv_path) == reports


def test_nan_pooled_accuracy_survives(tmp_path):
    csv_path, svg_path = emit_report([_report("2", pooled=float("nan")), _report("3")], tmp_path)
    (first, second) = read_summary(csv_path)
    assert math.isnan(first.acc_pooled)
    assert second.acc_pooled == 0.8
    assert "NaN" not in svg_path.read_text()


def test_svg_draws_every_series():
    svg = render_svg([_report(str(d)) for d in range(2, 6)])
    series = re.findall(r'<polyline[^>]*data-series="([a-z_]+)"', svg)
    assert len(series) == 6
    assert {"acc_aligned", "acc_unaligned", "acc_pooled"} <= set(series)
    assert set(series) == {field for field, _, _ in CORRELATION_SERIES + ACCURACY_SERIES}
    assert "stroke-dasharray" in svg


def test_empty_report_is_rejected(tmp_path):
    with pytest.raises(ParameterError):
        emit_report([], tmp_path)


def test_summary_with_missing_columns(tmp_path):
    pd.DataFrame({"day_id": ["2"], "acc_aligned": [0.9]}).to_csv(tmp_path / "summary.csv", index=False)
    with pytest.raises(IngestionError, match="missing columns"):
        read_summary(tmp_path / "summary.csv")


def test_run_metadata_records_seeds(tmp_path):
    config = ExperimentConfig(days=4, seed=7)
    path = write_run_metadata(config, tmp_path, {"source": "simulated"})
    meta = yaml.safe_load(path.read_text())
    assert meta["seeds"]["experiment"] == 7
    assert meta["seeds"]["days"] == {"2": 9, "3": 10, "4": 11}
    assert meta["config"]["drift"]["kind"] == "rotation"
    assert meta["source"] == "simulated"
