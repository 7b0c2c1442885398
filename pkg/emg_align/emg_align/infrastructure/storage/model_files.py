# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Model and mapping files.

Both are long-format CSV tables with columns block,row,col,value: every named
array is stored entry by entry, scalars as 1 x 1 blocks. Values use 17
significant digits so a reload reproduces the float64 arrays exactly.
"""

import logging
from pathlib import Path
import numpy as np
import numpy.typing as npt
import pandas as pd

from emg_align.domain.entities.alignment import CcaMapping
from emg_align.domain.entities.classifier import SvmModel
from emg_align.domain.exceptions import IngestionError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
COLUMNS = ["block", "row", "col", "value"]


def _to_frame(blocks: dict[str, npt.ArrayLike]) -> pd.DataFrame:
    parts = []
    for name, values in blocks.items():
        matrix = np.atleast_2d(np.asarray(values, dtype=np.float64))
        rows, cols = np.indices(matrix.shape)
        parts.append(pd.DataFrame({
            "block": name,
            "row": rows.reshape(-1),
            "col": cols.reshape(-1),
            "value": matrix.reshape(-1),
        }))
    return pd.concat(parts, ignore_index=True)


def _from_frame(frame: pd.DataFrame, required: list[str], path: Path) -> dict[str, np.ndarray]:
    missing_columns = [c for c in COLUMNS if c not in frame.columns]
    if missing_columns:
        raise IngestionError(f"missing columns {missing_columns}", path=str(path))
    blocks: dict[str, np.ndarray] = {}
    for name, group in frame.groupby("block", sort=False):
        shape = (int(group["row"].max()) + 1, int(group["col"].max()) + 1)
        matrix = np.full(shape, np.nan)
        matrix[group["row"].to_numpy(dtype=np.int64), group["col"].to_numpy(dtype=np.int64)] = group["value"].to_numpy(dtype=np.float64)
        if not np.all(np.isfinite(matrix)):
            raise IngestionError(f"block {name} is incomplete or not finite", path=str(path))
        blocks[str(name)] = matrix
    missing = [b for b in required if b not in blocks]
    if missing:
        raise IngestionError(f"missing blocks {missing}", path=str(path))
    return blocks


def _read(path: Path, required: list[str]) -> dict[str, np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise IngestionError("file not found", path=str(path))
    return _from_frame(pd.read_csv(path), required, path)


def _write(blocks: dict[str, npt.ArrayLike], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _to_frame(blocks).to_csv(path, index=False, float_format=FLOAT_FORMAT)


def save_mapping(mapping: CcaMapping, path: Path) -> None:
    _write({
        "a": mapping.a,
        "b": mapping.b,
        "correlations": mapping.correlations,
        "mean_ref": mapping.mean_ref,
        "mean_new": mapping.mean_new,
        "ridge": mapping.ridge,
        "centered": float(mapping.centered),
    }, path)
    logger.info(f"Saved CCA mapping to {path}")


def load_mapping(path: Path) -> CcaMapping:
    blocks = _read(path, ["a", "b", "correlations", "mean_ref", "mean_new", "ridge", "centered"])
    return CcaMapping(
        a=blocks["a"],
        b=blocks["b"],
        correlations=blocks["correlations"].reshape(-1),
        mean_ref=blocks["mean_ref"].reshape(-1),
        mean_new=blocks["mean_new"].reshape(-1),
        ridge=float(blocks["ridge"][0, 0]),
        centered=bool(blocks["centered"][0, 0]),
    )


def save_model(model: SvmModel, path: Path) -> None:
    _write({
        "weights": model.weights,
        "biases": model.biases,
        "classes": np.asarray(model.classes, dtype=np.float64),
        "feature_means": model.feature_means,
        "feature_scales": model.feature_scales,
        "reg_c": model.reg_c,
        "seed": float(model.seed),
        "epochs": float(model.epochs),
    }, path)
    logger.info(f"Saved SVM model to {path}")


def load_model(path: Path) -> SvmModel:
    blocks = _read(path, ["weights", "biases", "classes", "feature_means", "feature_scales", "reg_c"])
    return SvmModel(
        weights=blocks["weights"],
        biases=blocks["biases"].reshape(-1),
        reg_c=float(blocks["reg_c"][0, 0]),
        classes=tuple(int(c) for c in blocks["classes"].reshape(-1)),
        feature_means=blocks["feature_means"].reshape(-1),
        feature_scales=blocks["feature_scales"].reshape(-1),
        seed=int(blocks["seed"][0, 0]) if "seed" in blocks else 42,
        epochs=int(blocks["epochs"][0, 0]) if "epochs" in blocks else 200,
    )
