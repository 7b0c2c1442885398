# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Experiment configuration and dataset manifest loader.
Reads YAML files into the pydantic models of the domain layer.
"""

import logging
from pathlib import Path
from typing import Any, Optional
import yaml
from pydantic import BaseModel, ValidationError

import emg_align
from emg_align.domain.entities.experiment_config import DatasetManifest, ExperimentConfig
from emg_align.domain.exceptions import ConfigError

try:
    from ament_index_python.packages import get_package_share_directory  # pyright: ignore[reportMissingImports]
except ImportError:
    get_package_share_directory = lambda _: str(Path(emg_align.__file__).parent.parent)

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_NAME = "experiment.yaml"


def default_config_path(package_name: str = "emg_align") -> Path:
    """Shipped experiment.yaml"""
    return Path(get_package_share_directory(package_name)) / "config" / DEFAULT_CONFIG_NAME


def _read_yaml(path: Path) -> dict[str, Any]:
    if not path.exists():
        raise ConfigError(f"configuration file not found: {path}")
    try:
        with open(path, "r") as file_handle:
            data = yaml.safe_load(file_handle)
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at top level, got {type(data).__name__}")
    return data


def _validate(model: type[BaseModel], data: dict[str, Any], origin: str) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{origin}: {e}") from e


def load_experiment_config(path: Optional[Path] = None) -> ExperimentConfig:
    """Experiment configuration from YAML; built-in defaults when no file is given"""
    if path is None:
        shipped = default_config_path()
        if not shipped.exists():
            logger.info("No experiment configuration file, using defaults")
            return ExperimentConfig()
        path = shipped
    logger.info(f"Loading experiment configuration from file: {path}")
    return _validate(ExperimentConfig, _read_yaml(Path(path)), str(path))


def apply_overrides(config: ExperimentConfig, overrides: dict[str, Any]) -> ExperimentConfig:
    """
    New config with dotted-key overrides applied, e.g. {"drift.magnitude": 0.5}.
    None values are skipped so unset CLI flags keep file values.
    """
    data = config.model_dump()
    for key, value in overrides.items():
        if value is None:
            continue
        target = data
        parts = key.split(".")
        for part in parts[:-1]:
            if part not in target or not isinstance(target[part], dict):
                raise ConfigError(f"unknown configuration section '{part}' in override '{key}'")
            target = target[part]
        if parts[-1] not in target:
            raise ConfigError(f"unknown configuration key '{key}'")
        target[parts[-1]] = value
    return _validate(ExperimentConfig, data, "overrides")


def load_manifest(path: Path) -> DatasetManifest:
    """Dataset manifest; session directories resolve against the manifest's folder"""
    path = Path(path)
    logger.info(f"Loading dataset manifest from file: {path}")
    data = _read_yaml(path)
    root = Path(data.get("root", "."))
    data["root"] = str(root if root.is_absolute() else path.parent / root)
    return _validate(DatasetManifest, data, str(path))


def write_manifest(manifest: DatasetManifest, path: Path) -> None:
    """Manifest as YAML, root omitted so the file stays relocatable"""
    data = manifest.model_dump(mode="json", exclude={"root"})
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as file_handle:
        yaml.safe_dump(data, file_handle, sort_keys=False)
