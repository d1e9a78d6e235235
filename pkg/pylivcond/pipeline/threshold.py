"""Score distribution and calibrated living-conditions threshold.

Writes the ``threshold/`` artifact directory: ``distribution.csv`` (score, percent,
descending and ascending cumulative percents) and ``threshold.json``.
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

import yaml

from pylivcond.constants import REFERENCE_POVERTY_RATE, SCORE_DISTRIBUTION
from pylivcond.profiling import poverty_flags
from pylivcond.scores import (
    ScoreDistribution,
    calibrate_threshold,
    distribution,
    distribution_from_weights,
)
from pylivcond.survey_data import Dataset

from ._artifacts import (
    artifact_dir,
    record_run,
    write_csv,
    write_json,
    write_metadata,
)
from ._inputs import load_configured_dataset
from .config import PipelineConfig

__all__ = ["cmd_threshold", "configured_distribution", "target_rate"]

log = logging.getLogger(__name__)


def _weights_file(path: str) -> ScoreDistribution:
    """Read a YAML mapping ``weights: {score: weight}`` (and optional ``max_score``)."""
    with Path(path).open("r") as file:
        try:
            content = yaml.safe_load(file)
        except yaml.YAMLError as e:
            raise ValueError(f"Cannot parse {path}: {e}") from e
    if not isinstance(content, dict) or "weights" not in content:
        raise ValueError(f"{path} must hold a 'weights' mapping.")
    weights = {int(k): v for k, v in content["weights"].items()}
    return distribution_from_weights(weights, content.get("max_score", 26))


def configured_distribution(
    config: PipelineConfig, dataset: Optional[Dataset] = None
) -> Tuple[ScoreDistribution, str]:
    """The score distribution selected by ``threshold.distribution`` and its source."""
    source = config.threshold.distribution
    if source == "reference":
        return distribution_from_weights(SCORE_DISTRIBUTION), source
    if source != "data":
        return _weights_file(source), source
    dataset = load_configured_dataset(config) if dataset is None else dataset
    return distribution(dataset), source


def target_rate(
    config: PipelineConfig, dataset: Optional[Dataset] = None
) -> Tuple[float, str]:
    """The target rate (%) and its source: fixed, reference, or computed from data."""
    rate = config.threshold.target_rate
    if rate != "computed":
        return float(rate), "fixed"
    if config.threshold.distribution == "reference":
        return REFERENCE_POVERTY_RATE, "reference"
    dataset = load_configured_dataset(config) if dataset is None else dataset
    _, computed = poverty_flags(dataset)
    return computed, "computed"


def cmd_threshold(config: PipelineConfig) -> Path:
    """Calibrate the threshold score on the configured distribution and rate.

    Returns
    -------
    directory : Path
        The ``threshold`` artifact directory.
    """
    dataset = None
    if config.threshold.distribution == "data" or (
        config.threshold.target_rate == "computed"
        and config.threshold.distribution != "reference"
    ):
        dataset = load_configured_dataset(config)
    dist, source = configured_distribution(config, dataset)
    rate, rate_source = target_rate(config, dataset)
    threshold = calibrate_threshold(dist, rate)
    matched = dist.descending_at(threshold)

    with artifact_dir(config.out, "threshold") as directory:
        write_csv(dist.to_frame(), directory / "distribution.csv")
        result = {
            "threshold": threshold,
            "matched_percent": matched,
            "target_rate": rate,
            "rate_source": rate_source,
            "distribution_source": source,
        }
        write_json(result, directory / "threshold.json")
        write_metadata(directory, "threshold", config, result)
    record_run(config, "threshold", ["threshold"])
    log.info("Threshold score %i (%.4g%% of households).", threshold, matched)
    return Path(config.out) / "threshold"
