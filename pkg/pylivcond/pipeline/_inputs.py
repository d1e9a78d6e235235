import logging
from typing import Tuple

from pylivcond.survey_data import (
    Dataset,
    IndicatorMatrix,
    disjunctive_code,
    drop_empty_modalities,
    load_dataset,
)

from .config import PipelineConfig

__all__ = ["load_configured_dataset", "indicator_of"]

log = logging.getLogger(__name__)


def load_configured_dataset(config: PipelineConfig) -> Dataset:
    """Load the data file of ``config`` with its codebook."""
    if config.data is None:
        raise ValueError("No data file configured (use --data or the 'data' key).")
    return load_dataset(config.data, config.codebook)


def indicator_of(dataset: Dataset) -> Tuple[IndicatorMatrix, int]:
    """Indicator matrix without zero-frequency modalities, and their number."""
    full = disjunctive_code(dataset)
    indicator = drop_empty_modalities(full)
    return indicator, full.shape[1] - indicator.shape[1]
