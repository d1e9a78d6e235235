"""Validation report of a household data file."""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from pylivcond.survey_data import Dataset, disjunctive_code

from ._inputs import load_configured_dataset
from .config import PipelineConfig

__all__ = ["ValidationReport", "cmd_validate", "modality_frequencies"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidationReport:
    """Record counts and modality frequencies of a loaded data file."""

    n_records: int
    dropped: int
    frequencies: pd.DataFrame

    def to_text(self) -> str:
        lines = [
            f"Records: {self.n_records}",
            f"Dropped incomplete records: {self.dropped}",
            f"Modalities: {len(self.frequencies)}",
            "",
            self.frequencies.to_string(float_format=lambda v: f"{v:.1f}"),
        ]
        return "\n".join(lines)


def modality_frequencies(dataset: Dataset) -> pd.DataFrame:
    """Count and percent of every modality, with the reference percent if known.

    The reference of a negative modality is the item's reference frequency, that of
    the neutral modality its complement.
    """
    indicator = disjunctive_code(dataset)
    counts = indicator.column_counts()
    n = len(dataset)
    reference = []
    for item in dataset.codebook.items:
        ref = item.reference_frequency
        reference += [np.nan, np.nan] if ref is None else [100 - ref, ref]
    return pd.DataFrame(
        {
            "count": counts,
            "percent": 100 * counts / n if n else np.full(len(counts), np.nan),
            "reference_percent": reference,
        },
        index=pd.Index(indicator.modalities, name="modality"),
    )


def cmd_validate(config: PipelineConfig) -> ValidationReport:
    """Load the configured data file and report counts and frequencies.

    Raises
    ------
    ValueError
        On any load failure, including a file without records.
    """
    dataset = load_configured_dataset(config)
    if len(dataset) == 0:
        raise ValueError(f"No records: {config.data} holds no complete household.")
    report = ValidationReport(
        n_records=len(dataset),
        dropped=dataset.dropped,
        frequencies=modality_frequencies(dataset),
    )
    log.info(
        "%i record(s) valid, %i dropped, %i modalities.",
        report.n_records,
        report.dropped,
        len(report.frequencies),
    )
    return report
