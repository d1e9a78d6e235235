"""Disjunctive coding and Burt table.

Each item expands into two indicator columns, the neutral one first, items in
codebook order, so a household row of the indicator matrix ``Z`` holds exactly one
1 per item. The Burt table is the symmetric co-occurrence matrix ``B = Z^T Z``.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from .dataset import Dataset

__all__ = [
    "BurtTable",
    "IndicatorMatrix",
    "burt_table",
    "disjunctive_code",
    "drop_empty_modalities",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndicatorMatrix:
    """Complete disjunctive table of a dataset.

    Attributes
    ----------
    values : ndarray of int8, shape (n, K)
        Indicator entries in {0, 1}.
    modalities : tuple of str
        The K modality column names.
    ids : tuple of str
        The n household ids.
    n_items : int
        Number of items Q; every row sums to Q.
    """

    values: np.ndarray
    modalities: Tuple[str, ...]
    ids: Tuple[str, ...]
    n_items: int

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def column_counts(self) -> np.ndarray:
        """Number of households holding each modality."""
        return self.values.sum(axis=0, dtype=np.int64)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            self.values,
            index=pd.Index(self.ids, name="ID"),
            columns=list(self.modalities),
        )


@dataclass(frozen=True)
class BurtTable:
    """Modality co-occurrence counts ``B = Z^T Z``.

    Attributes
    ----------
    values : ndarray of int64, shape (K, K)
    modalities : tuple of str
    n_items : int
        Number of items Q.
    n_rows : int
        Number of households n; the grand total is ``n * Q**2``.
    """

    values: np.ndarray
    modalities: Tuple[str, ...]
    n_items: int
    n_rows: int

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            self.values, index=list(self.modalities), columns=list(self.modalities)
        )


def disjunctive_code(dataset: Dataset) -> IndicatorMatrix:
    """Expand the 0/1 item responses of ``dataset`` into the indicator matrix."""
    responses = dataset.responses.to_numpy(dtype=np.int8)
    n, q = responses.shape
    values = np.empty((n, 2 * q), dtype=np.int8)
    values[:, 0::2] = 1 - responses
    values[:, 1::2] = responses
    return IndicatorMatrix(
        values=values,
        modalities=tuple(dataset.codebook.modalities),
        ids=tuple(dataset.ids),
        n_items=q,
    )


def burt_table(indicator: IndicatorMatrix) -> BurtTable:
    """Compute the Burt table of ``indicator`` in exact integer arithmetic."""
    z = indicator.values.astype(np.int64)
    return BurtTable(
        values=z.T @ z,
        modalities=indicator.modalities,
        n_items=indicator.n_items,
        n_rows=indicator.values.shape[0],
    )


def drop_empty_modalities(indicator: IndicatorMatrix) -> IndicatorMatrix:
    """Remove the modality columns no household holds, with a warning."""
    counts = indicator.column_counts()
    keep = counts > 0
    if keep.all():
        return indicator
    dropped = [m for m, k in zip(indicator.modalities, keep) if not k]
    log.warning("Dropping zero-frequency modalities: %s", ", ".join(dropped))
    return IndicatorMatrix(
        values=indicator.values[:, keep],
        modalities=tuple(m for m, k in zip(indicator.modalities, keep) if k),
        ids=indicator.ids,
        n_items=indicator.n_items,
    )
