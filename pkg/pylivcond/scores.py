"""Scores of bad living conditions and calibration of a living-conditions threshold.

The total score of a household is its number of negative responses; the partial
scores count them per domain. A threshold score ``s`` classifies the households with
a total score of at least ``s`` as living in bad conditions; it is calibrated so
that the share of such households matches an external (monetary) poverty rate.
"""

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Tuple, Union

import numpy as np
import pandas as pd

from pylivcond.survey_data import Codebook, Dataset, HouseholdRecord

__all__ = [
    "ScoreDistribution",
    "ScoreVector",
    "calibrate_threshold",
    "classify_bad",
    "distribution",
    "distribution_from_weights",
    "score",
    "score_table",
]

log = logging.getLogger(__name__)

TOTAL = "total"


@dataclass(frozen=True)
class ScoreVector:
    """Total and per-domain (partial) scores of one household."""

    total: int
    partial: Tuple[int, ...]
    domains: Tuple[str, ...]

    def as_dict(self):
        return dict(zip(self.domains, self.partial), total=self.total)


def score(household: HouseholdRecord, codebook: Codebook) -> ScoreVector:
    """Count the negative responses of ``household``, overall and per domain."""
    partial = tuple(
        sum(household.responses[code] for code in codebook.domain_items(domain))
        for domain in codebook.domains
    )
    return ScoreVector(total=sum(partial), partial=partial, domains=codebook.domains)


def score_table(dataset: Dataset) -> pd.DataFrame:
    """Total and partial scores of every household.

    Returns
    -------
    scores : DataFrame
        Indexed by household id, columns ``'total'`` then one per domain (codebook
        order), ``int64`` values.
    """
    codebook = dataset.codebook
    responses = dataset.responses.astype(np.int64)
    table = pd.DataFrame(
        {
            domain: responses[codebook.domain_items(domain)].sum(axis=1)
            for domain in codebook.domains
        },
        index=responses.index,
        dtype=np.int64,
    )
    table.insert(0, TOTAL, table.sum(axis=1))
    return table


@dataclass(frozen=True)
class ScoreDistribution:
    """Distribution of the total score.

    Attributes
    ----------
    weights : Series
        Weight (count, or any non-negative mass) of each score ``0..max_score``.
        Integer weights keep every percentage exact.
    """

    weights: pd.Series

    @property
    def max_score(self) -> int:
        return int(self.weights.index.max())

    @property
    def total(self):
        return self.weights.sum()

    def percent(self) -> pd.Series:
        return (100 * self.weights / self.total).rename("percent")

    def descending(self) -> pd.Series:
        """Percent with a score ``>= s``, non-increasing in ``s``."""
        tail = self.weights[::-1].cumsum()[::-1]
        return (100 * tail / self.total).rename("cumulative_desc")

    def ascending(self) -> pd.Series:
        """Percent with a score ``<= s``."""
        return (100 * self.weights.cumsum() / self.total).rename("cumulative_asc")

    def descending_at(self, s: int) -> float:
        """Percent with a score ``>= s``; 0 for ``s = max_score + 1``."""
        if not 0 <= s <= self.max_score + 1:
            raise ValueError(f"Score must be in [0, {self.max_score + 1}] (got {s}).")
        return float(100 * self.weights[self.weights.index >= s].sum() / self.total)

    def to_frame(self) -> pd.DataFrame:
        """The distribution laid out as score, percent and both cumulative percents."""
        return pd.concat(
            [self.percent(), self.descending(), self.ascending()], axis=1
        ).rename_axis("score")


def distribution_from_weights(
    weights: Union[Mapping[int, float], pd.Series], max_score: int = 26
) -> ScoreDistribution:
    """Build a distribution from per-score weights, e.g. a published table.

    Scores absent from ``weights`` get a zero weight.

    Raises
    ------
    ValueError
        On negative weights, scores outside ``0..max_score`` or a zero total.
    """
    weights = pd.Series(weights)
    if len(weights) and (weights.index.min() < 0 or weights.index.max() > max_score):
        raise ValueError(f"Scores must be in [0, {max_score}].")
    if (weights < 0).any():
        raise ValueError("Score weights must be non-negative.")
    if weights.sum() == 0:
        raise ValueError("Score weights sum to zero.")
    weights = weights.reindex(range(max_score + 1), fill_value=0)
    return ScoreDistribution(weights.rename("weight").rename_axis("score"))


def distribution(
    dataset: Dataset, codebook: Optional[Codebook] = None
) -> ScoreDistribution:
    """Exact empirical distribution of the total scores ``0..Q`` of ``dataset``.

    Raises
    ------
    ValueError
        If the dataset is empty.
    """
    codebook = dataset.codebook if codebook is None else codebook
    if len(dataset) == 0:
        raise ValueError("Cannot compute the score distribution of an empty dataset.")
    totals = score_table(dataset)[TOTAL]
    counts = np.bincount(totals.to_numpy(), minlength=codebook.n_items + 1)
    return distribution_from_weights(
        pd.Series(counts, index=range(len(counts))), max_score=codebook.n_items
    )


def calibrate_threshold(dist: ScoreDistribution, target_rate: float) -> int:
    """Score whose descending-cumulative percent is closest to ``target_rate``.

    Scores ``0..max_score + 1`` are scanned; the last one means an empty bad class.
    Equally close scores resolve to the higher score.

    Raises
    ------
    ValueError
        If ``target_rate`` is outside ``[0, 100]``.
    """
    if not 0 <= target_rate <= 100:
        raise ValueError(f"Target rate must be in [0, 100] (got {target_rate}).")
    best, best_gap = 0, np.inf
    for s in range(dist.max_score + 2):
        gap = abs(dist.descending_at(s) - target_rate)
        if gap <= best_gap:
            best, best_gap = s, gap
    log.info(
        "Threshold %i matches %.4g%% against a target of %.4g%%.",
        best,
        dist.descending_at(best),
        target_rate,
    )
    return best


def classify_bad(totals: Union[np.ndarray, pd.Series], threshold: int) -> np.ndarray:
    """Flag the households in bad living conditions (total score ``>= threshold``)."""
    return np.asarray(totals) >= threshold
