"""
Provide the ``SCORE_DISTRIBUTION`` and ``REFERENCE_POVERTY_RATE`` constants, and the
:func:`data_file` helper locating the files shipped in 'pylivcond/constants/data/'.

``SCORE_DISTRIBUTION`` is the published distribution of the total score of bad
living conditions, as a pandas Series mapping each score to its weight in tenths
of a percent (integers, summing to 1000). Integer weights keep cumulative
percentages exact, e.g.:

>>> from pylivcond.scores import distribution_from_weights
>>> dist = distribution_from_weights(SCORE_DISTRIBUTION)
>>> dist.descending_at(9)
10.8
"""

import importlib.resources
from pathlib import Path

import pandas as pd
import yaml

__all__ = ["SCORE_DISTRIBUTION", "REFERENCE_POVERTY_RATE", "data_file"]


def data_file(name: str) -> Path:
    """Return the path of the shipped reference file ``name``."""
    resource = importlib.resources.files("pylivcond.constants").joinpath("data")
    return Path(str(resource.joinpath(name)))


SCORE_DISTRIBUTION: pd.Series
REFERENCE_POVERTY_RATE: float

with data_file("score_distribution.yaml").open("r") as file:
    _content = yaml.safe_load(file)
    SCORE_DISTRIBUTION = (
        pd.Series(
            {int(k): int(v) for k, v in _content["weights"].items()}, name="weight"
        )
        .reindex(range(int(_content["max_score"]) + 1), fill_value=0)
        .rename_axis("score")
    )
    REFERENCE_POVERTY_RATE = float(_content["poverty_rate"])
