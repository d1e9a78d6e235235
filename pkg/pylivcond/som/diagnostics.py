"""Map diagnostics and inter-unit distance structure (U-matrix data)."""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from pylivcond.utils._typing import FloatArray

from .model import SomModel, _check_data, _winners

__all__ = ["MapQuality", "quality", "umatrix", "unit_distances"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MapQuality:
    """Quantization error (mean squared distance to the BMU) and topographic error
    (share of rows whose two best units are not map neighbours)."""

    quantization_error: float
    topographic_error: float

    def to_dict(self):
        return {
            "quantization_error": self.quantization_error,
            "topographic_error": self.topographic_error,
        }


def quality(model: SomModel, data: np.ndarray) -> MapQuality:
    """Compute the quantization and topographic errors of ``model`` on ``data``.

    A single-unit map has a topographic error of 0.

    Raises
    ------
    ValueError
        On empty data or dimension mismatch.
    """
    data = _check_data(data, model.dim)
    winners = _winners(model, data)
    quantization_error = float(winners[:, 2].mean())
    if model.n_units == 1:
        return MapQuality(quantization_error, 0.0)
    distances = model.topology.distance_matrix()
    first, second = winners[:, 0].astype(int), winners[:, 1].astype(int)
    topographic_error = float(np.mean(distances[first, second] > 1))
    return MapQuality(quantization_error, topographic_error)


def unit_distances(model: SomModel) -> pd.DataFrame:
    """Euclidean distances between the code vectors of every map-neighbour pair.

    Returns
    -------
    distances : DataFrame
        Columns ``unit_a``, ``unit_b`` (``unit_a < unit_b``) and ``distance``, pairs
        in lexicographic order.
    """
    pairs = model.topology.neighbor_pairs()
    a = np.array([p[0] for p in pairs], dtype=np.int64)
    b = np.array([p[1] for p in pairs], dtype=np.int64)
    cv = model.codevectors
    distance = np.sqrt(((cv[a] - cv[b]) ** 2).sum(axis=1)) if pairs else np.empty(0)
    return pd.DataFrame({"unit_a": a, "unit_b": b, "distance": distance})


def umatrix(model: SomModel) -> FloatArray:
    """Mean distance of each unit's code vector to those of its map neighbours.

    Units without neighbours (single-unit map) get 0. Reshape with
    ``(topology.height, topology.width)`` for a grid image.
    """
    distances = unit_distances(model)
    totals = np.zeros(model.n_units)
    counts = np.zeros(model.n_units)
    values = distances["distance"].to_numpy()
    for column in ["unit_a", "unit_b"]:
        units = distances[column].to_numpy()
        np.add.at(totals, units, values)
        np.add.at(counts, units, 1)
    return np.divide(totals, counts, out=np.zeros_like(totals), where=counts > 0)
