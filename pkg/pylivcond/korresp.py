"""Classification of the modalities on a Kohonen map.

The map is trained on the chi-square-scaled rows of the Burt table, so that the
Euclidean metric of the map is the chi-square metric between modality profiles. As
the Burt table is symmetric, classifying its scaled rows is enough: rows and
columns are the same modalities.
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from dask import compute, delayed
from dask.distributed import Client, LocalCluster
from scipy.spatial.distance import pdist
from scipy.stats import spearmanr

from pylivcond.mca import scaled_burt_profiles
from pylivcond.som import (
    MapTopology,
    SomConfig,
    SomModel,
    assign,
    init_som,
    train_online,
)
from pylivcond.survey_data import BurtTable, Codebook
from pylivcond.utils._logging import LoggingStack, LoggingStackPickle
from pylivcond.utils._random import substream
from pylivcond.utils._typing import LoggerLike

__all__ = [
    "ModalityMap",
    "classify_modalities",
    "classify_modalities_many",
    "mca_consistency",
    "polarity_baseline",
    "polarity_separation",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ModalityMap:
    """A trained map over the modalities.

    Attributes
    ----------
    model : SomModel
        Map trained on the scaled Burt profiles.
    modalities : tuple of str
    assignment : ndarray of int, shape (K,)
        Unit of each modality.
    """

    model: SomModel
    modalities: Tuple[str, ...]
    assignment: np.ndarray

    @property
    def topology(self) -> MapTopology:
        return self.model.topology

    def labels(self) -> List[List[str]]:
        """Modalities held by each unit (possibly none), in modality order."""
        units: List[List[str]] = [[] for _ in range(self.model.n_units)]
        for modality, unit in zip(self.modalities, self.assignment):
            units[unit].append(modality)
        return units

    def layout(self) -> pd.DataFrame:
        """One row per unit: its map position and space-separated modalities."""
        positions = self.topology.positions()
        return pd.DataFrame(
            {
                "unit": np.arange(self.model.n_units),
                "row": positions[:, 0],
                "col": positions[:, 1],
                "modalities": [" ".join(m) for m in self.labels()],
            }
        )

    def codevector_profiles(self) -> pd.DataFrame:
        """Code vectors of the units, one column per Burt column modality."""
        return pd.DataFrame(
            self.model.codevectors,
            index=pd.Index(range(self.model.n_units), name="unit"),
            columns=list(self.modalities),
        )


def classify_modalities(
    burt: BurtTable,
    topology: MapTopology,
    config: SomConfig = SomConfig(),
    logger: LoggerLike = log,
) -> ModalityMap:
    """Train a map on the scaled Burt profiles and assign each modality to its BMU.

    When the map has more units than there are modalities, sample initialisation is
    impossible and falls back to uniform-box initialisation with a warning.
    """
    profiles = scaled_burt_profiles(burt)
    data = profiles.to_numpy()
    n_modalities = data.shape[0]

    fallback = False
    if topology.n_units > n_modalities:
        logger.warning(
            "%s has more units (%i) than modalities (%i); some units stay empty.",
            topology,
            topology.n_units,
            n_modalities,
        )
        if config.init == "sample":
            logger.warning("Falling back to uniform-box initialisation.")
            config = replace(config, init="uniform-box")
            fallback = True

    model = init_som(topology, data.shape[1], data, config)
    model = replace(model, provenance={"init_fallback": fallback})
    model = train_online(model, data, config, logger=logger)
    assignment = assign(model, data)
    logger.info(
        "%i modalities classified on %i of %i units.",
        n_modalities,
        len(np.unique(assignment)),
        topology.n_units,
    )
    return ModalityMap(model=model, modalities=burt.modalities, assignment=assignment)


def _classify_task(
    burt: BurtTable, topology: MapTopology, config: SomConfig
) -> Tuple[ModalityMap, LoggingStackPickle]:
    """Task running :func:`classify_modalities` with deferred logging."""
    logger = LoggingStack(str(topology))
    modality_map = classify_modalities(burt, topology, config, logger=logger)
    return modality_map, logger.picklable()


def classify_modalities_many(
    burt: BurtTable,
    topologies: Sequence[MapTopology],
    config: SomConfig = SomConfig(),
    ntasks: Optional[int] = None,
) -> Dict[str, ModalityMap]:
    """Run :func:`classify_modalities` for several topologies as dask tasks.

    Parameters
    ----------
    burt
        The Burt table.
    topologies
        Maps to train, e.g. ``[string-10, grid-10x10]``.
    config
        Shared training configuration.
    ntasks
        Number of workers of a local dask cluster; by default the tasks run on the
        threaded scheduler.

    Returns
    -------
    maps : dict
        ``str(topology) -> ModalityMap`` in the order of ``topologies``.
    """
    tasks = [delayed(_classify_task)(burt, topology, config) for topology in topologies]
    if ntasks is None:
        results = compute(*tasks, scheduler="threads")
    else:
        cluster = LocalCluster(n_workers=ntasks, threads_per_worker=1)
        client = Client(cluster)
        log.info("Dask cluster is running.")
        try:
            results = compute(*tasks)
        finally:
            client.shutdown()
            client.close()
            cluster.close()
            log.info("Dask cluster has been properly shut down.")

    maps = {}
    for topology, (modality_map, messages) in zip(topologies, results):
        LoggingStack(*messages).flush(logger=log)
        maps[str(topology)] = modality_map
    return maps


def _close_pairs(modality_map: ModalityMap) -> Tuple[np.ndarray, np.ndarray]:
    """Modality index pairs ``(j, l)``, ``j < l``, on the same or neighbouring units."""
    distances = modality_map.topology.distance_matrix()
    units = modality_map.assignment
    close = distances[units[:, None], units[None, :]] <= 1
    return np.nonzero(np.triu(close, k=1))


def _polarity(modality_map: ModalityMap, codebook: Codebook) -> np.ndarray:
    polarity = codebook.modality_polarity()
    return np.array([polarity[m] for m in modality_map.modalities])


def polarity_separation(modality_map: ModalityMap, codebook: Codebook) -> float:
    """Share of close modality pairs (same unit or map neighbours) sharing polarity.

    1 means negative and neutral modalities occupy separate regions of the map.
    ``NaN`` if no pair of modalities is close.
    """
    first, second = _close_pairs(modality_map)
    if len(first) == 0:
        return float("nan")
    polarity = _polarity(modality_map, codebook)
    return float(np.mean(polarity[first] == polarity[second]))


def polarity_baseline(
    modality_map: ModalityMap,
    codebook: Codebook,
    n_permutations: int = 1000,
    seed: int = 0,
) -> np.ndarray:
    """Separation scores of the same map after random shuffles of the polarities.

    Draws from the ``permutation`` substream of ``seed``.
    """
    first, second = _close_pairs(modality_map)
    if len(first) == 0:
        return np.full(n_permutations, np.nan)
    polarity = _polarity(modality_map, codebook)
    rng = substream(seed, "permutation")
    scores = np.empty(n_permutations)
    for i in range(n_permutations):
        shuffled = rng.permutation(polarity)
        scores[i] = np.mean(shuffled[first] == shuffled[second])
    return scores


def mca_consistency(modality_map: ModalityMap, burt: BurtTable) -> Tuple[float, float]:
    """Spearman correlation between map distances and chi-square profile distances.

    Returns
    -------
    rho, pvalue : float
        Over all modality pairs.
    """
    profile_distances = pdist(scaled_burt_profiles(burt).to_numpy())
    distances = modality_map.topology.distance_matrix()
    units = modality_map.assignment
    first, second = np.triu_indices(len(units), k=1)
    map_distances = distances[units[first], units[second]]
    result = spearmanr(map_distances, profile_distances)
    return float(result[0]), float(result[1])
