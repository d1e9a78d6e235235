"""Agglomeration of map units into contiguous super-classes.

Units are merged bottom-up by hierarchical clustering of their code vectors, but
only clusters that touch on the map (some of their units at map distance 1) may
merge, so every super-class is a connected region of the map. Clusters created by
merging get the id ``U + step``, as in scipy's linkage matrices. Among candidate
pairs of equal cost the lexicographically smallest ``(a, b)`` merges first.
"""

import logging
from collections import deque
from dataclasses import dataclass, replace
from typing import Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np
import pandas as pd

from pylivcond.som import MapTopology, SomModel
from pylivcond.utils._typing import IntArray

__all__ = [
    "LINKAGES",
    "Merge",
    "SuperClustering",
    "audit_contiguity",
    "cluster_units",
    "coarsen",
    "partition_at",
    "regroup",
]

log = logging.getLogger(__name__)

LINKAGES = ["ward", "single", "complete", "average"]


class Merge(NamedTuple):
    """One agglomeration step: clusters ``a < b`` merged at ``cost``."""

    a: int
    b: int
    cost: float


@dataclass(frozen=True, eq=False)
class SuperClustering:
    """Partition of the map units into super-classes.

    Attributes
    ----------
    unit_to_super : ndarray of int, shape (U,)
        Super-class id of every unit; ids are numbered ``0..k-1`` in the order of
        their lowest unit.
    merge_history : tuple of Merge
        The ``U - k`` merges leading from single units to the ``k`` super-classes.
    k : int
    topology : MapTopology
    labels : tuple of str
        Display label of each super-class id (``'1'..'k'`` by default).
    linkage : str
    """

    unit_to_super: np.ndarray
    merge_history: Tuple[Merge, ...]
    k: int
    topology: MapTopology
    labels: Tuple[str, ...]
    linkage: str = "ward"

    def members(self, super_id: int) -> List[int]:
        return [int(u) for u in np.flatnonzero(self.unit_to_super == super_id)]

    def to_frame(self) -> pd.DataFrame:
        """One row per unit: ``unit``, ``superclass`` id and ``label``."""
        return pd.DataFrame(
            {
                "unit": np.arange(len(self.unit_to_super)),
                "superclass": self.unit_to_super,
                "label": [self.labels[s] for s in self.unit_to_super],
            }
        )

    def history_records(self) -> List[dict]:
        """The merge history as JSON-ready records, with the created cluster id."""
        n_units = len(self.unit_to_super)
        return [
            {"step": i, "a": m.a, "b": m.b, "cost": m.cost, "new": n_units + i}
            for i, m in enumerate(self.merge_history)
        ]


def _canonical(clusters: Sequence[Set[int]], n_units: int) -> np.ndarray:
    """Unit labels numbering ``clusters`` by their lowest unit."""
    labels = np.empty(n_units, dtype=np.int64)
    for new_id, members in enumerate(sorted(clusters, key=min)):
        labels[sorted(members)] = new_id
    return labels


def _connected(units: Set[int], topology: MapTopology) -> bool:
    """Whether ``units`` form a connected region under map adjacency."""
    if not units:
        return False
    distances = topology.distance_matrix()
    start = min(units)
    seen, queue = {start}, deque([start])
    while queue:
        unit = queue.popleft()
        for other in units - seen:
            if distances[unit, other] == 1:
                seen.add(other)
                queue.append(other)
    return seen == units


def _linkage_cost(
    linkage: str,
    a: Set[int],
    b: Set[int],
    centroids: Dict[int, np.ndarray],
    weights: Dict[int, float],
    ia: int,
    ib: int,
    codevectors: np.ndarray,
) -> float:
    if linkage == "ward":
        total = weights[ia] + weights[ib]
        if total == 0:
            return 0.0
        gap = centroids[ia] - centroids[ib]
        return float(weights[ia] * weights[ib] / total * np.dot(gap, gap))
    pair = np.sqrt(
        (
            (codevectors[sorted(a)][:, None, :] - codevectors[sorted(b)][None, :, :])
            ** 2
        ).sum(axis=2)
    )
    if linkage == "single":
        return float(pair.min())
    if linkage == "complete":
        return float(pair.max())
    return float(pair.mean())


def cluster_units(
    model: SomModel,
    k: int,
    weights: Optional[np.ndarray] = None,
    linkage: str = "ward",
) -> SuperClustering:
    """Agglomerate the units of ``model`` into ``k`` map-contiguous super-classes.

    Parameters
    ----------
    model
        A trained map.
    k
        Target number of super-classes, ``1 <= k <= U``.
    weights
        Unit weights for the Ward cost and centroids, typically class sizes; by
        default every unit (empty ones included) weighs 1. Only used by ``'ward'``.
    linkage
        One of :data:`LINKAGES`. The Ward cost of merging ``a`` and ``b`` is
        ``w_a * w_b / (w_a + w_b) * ||c_a - c_b||^2`` with weighted centroids.

    Raises
    ------
    ValueError
        If ``k`` is out of range, ``linkage`` is unknown, weights are invalid, or the
        map adjacency is disconnected.
    """
    n_units = model.n_units
    if not 1 <= k <= n_units:
        raise ValueError(f"k must be in [1, {n_units}] (got {k}).")
    if linkage not in LINKAGES:
        raise ValueError(
            f"Provided linkage ({linkage!r}) is not valid."
            + f" Accepted values are in {LINKAGES!r}."
        )
    unit_weights = np.ones(n_units) if weights is None else np.asarray(weights, float)
    if unit_weights.shape != (n_units,) or np.any(unit_weights < 0):
        raise ValueError(f"Weights must be {n_units} non-negative values.")

    codevectors = model.codevectors
    distances = model.topology.distance_matrix()
    members: Dict[int, Set[int]] = {u: {u} for u in range(n_units)}
    centroids = {u: codevectors[u].astype(float) for u in range(n_units)}
    cluster_weights = {u: float(unit_weights[u]) for u in range(n_units)}
    adjacent: Set[Tuple[int, int]] = {
        (int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(distances == 1)))
    }

    history: List[Merge] = []
    for step in range(n_units - k):
        if not adjacent:
            raise ValueError(f"{model.topology} adjacency graph is disconnected.")
        cost, a, b = min(
            (
                _linkage_cost(
                    linkage,
                    members[ia],
                    members[ib],
                    centroids,
                    cluster_weights,
                    ia,
                    ib,
                    codevectors,
                ),
                ia,
                ib,
            )
            for ia, ib in adjacent
        )
        new = n_units + step
        history.append(Merge(a, b, cost))

        wa, wb = cluster_weights.pop(a), cluster_weights.pop(b)
        ca, cb = centroids.pop(a), centroids.pop(b)
        if wa + wb > 0:
            centroids[new] = (wa * ca + wb * cb) / (wa + wb)
        else:
            centroids[new] = (ca + cb) / 2
        cluster_weights[new] = wa + wb
        members[new] = members.pop(a) | members.pop(b)

        neighbours = {c for pair in adjacent if a in pair or b in pair for c in pair}
        adjacent = {pair for pair in adjacent if a not in pair and b not in pair}
        adjacent |= {(c, new) for c in neighbours - {a, b}}

    unit_to_super = _canonical(list(members.values()), n_units)
    log.info(
        "Grouped %i units of %s into %i super-classes (%s linkage).",
        n_units,
        model.topology,
        k,
        linkage,
    )
    return SuperClustering(
        unit_to_super=unit_to_super,
        merge_history=tuple(history),
        k=k,
        topology=model.topology,
        labels=tuple(str(i + 1) for i in range(k)),
        linkage=linkage,
    )


def _replay(n_units: int, history: Sequence[Merge]) -> Dict[int, Set[int]]:
    """Clusters obtained by applying ``history`` to single units."""
    members: Dict[int, Set[int]] = {u: {u} for u in range(n_units)}
    for step, merge in enumerate(history):
        members[n_units + step] = members.pop(merge.a) | members.pop(merge.b)
    return members


def partition_at(clustering: SuperClustering, k: int) -> IntArray:
    """Unit labels of the ``k``-cluster cut of the merge history.

    ``k`` ranges from the number of clusters the history ends with up to ``U``;
    labels are numbered by lowest unit, as in :class:`SuperClustering`.
    """
    n_units = len(clustering.unit_to_super)
    lowest = n_units - len(clustering.merge_history)
    if not lowest <= k <= n_units:
        raise ValueError(f"k must be in [{lowest}, {n_units}] (got {k}).")
    clusters = _replay(n_units, clustering.merge_history[: n_units - k])
    return _canonical(list(clusters.values()), n_units)


def audit_contiguity(clustering: SuperClustering) -> List[int]:
    """Replay the merge history and return the steps creating a disconnected cluster.

    An empty list means every merge produced a map-connected cluster.
    """
    n_units = len(clustering.unit_to_super)
    members: Dict[int, Set[int]] = {u: {u} for u in range(n_units)}
    violations = []
    for step, merge in enumerate(clustering.merge_history):
        merged = members.pop(merge.a) | members.pop(merge.b)
        members[n_units + step] = merged
        if not _connected(merged, clustering.topology):
            violations.append(step)
    if violations:
        log.warning("Contiguity violated at merge step(s) %s.", violations)
    else:
        log.debug("Contiguity holds over %i merges.", len(clustering.merge_history))
    return violations


def _group_merges(
    clustering: SuperClustering, clusters: Sequence[Set[int]]
) -> List[Merge]:
    """Merges joining the super-classes inside each of ``clusters``.

    Each step merges the lexicographically smallest pair of map-adjacent clusters
    lying in the same group; the merges carry a ``NaN`` cost.
    """
    n_units = len(clustering.unit_to_super)
    distances = clustering.topology.distance_matrix()
    group_of = {u: i for i, units in enumerate(clusters) for u in units}
    live = _replay(n_units, clustering.merge_history)
    new = n_units + len(clustering.merge_history)
    merges = []
    while True:
        pairs = [
            (a, b)
            for a in sorted(live)
            for b in sorted(live)
            if a < b
            and group_of[min(live[a])] == group_of[min(live[b])]
            and distances[np.ix_(sorted(live[a]), sorted(live[b]))].min() == 1
        ]
        if not pairs:
            return merges
        a, b = pairs[0]
        merges.append(Merge(a, b, np.nan))
        live[new] = live.pop(a) | live.pop(b)
        new += 1


def regroup(
    clustering: SuperClustering,
    groups: Sequence[Sequence[int]],
    labels: Optional[Sequence[str]] = None,
) -> SuperClustering:
    """Merge super-classes into coarser groups, e.g. ``[[0], [1, 2], [3, 4]]``.

    Parameters
    ----------
    clustering
        The clustering to regroup.
    groups
        A partition of the super-class ids ``0..k-1``.
    labels
        Label of each group (default: member labels joined by ``'+'``, e.g.
        ``'2+3'``).

    Returns
    -------
    clustering : SuperClustering
        ``len(groups)`` super-classes, ids numbered by lowest unit, each carrying
        the label of its group. The merge history is extended by the merges inside
        each group (``NaN`` cost), so it ends with ``len(groups)`` clusters.

    Raises
    ------
    ValueError
        If ``groups`` is not a partition of the ids, ``labels`` has the wrong length,
        or a group is not map-contiguous.
    """
    flat = sorted(int(s) for group in groups for s in group)
    if flat != list(range(clustering.k)) or any(len(g) == 0 for g in groups):
        raise ValueError(
            f"Groups {[list(g) for g in groups]!r} do not partition the "
            + f"super-class ids 0..{clustering.k - 1}."
        )
    if labels is None:
        labels = ["+".join(clustering.labels[s] for s in sorted(g)) for g in groups]
    elif len(labels) != len(groups):
        raise ValueError(f"Expected {len(groups)} group labels (got {len(labels)}).")

    clusters, group_labels = [], {}
    for group, label in zip(groups, labels):
        units = {u for s in group for u in clustering.members(int(s))}
        if not _connected(units, clustering.topology):
            raise ValueError(
                f"Group {list(group)!r} is not contiguous on {clustering.topology}."
            )
        clusters.append(units)
        group_labels[min(units)] = str(label)

    unit_to_super = _canonical(clusters, len(clustering.unit_to_super))
    return SuperClustering(
        unit_to_super=unit_to_super,
        merge_history=clustering.merge_history
        + tuple(_group_merges(clustering, clusters)),
        k=len(groups),
        topology=clustering.topology,
        labels=tuple(group_labels[lowest] for lowest in sorted(group_labels)),
        linkage=clustering.linkage,
    )


def coarsen(
    model: SomModel,
    clustering: SuperClustering,
    n_groups: int,
    weights: Optional[np.ndarray] = None,
    labels: Optional[Sequence[str]] = None,
) -> SuperClustering:
    """Regroup the super-classes by carrying the agglomeration on to ``n_groups``.

    The groups are the clusters of the same agglomeration stopped at ``n_groups``
    instead of ``k``, so they are nested in the super-classes and always
    map-contiguous. ``model`` and ``weights`` must be those ``clustering`` was
    computed with. Groups and ``labels`` are ordered by lowest unit.

    Raises
    ------
    ValueError
        If ``n_groups`` is not in ``[1, k]`` or ``clustering`` does not come from
        ``model`` and ``weights``.
    """
    if not 1 <= n_groups <= clustering.k:
        raise ValueError(f"n_groups must be in [1, {clustering.k}] (got {n_groups}).")
    coarse = cluster_units(model, n_groups, weights, clustering.linkage)
    steps = len(clustering.merge_history)
    if coarse.merge_history[:steps] != clustering.merge_history:
        raise ValueError("The clustering was not computed from this model.")
    groups = [
        sorted({int(s) for s in clustering.unit_to_super[coarse.unit_to_super == g]})
        for g in range(coarse.k)
    ]
    grouped = regroup(clustering, groups, labels)
    return replace(grouped, merge_history=coarse.merge_history)
