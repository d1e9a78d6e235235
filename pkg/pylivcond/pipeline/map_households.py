"""Classification of the households on a Kohonen map of their MCA coordinates.

MCA, map training and assignment, contiguous super-classes, their regrouping, and
the profile of the super-classes with over-representation flags. Writes the
``households/`` artifact directory.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from pylivcond.mca import coordinates, fit_mca
from pylivcond.profiling import class_profile, overrepresentation
from pylivcond.scores import score_table
from pylivcond.som import (
    MapTopology,
    SomModel,
    assign,
    class_sizes,
    init_som,
    quality,
    save_som,
    train_online,
    umatrix,
    unit_distances,
)
from pylivcond.superclass import (
    SuperClustering,
    audit_contiguity,
    cluster_units,
    coarsen,
    regroup,
)

from ._artifacts import (
    artifact_dir,
    record_run,
    write_csv,
    write_json,
    write_metadata,
)
from ._inputs import indicator_of, load_configured_dataset
from .config import PipelineConfig

__all__ = ["cmd_map_households"]

log = logging.getLogger(__name__)


def _regroup(
    model: SomModel,
    clustering: SuperClustering,
    weights: Optional[np.ndarray],
    config: PipelineConfig,
) -> Tuple[Optional[SuperClustering], Optional[str]]:
    """Apply the configured regrouping, or carry the agglomeration on to as many
    groups when the configured ones do not fit the map.

    Returns the grouped clustering and where the groups come from (``'config'`` or
    ``'hierarchy'``).
    """
    section = config.households
    if section.groups is None:
        return None, None
    ids = sorted(s for group in section.groups for s in group)
    if ids == list(range(clustering.k)):
        try:
            return regroup(clustering, section.groups, section.group_labels), "config"
        except ValueError as e:
            log.warning("Configured groups do not fit the map: %s", e)
    else:
        log.warning(
            "Configured groups %s do not partition the %i super-classes.",
            [list(g) for g in section.groups],
            clustering.k,
        )
    if len(section.groups) > clustering.k:
        log.warning("Skipped regrouping: more groups than super-classes.")
        return None, None
    grouped = coarsen(
        model, clustering, len(section.groups), weights, section.group_labels
    )
    log.info(
        "Regrouped the super-classes along the merge hierarchy into %s.",
        ", ".join(grouped.labels),
    )
    return grouped, "hierarchy"


def cmd_map_households(config: PipelineConfig) -> Path:
    """Run the household map analysis.

    Returns
    -------
    directory : Path
        The ``households`` artifact directory.

    Raises
    ------
    RuntimeError
        If a super-class merge breaks map contiguity.
    """
    section = config.households
    dataset = load_configured_dataset(config)
    indicator, n_empty = indicator_of(dataset)
    mca_model = fit_mca(indicator)
    coords = coordinates(mca_model, "observations", config.mca.axes)
    data = coords.to_numpy()

    topology = MapTopology.parse(section.topology)
    som_config = config.som_config("households")
    model = init_som(topology, data.shape[1], data, som_config)
    model = train_online(model, data, som_config)
    assignment = assign(model, data)
    sizes = class_sizes(model, assignment)
    map_quality = quality(model, data)
    log.info(
        "%i households on %i units (%i empty).",
        len(data),
        model.n_units,
        int((sizes == 0).sum()),
    )

    weights = sizes if section.weighting == "size" else None
    clustering = cluster_units(model, section.k, weights, section.linkage)
    violations = audit_contiguity(clustering)
    if violations:
        raise RuntimeError(f"Super-class contiguity violated at merges {violations}.")
    grouped, regroup_source = _regroup(model, clustering, weights, config)

    super_of_unit = clustering.unit_to_super
    class_labels = [clustering.labels[s] for s in super_of_unit[assignment]]
    groups: Dict[str, List[str]] = {}
    header: Dict[str, str] = {}
    if grouped is not None:
        for group_id, label in enumerate(grouped.labels):
            group_units = grouped.members(group_id)
            members = sorted(
                {clustering.labels[s] for s in super_of_unit[group_units]}, key=int
            )
            if len(members) > 1:
                groups["+".join(members)] = members
                header["+".join(members)] = label
            for member in members:
                header[member] = label

    scores = score_table(dataset)
    profile = class_profile(
        class_labels, dataset, scores, classes=list(clustering.labels), groups=groups
    )
    flags = overrepresentation(profile, dataset, class_labels)

    with artifact_dir(config.out, "households") as directory:
        assignments = pd.DataFrame(
            {
                "unit": assignment,
                "superclass": super_of_unit[assignment],
                "label": class_labels,
            },
            index=dataset.ids,
        )
        if grouped is not None:
            group_of_unit = np.asarray(grouped.labels)[grouped.unit_to_super]
            assignments["group"] = group_of_unit[assignment]
        write_csv(assignments, directory / "assignments.csv")

        units = clustering.to_frame()
        units["size"] = sizes
        units["umatrix"] = umatrix(model)
        if grouped is not None:
            units["group"] = np.asarray(grouped.labels)[grouped.unit_to_super]
        write_csv(units, directory / "units.csv", False)
        write_csv(unit_distances(model), directory / "unit_distances.csv", False)
        write_csv(
            pd.DataFrame(model.codevectors, columns=coords.columns).rename_axis("unit"),
            directory / "codevectors.csv",
        )
        save_som(model, directory / "som.json")
        write_json(clustering.history_records(), directory / "merge_history.json")
        write_csv(profile.to_frame(header or None), directory / "profile.csv")
        write_json([f.as_dict() for f in flags], directory / "flags.json")
        write_metadata(
            directory,
            "map_households",
            config,
            {
                "n_records": len(dataset),
                "dropped_records": dataset.dropped,
                "dropped_modalities": n_empty,
                "mca_variant": mca_model.variant,
                "mca_axes": coords.shape[1],
                "som": model.config.to_dict(),
                "quality": map_quality.to_dict(),
                "empty_units": int((sizes == 0).sum()),
                "superclass_sizes": {
                    clustering.labels[s]: int(sizes[super_of_unit == s].sum())
                    for s in range(clustering.k)
                },
                "contiguity_violations": violations,
                "regrouped": grouped is not None,
                "regroup_source": regroup_source,
                "group_of_column": header,
            },
        )
    record_run(config, "map_households", ["households"])
    return Path(config.out) / "households"
