"""Classification of the households on a Kohonen map of their partial scores.

Writes the ``scores/`` artifact directory: the assignments, the map, a profile
setting the basic-score classification (bad living conditions or not, from the
calibrated threshold) beside the map classes, the over-representation flags and the
standardised partial-score means per class (``partial_means.csv``, long format).
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from pylivcond.profiling import (
    class_profile,
    overrepresentation,
    standardized_partial_means,
)
from pylivcond.scores import TOTAL, calibrate_threshold, classify_bad, score_table
from pylivcond.som import (
    MapTopology,
    assign,
    class_sizes,
    init_som,
    quality,
    save_som,
    train_online,
    unit_distances,
)

from ._artifacts import (
    artifact_dir,
    record_run,
    write_csv,
    write_json,
    write_metadata,
)
from ._inputs import load_configured_dataset
from .config import PipelineConfig
from .threshold import configured_distribution, target_rate

__all__ = ["cmd_map_scores"]

log = logging.getLogger(__name__)

BASIC_SCORE = "Basic score"
MAP_CLASSES = "Kohonen classes"


def cmd_map_scores(config: PipelineConfig) -> Path:
    """Run the partial-score map analysis.

    Returns
    -------
    directory : Path
        The ``scores`` artifact directory.
    """
    dataset = load_configured_dataset(config)
    scores = score_table(dataset)
    partial = scores.drop(columns=TOTAL)
    data = partial.to_numpy(dtype=float)

    topology = MapTopology.parse(config.scores.topology)
    som_config = config.som_config("scores")
    model = init_som(topology, data.shape[1], data, som_config)
    model = train_online(model, data, som_config)
    assignment = assign(model, data)
    sizes = class_sizes(model, assignment)
    classes = [str(u + 1) for u in range(model.n_units)]
    class_labels = [classes[u] for u in assignment]

    dist, dist_source = configured_distribution(config, dataset)
    rate, rate_source = target_rate(config, dataset)
    threshold = calibrate_threshold(dist, rate)
    bad = classify_bad(scores[TOTAL], threshold).astype(int)

    basic = class_profile(bad, dataset, scores, classes=["0", "1"])
    mapped = class_profile(class_labels, dataset, scores, classes=classes)
    table = pd.concat(
        [
            basic.to_frame({"0": BASIC_SCORE, "1": BASIC_SCORE}, include_all=False),
            mapped.to_frame({c: MAP_CLASSES for c in classes}),
        ],
        axis=1,
    )
    flags = overrepresentation(basic, dataset, bad) + overrepresentation(
        mapped, dataset, class_labels
    )
    z = standardized_partial_means(class_labels, scores, classes=classes)

    with artifact_dir(config.out, "scores") as directory:
        write_csv(
            pd.DataFrame(
                {"unit": assignment, "class": class_labels, "bad": bad},
                index=dataset.ids,
            ),
            directory / "assignments.csv",
        )
        write_csv(
            pd.DataFrame(model.codevectors, columns=partial.columns).rename_axis(
                "unit"
            ),
            directory / "codevectors.csv",
        )
        write_csv(unit_distances(model), directory / "unit_distances.csv", False)
        save_som(model, directory / "som.json")
        write_csv(table, directory / "profile.csv")
        write_json([f.as_dict() for f in flags], directory / "flags.json")
        write_csv(
            z.reset_index().melt(id_vars="class", var_name="domain", value_name="z"),
            directory / "partial_means.csv",
            False,
        )
        write_metadata(
            directory,
            "map_scores",
            config,
            {
                "n_records": len(dataset),
                "dropped_records": dataset.dropped,
                "som": model.config.to_dict(),
                "quality": quality(model, data).to_dict(),
                "class_sizes": {c: int(s) for c, s in zip(classes, sizes)},
                "threshold": threshold,
                "matched_percent": dist.descending_at(threshold),
                "target_rate": rate,
                "rate_source": rate_source,
                "distribution_source": dist_source,
                "bad_share": float(100 * np.mean(bad)) if len(bad) else None,
                "undefined_partial_means": z.attrs["undefined"],
            },
        )
    record_run(config, "map_scores", ["scores"])
    return Path(config.out) / "scores"
