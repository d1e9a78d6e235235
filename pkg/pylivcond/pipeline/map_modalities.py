"""Classification of the modalities on Kohonen maps, with the MCA of the modalities.

Writes two artifact directories under the output root:

- ``modalities/``: per topology, the unit layout with its modalities
  (``layout_<topology>.csv``), the neighbour distances (``unit_distances_*.csv``),
  the U-matrix (``umatrix_*.csv``), the code-vector profiles (``codevectors_*.csv``)
  and the map (``som_*.json``); the separation and consistency statistics
  (``separation.json``).
- ``mca/``: eigenvalues and both sides of principal coordinates.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from pylivcond.korresp import (
    classify_modalities_many,
    mca_consistency,
    polarity_baseline,
    polarity_separation,
)
from pylivcond.mca import coordinates, explained_inertia, fit_mca
from pylivcond.som import MapTopology, save_som, umatrix, unit_distances
from pylivcond.survey_data import burt_table

from ._artifacts import (
    artifact_dir,
    record_run,
    write_csv,
    write_json,
    write_metadata,
)
from ._inputs import indicator_of, load_configured_dataset
from .config import PipelineConfig

__all__ = ["cmd_map_modalities"]

log = logging.getLogger(__name__)


def cmd_map_modalities(config: PipelineConfig) -> Path:
    """Run the modality maps of ``config.modalities`` and the MCA.

    Returns
    -------
    directory : Path
        The ``modalities`` artifact directory.
    """
    dataset = load_configured_dataset(config)
    indicator, n_empty = indicator_of(dataset)
    burt = burt_table(indicator)
    codebook = dataset.codebook
    topologies = [MapTopology.parse(t) for t in config.modalities.topologies]

    maps = classify_modalities_many(burt, topologies, config.som_config("modalities"))

    statistics = {}
    with artifact_dir(config.out, "modalities") as directory:
        for name, modality_map in maps.items():
            write_csv(modality_map.layout(), directory / f"layout_{name}.csv", False)
            write_csv(
                unit_distances(modality_map.model),
                directory / f"unit_distances_{name}.csv",
                False,
            )
            write_csv(
                pd.DataFrame(
                    {
                        "unit": np.arange(modality_map.model.n_units),
                        "umatrix": umatrix(modality_map.model),
                    }
                ),
                directory / f"umatrix_{name}.csv",
                False,
            )
            write_csv(
                modality_map.codevector_profiles(),
                directory / f"codevectors_{name}.csv",
            )
            save_som(modality_map.model, directory / f"som_{name}.json")

            separation = polarity_separation(modality_map, codebook)
            baseline = polarity_baseline(
                modality_map, codebook, config.modalities.permutations, config.seed
            )
            rho, pvalue = mca_consistency(modality_map, burt)
            statistics[name] = {
                "occupied_units": int(len(np.unique(modality_map.assignment))),
                "polarity_separation": separation,
                "baseline_mean": float(np.mean(baseline)),
                "baseline_std": float(np.std(baseline)),
                "spearman_rho": rho,
                "spearman_pvalue": pvalue,
                "init_fallback": modality_map.model.provenance.get(
                    "init_fallback", False
                ),
            }
            log.info(
                "%s: polarity separation %.3f (baseline %.3f).",
                name,
                separation,
                statistics[name]["baseline_mean"],
            )
        write_json(statistics, directory / "separation.json")
        write_metadata(
            directory,
            "map_modalities",
            config,
            {
                "n_records": len(dataset),
                "dropped_records": dataset.dropped,
                "dropped_modalities": n_empty,
            },
        )

    model = fit_mca(indicator)
    with artifact_dir(config.out, "mca") as mca_directory:
        eigenvalues = pd.DataFrame(
            {
                "axis": np.arange(1, model.n_axes + 1),
                "eigenvalue": model.eigenvalues,
                "share": explained_inertia(model),
            }
        )
        write_csv(eigenvalues, mca_directory / "eigenvalues.csv", False)
        write_csv(
            coordinates(model, "modalities"), mca_directory / "modality_coords.csv"
        )
        write_csv(
            coordinates(model, "observations"),
            mca_directory / "observation_coords.csv",
        )
        write_metadata(
            mca_directory,
            "map_modalities",
            config,
            {
                "mca_variant": model.variant,
                "total_inertia": model.total_inertia,
                "n_axes": model.n_axes,
            },
        )
    record_run(config, "map_modalities", ["modalities", "mca"])
    return Path(config.out) / "modalities"
