"""JSON (de)serialisation of trained maps.

Floats are written with their shortest round-trip representation, so a saved model
loads back bit-identical.
"""

import json
import logging
from pathlib import Path

import numpy as np

from pylivcond.utils._typing import PathLike

from .model import SomConfig, SomModel
from .topology import MapTopology

__all__ = ["save_som", "load_som", "som_to_dict", "som_from_dict"]

log = logging.getLogger(__name__)


def som_to_dict(model: SomModel) -> dict:
    return {
        "topology": str(model.topology),
        "config": model.config.to_dict(),
        "trained": model.trained,
        "provenance": model.provenance,
        "codevectors": model.codevectors.tolist(),
    }


def som_from_dict(content: dict) -> SomModel:
    """Rebuild a model from :func:`som_to_dict` output.

    Raises
    ------
    ValueError
        On a missing key or inconsistent content.
    """
    try:
        return SomModel(
            topology=MapTopology.parse(content["topology"]),
            codevectors=np.asarray(content["codevectors"], dtype=float),
            config=SomConfig.from_dict(content["config"]),
            trained=bool(content["trained"]),
            provenance=dict(content.get("provenance", {})),
        )
    except KeyError as e:
        raise ValueError(f"Missing key {e} in serialised map.") from e


def save_som(model: SomModel, path: PathLike) -> None:
    """Write ``model`` as JSON to ``path``."""
    with Path(path).open("w") as file:
        json.dump(som_to_dict(model), file, indent=1, sort_keys=True)
    log.debug("Saved %s map to %s.", model.topology, path)


def load_som(path: PathLike) -> SomModel:
    """Load a map saved by :func:`save_som`."""
    with Path(path).open("r") as file:
        try:
            content = json.load(file)
        except json.JSONDecodeError as e:
            raise ValueError(f"Cannot parse {path}: {e}") from e
    return som_from_dict(content)
