"""Generation of a synthetic household data file."""

import logging
import os
from dataclasses import replace
from pathlib import Path
from typing import Optional

from pylivcond.survey_data import (
    Dataset,
    generate_synthetic,
    load_codebook,
    load_synth_spec,
    write_dataset,
)
from pylivcond.utils._typing import PathLike

__all__ = ["cmd_generate"]

log = logging.getLogger(__name__)


def cmd_generate(
    output: PathLike,
    seed: int,
    spec_path: Optional[PathLike] = None,
    n: Optional[int] = None,
    codebook_path: Optional[PathLike] = None,
) -> Dataset:
    """Generate a synthetic dataset and write it as a data CSV.

    Parameters
    ----------
    output
        The CSV file to write; written through a temporary file.
    seed
        Seed of the ``synth`` substream.
    spec_path
        A SynthSpec JSON (default: the reference-calibrated spec).
    n
        Overrides the number of households of the spec.
    codebook_path
        The codebook JSON (default: the shipped codebook).
    """
    spec = load_synth_spec(spec_path)
    if n is not None:
        if n < 0:
            raise ValueError(f"Number of households must be >= 0 (got {n}).")
        spec = replace(spec, n=n)
    dataset = generate_synthetic(spec, seed, load_codebook(codebook_path))

    output = Path(output)
    output.parent.mkdir(parents=True, exist_ok=True)
    tmp = output.with_name(f".{output.name}.tmp")
    try:
        write_dataset(dataset, tmp)
        os.replace(tmp, output)
    finally:
        tmp.unlink(missing_ok=True)
    log.info("Synthetic dataset of %i households written to %s.", len(dataset), output)
    return dataset
