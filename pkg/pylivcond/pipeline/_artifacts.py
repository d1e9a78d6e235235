"""Artifact directories: atomic creation, CSV/JSON writers and run metadata.

An artifact directory is filled in a hidden temporary sibling and renamed into
place once complete, so a failed command leaves no partial directory. Metadata
holds no timestamp: two runs with identical inputs write identical trees.
"""

import contextlib
import json
import logging
import shutil
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Sequence

import numpy as np
import pandas as pd

from pylivcond import VERSION
from pylivcond.mca import MCA_VARIANT, RANK_TOLERANCE
from pylivcond.profiling import ADULT_AGE, POVERTY_FRACTION, V_THRESHOLD
from pylivcond.utils._typing import PathLike

from .config import PipelineConfig

__all__ = [
    "DECISIONS",
    "artifact_dir",
    "record_run",
    "write_csv",
    "write_json",
    "write_metadata",
]

log = logging.getLogger(__name__)

# Modelling decisions in force, echoed in every metadata file
DECISIONS: Dict[str, Any] = {
    "mca_variant": MCA_VARIANT,
    "mca_sign_convention": "largest absolute modality loading is positive",
    "mca_rank_tolerance": RANK_TOLERANCE,
    "som_kernel": "hard step within integer radius",
    "som_grid_metric": "chebyshev",
    "som_schedules": "linear rate and rounded linear radius",
    "som_defaults": {
        "rate_start": 0.5,
        "rate_end": 0.01,
        "radius_start": "ceil(max(dims) / 2)",
        "radius_end": 0,
        "iterations": "100 * n",
    },
    "som_sampling": "with replacement",
    "tie_breaking": "lowest index",
    "modality_map_input": "chi-square scaled Burt profiles",
    "superclass_adjacency": "map distance 1",
    "superclass_ties": "lexicographically smallest cluster pair",
    "threshold_ties": "higher score",
    "threshold_empty_class": "max score + 1",
    "adult_age": ADULT_AGE,
    "equivalence_scale": [1.0, 0.5, 0.3],
    "poverty_line": f"{POVERTY_FRACTION:g} x median income per CU (households)",
    "v_test_threshold": V_THRESHOLD,
    "variance": "population",
}


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def write_json(content: Any, path: PathLike) -> None:
    """Write ``content`` as sorted, indented JSON (non-finite floats as null)."""
    with Path(path).open("w") as file:
        json.dump(_jsonable(content), file, indent=2, sort_keys=True)
        file.write("\n")


def write_csv(frame: pd.DataFrame, path: PathLike, index: bool = True) -> None:
    frame.to_csv(path, index=index)


def write_metadata(
    directory: Path,
    command: str,
    config: PipelineConfig,
    extra: Optional[Dict[str, Any]] = None,
) -> None:
    """Write ``metadata.json``: command, version, seed, config echo and decisions."""
    content = {
        "command": command,
        "version": VERSION,
        "seed": config.seed,
        "config": config.to_dict(),
        "decisions": DECISIONS,
    }
    content.update(extra or {})
    write_json(content, directory / "metadata.json")


def record_run(config: PipelineConfig, command: str, artifacts: Sequence[str]) -> Path:
    """Record ``command`` in the run-level ``out/metadata.json``.

    The file keeps one entry per command with its artifact directories, seed and
    configuration echo. It is rewritten atomically and holds no timestamp.
    """
    path = Path(config.out) / "metadata.json"
    commands: Dict[str, Any] = {}
    if path.exists():
        try:
            commands = json.loads(path.read_text()).get("commands", {})
        except (json.JSONDecodeError, AttributeError) as e:
            log.warning("Unreadable run metadata %s is rewritten (%s).", path, e)
    commands[command] = {
        "artifacts": list(artifacts),
        "seed": config.seed,
        "config": config.to_dict(),
    }
    content = {
        "version": VERSION,
        "decisions": DECISIONS,
        "last_command": command,
        "commands": commands,
    }
    tmp = path.with_name(f".{path.name}.tmp")
    write_json(content, tmp)
    tmp.replace(path)
    return path


@contextlib.contextmanager
def artifact_dir(out: PathLike, name: str) -> Iterator[Path]:
    """Yield a temporary directory renamed to ``out/name`` on success.

    An existing ``out/name`` is replaced; on failure the temporary directory is
    removed and ``out/name`` is left untouched.
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{name}-", dir=out))
    try:
        yield tmp
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    target = out / name
    if target.exists():
        shutil.rmtree(target)
    tmp.rename(target)
    log.info("Artifacts written to %s.", target)
