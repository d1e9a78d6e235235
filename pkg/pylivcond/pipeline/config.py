"""
Provide the :class:`PipelineConfig` dataclass tree and :func:`load_config`.

A configuration is a YAML document whose top-level keys are ``data``, ``codebook``,
``out``, ``seed`` and one section per analysis, e.g.:

.. code:: yaml

   data: households.csv
   seed: 1
   modalities:
     topologies: [string-10, grid-10x10]
     som: {iterations: 20000}
   mca:
     axes: null            # all axes; an int count or a float inertia fraction
   households:
     topology: grid-8x8
     k: 5
     groups: [[0], [1, 2], [3, 4]]
     group_labels: [A, B, C]
     weighting: unit       # or 'size'
     linkage: ward
   scores:
     topology: string-5
   threshold:
     target_rate: computed # or a percentage
     distribution: data    # or 'reference', or a YAML file of weights

Every key is optional; unknown keys raise a ``ValueError``. The ``som`` sections take
the fields of :class:`pylivcond.som.SomConfig` except ``seed``: all randomness derives
from the top-level seed.
"""

import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import yaml

from pylivcond.som import MapTopology, SomConfig
from pylivcond.superclass import LINKAGES
from pylivcond.utils._typing import PathLike

__all__ = [
    "HouseholdsConfig",
    "MCAConfig",
    "ModalitiesConfig",
    "PipelineConfig",
    "ScoresConfig",
    "ThresholdConfig",
    "load_config",
]

log = logging.getLogger(__name__)

_WEIGHTINGS = ["unit", "size"]


def _check_keys(cls, content: Dict[str, Any], section: str) -> None:
    if not isinstance(content, dict):
        raise ValueError(f"Section {section!r} must be a mapping.")
    unknown = set(content) - {f.name for f in fields(cls)}
    if unknown:
        raise ValueError(
            f"Unknown configuration key(s) in {section!r}: {sorted(unknown)!r}."
        )


def _som(content: Optional[Dict[str, Any]], section: str) -> SomConfig:
    content = content or {}
    if "seed" in content:
        raise ValueError(
            f"'{section}.som' cannot set a seed; use the top-level 'seed' key."
        )
    return SomConfig.from_dict(content)


def _som_dict(config: SomConfig) -> Dict[str, Any]:
    content = config.to_dict()
    content.pop("seed")
    return content


@dataclass(frozen=True)
class ModalitiesConfig:
    topologies: Tuple[str, ...] = ("string-10", "grid-10x10")
    som: SomConfig = SomConfig()
    permutations: int = 1000

    def __post_init__(self):
        for topology in self.topologies:
            MapTopology.parse(topology)
        if self.permutations < 1:
            raise ValueError("'modalities.permutations' must be >= 1.")


@dataclass(frozen=True)
class MCAConfig:
    axes: Optional[Union[int, float]] = None


@dataclass(frozen=True)
class HouseholdsConfig:
    topology: str = "grid-8x8"
    som: SomConfig = SomConfig()
    k: int = 5
    groups: Optional[Tuple[Tuple[int, ...], ...]] = ((0,), (1, 2), (3, 4))
    group_labels: Optional[Tuple[str, ...]] = ("A", "B", "C")
    weighting: str = "unit"
    linkage: str = "ward"

    def __post_init__(self):
        MapTopology.parse(self.topology)
        if self.weighting not in _WEIGHTINGS:
            raise ValueError(
                f"Provided weighting ({self.weighting!r}) is not valid."
                + f" Accepted values are in {_WEIGHTINGS!r}."
            )
        if self.linkage not in LINKAGES:
            raise ValueError(
                f"Provided linkage ({self.linkage!r}) is not valid."
                + f" Accepted values are in {LINKAGES!r}."
            )
        if self.group_labels is not None and self.groups is not None:
            if len(self.group_labels) != len(self.groups):
                raise ValueError("'households.group_labels' must match the groups.")


@dataclass(frozen=True)
class ScoresConfig:
    topology: str = "string-5"
    som: SomConfig = SomConfig()

    def __post_init__(self):
        MapTopology.parse(self.topology)


@dataclass(frozen=True)
class ThresholdConfig:
    target_rate: Union[str, float] = "computed"
    distribution: str = "data"

    def __post_init__(self):
        if self.target_rate != "computed":
            if isinstance(self.target_rate, bool) or not isinstance(
                self.target_rate, (int, float)
            ):
                raise ValueError(
                    "'threshold.target_rate' must be 'computed' or a percentage."
                )
            if not 0 <= self.target_rate <= 100:
                raise ValueError("'threshold.target_rate' must be in [0, 100].")


@dataclass(frozen=True)
class PipelineConfig:
    """Configuration of the analysis commands.

    Attributes
    ----------
    data : str, optional
        The household data CSV.
    codebook : str, optional
        The codebook JSON (default: the shipped codebook).
    out : str
        Output root directory.
    seed : int
        The single seed of all random substreams.
    modalities, mca, households, scores, threshold
        One section per analysis.
    """

    data: Optional[str] = None
    codebook: Optional[str] = None
    out: str = "out"
    seed: int = 0
    modalities: ModalitiesConfig = field(default_factory=ModalitiesConfig)
    mca: MCAConfig = field(default_factory=MCAConfig)
    households: HouseholdsConfig = field(default_factory=HouseholdsConfig)
    scores: ScoresConfig = field(default_factory=ScoresConfig)
    threshold: ThresholdConfig = field(default_factory=ThresholdConfig)

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ValueError(f"'seed' must be an integer (got {self.seed!r}).")
        if self.seed < 0:
            raise ValueError(f"'seed' must be non-negative (got {self.seed}).")

    @classmethod
    def from_dict(cls, content: Optional[Dict[str, Any]]) -> "PipelineConfig":
        """Build a configuration from parsed YAML content.

        Raises
        ------
        ValueError
            On unknown keys or invalid values.
        """
        content = dict(content or {})
        _check_keys(cls, content, "<top level>")
        sections = {
            "modalities": ModalitiesConfig,
            "mca": MCAConfig,
            "households": HouseholdsConfig,
            "scores": ScoresConfig,
            "threshold": ThresholdConfig,
        }
        kwargs: Dict[str, Any] = {
            k: v for k, v in content.items() if k not in sections
        }
        for name, section_cls in sections.items():
            section = content.get(name) or {}
            _check_keys(section_cls, section, name)
            section = dict(section)
            if "som" in section:
                section["som"] = _som(section["som"], name)
            if "topologies" in section:
                section["topologies"] = tuple(section["topologies"])
            if section.get("groups") is not None:
                section["groups"] = tuple(tuple(g) for g in section["groups"])
            if section.get("group_labels") is not None:
                section["group_labels"] = tuple(
                    str(label) for label in section["group_labels"]
                )
            kwargs[name] = section_cls(**section)
        return cls(**kwargs)

    def to_dict(self) -> Dict[str, Any]:
        """The configuration as plain YAML/JSON-ready data (echoed in metadata)."""
        content = asdict(self)
        for name in ["modalities", "households", "scores"]:
            content[name]["som"] = _som_dict(getattr(self, name).som)
        content["modalities"]["topologies"] = list(self.modalities.topologies)
        households = content["households"]
        if households["groups"] is not None:
            households["groups"] = [list(g) for g in households["groups"]]
        if households["group_labels"] is not None:
            households["group_labels"] = list(households["group_labels"])
        return content

    def som_config(self, section: str) -> SomConfig:
        """The ``som`` settings of ``section`` with the pipeline seed."""
        return replace(getattr(self, section).som, seed=self.seed)

    def with_overrides(self, **overrides: Any) -> "PipelineConfig":
        """Return a copy with top-level values or ``section__key`` values replaced.

        ``None`` values are ignored, so unset command-line flags can be passed as is,
        e.g. ``config.with_overrides(seed=args.seed, households__k=args.k)``;
        ``<section>__iterations`` sets the iterations of the section's map.
        """
        config = self
        for key, value in overrides.items():
            if value is None:
                continue
            if "__" not in key:
                config = replace(config, **{key: value})
                continue
            name, attribute = key.split("__", 1)
            section = getattr(config, name)
            if attribute == "iterations":
                section = replace(section, som=replace(section.som, iterations=value))
            else:
                section = replace(section, **{attribute: value})
            config = replace(config, **{name: section})
        return config


def load_config(path: Optional[PathLike] = None) -> PipelineConfig:
    """Load a YAML pipeline configuration (defaults only if ``path`` is ``None``).

    Relative ``data`` and ``codebook`` paths are resolved against the directory of
    the configuration file.

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    ValueError
        If the file does not parse or holds unknown keys or invalid values.
    """
    if path is None:
        return PipelineConfig()
    path = Path(path)
    with path.open("r") as file:
        try:
            content = yaml.safe_load(file)
        except yaml.YAMLError as e:
            raise ValueError(f"Cannot parse {path}: {e}") from e
    if content is not None and not isinstance(content, dict):
        raise ValueError(f"{path} must hold a mapping of configuration keys.")
    config = PipelineConfig.from_dict(content)
    resolved = {}
    for key in ["data", "codebook"]:
        value = getattr(config, key)
        if value is not None and not Path(value).is_absolute():
            resolved[key] = str(path.parent / value)
    log.debug("Loaded configuration from %s.", path)
    return replace(config, **resolved)
