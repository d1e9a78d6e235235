"""Synthetic household data.

Responses are drawn as a mixture of independent Bernoulli items: each household
first draws a latent class from the mixing weights, then each item independently
with the class-conditional negative frequency (class override, else marginal).
Descriptors, when requested, are drawn per class too:

* household type, dwelling type, location and subjective living conditions from
  categorical shares;
* composition from the household type (children counts ``1 + Poisson(lambda)``
  for families with children);
* mean adult age from a clipped normal;
* monthly income as a lognormal income per consumption unit times the number of
  consumption units.

The shipped reference-calibrated spec ('pylivcond/constants/data/synth_reference.json')
reproduces the published item frequencies through five classes carrying the
published super-class proportions and profiles.
"""

import json
import logging
from dataclasses import dataclass, field, fields, replace
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from pylivcond.constants import data_file
from pylivcond.utils._random import substream
from pylivcond.utils._typing import PathLike

from .codebook import Codebook, load_codebook
from .dataset import DESCRIPTOR_LEVELS, Dataset

__all__ = [
    "DescriptorSpec",
    "SynthClass",
    "SynthSpec",
    "generate_synthetic",
    "load_synth_spec",
]

log = logging.getLogger(__name__)

_SHARES_TOLERANCE = 0.01
_WEIGHTS_TOLERANCE = 1e-9
_CATEGORICAL = ("LOGT", "TUR", "TYM", "SLS")

# Household type -> number of adults and whether children are drawn
_COMPOSITION = {
    0: (1, "none"),
    1: (2, "none"),
    2: (2, "at_least_one"),
    3: (1, "at_least_one"),
    4: (3, "any"),
}


def _check_frequency(where: str, value: float) -> float:
    value = float(value)
    if not 0 <= value <= 1:
        raise ValueError(f"Frequency out of [0, 1] for {where}: {value}.")
    return value


@dataclass(frozen=True)
class DescriptorSpec:
    """Descriptor distributions of one latent class (``None`` = inherit)."""

    LOGT: Optional[Tuple[float, ...]] = None
    TUR: Optional[Tuple[float, ...]] = None
    TYM: Optional[Tuple[float, ...]] = None
    SLS: Optional[Tuple[float, ...]] = None
    AGEM: Optional[float] = None
    REVUC: Optional[float] = None
    age_sd: Optional[float] = None
    income_sigma: Optional[float] = None
    children_lambda: Optional[float] = None

    def __post_init__(self) -> None:
        for name in _CATEGORICAL:
            shares = getattr(self, name)
            if shares is None:
                continue
            if len(shares) != len(DESCRIPTOR_LEVELS[name]):
                raise ValueError(
                    f"Descriptor {name!r} needs {len(DESCRIPTOR_LEVELS[name])} "
                    + f"shares (got {len(shares)})."
                )
            if min(shares) < 0 or abs(sum(shares) - 1) > _SHARES_TOLERANCE:
                raise ValueError(
                    f"Descriptor {name!r} shares must be non-negative and sum to 1."
                )
        for name in ["AGEM", "REVUC", "age_sd", "income_sigma", "children_lambda"]:
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"Descriptor parameter {name!r} must be >= 0.")

    def inherit(self, default: "DescriptorSpec") -> "DescriptorSpec":
        """Return a copy where missing entries are taken from ``default``."""
        updates = {
            f.name: getattr(default, f.name)
            for f in fields(self)
            if getattr(self, f.name) is None
        }
        return replace(self, **updates)

    @classmethod
    def from_dict(cls, content: Mapping) -> "DescriptorSpec":
        names = {f.name for f in fields(cls)}
        unknown = set(content) - names
        if unknown:
            raise ValueError(f"Unknown descriptor spec keys: {sorted(unknown)!r}.")
        values = {
            k: (tuple(float(x) for x in v) if k in _CATEGORICAL else float(v))
            for k, v in content.items()
        }
        return cls(**values)


# Fallbacks completing a partial descriptor block
_DEFAULT_DESCRIPTORS = DescriptorSpec(
    LOGT=(0.399, 0.214, 0.134, 0.243, 0.010),
    TUR=(0.277, 0.109, 0.195, 0.285, 0.134),
    TYM=(0.251, 0.263, 0.375, 0.073, 0.038),
    SLS=(0.057, 0.123, 0.296, 0.391, 0.133),
    AGEM=46.7,
    REVUC=7650.0,
    age_sd=14.0,
    income_sigma=0.5,
    children_lambda=0.4,
)


@dataclass(frozen=True)
class SynthClass:
    """A latent class: mixing weight, frequency overrides, descriptor overrides."""

    weight: float
    overrides: Dict[str, float] = field(default_factory=dict)
    descriptors: Optional[DescriptorSpec] = None


@dataclass(frozen=True)
class SynthSpec:
    """Specification of a synthetic dataset.

    Attributes
    ----------
    n : int
        Number of households.
    marginals : dict
        Item code -> negative frequency in [0, 1].
    classes : list of SynthClass
        Optional latent classes; weights must sum to 1.
    descriptors : DescriptorSpec or None
        Descriptor distributions; descriptors are generated only if this block or
        a class-level block is given.
    """

    n: int
    marginals: Dict[str, float]
    classes: List[SynthClass] = field(default_factory=list)
    descriptors: Optional[DescriptorSpec] = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"Number of households must be >= 0 (got {self.n}).")
        for code, freq in self.marginals.items():
            _check_frequency(f"marginal {code!r}", freq)
        for i, cls in enumerate(self.classes):
            if cls.weight < 0:
                raise ValueError(f"Class {i} has a negative weight.")
            for code, freq in cls.overrides.items():
                _check_frequency(f"class {i} override {code!r}", freq)
        if self.classes:
            total = sum(cls.weight for cls in self.classes)
            if abs(total - 1) > _WEIGHTS_TOLERANCE:
                raise ValueError(f"Class weights must sum to 1 (got {total!r}).")

    @property
    def with_descriptors(self) -> bool:
        return self.descriptors is not None or any(
            cls.descriptors is not None for cls in self.classes
        )

    def frequency_matrix(self, codebook: Codebook) -> np.ndarray:
        """Return the (classes x items) matrix of negative frequencies."""
        unknown = set(self.marginals) - set(codebook.codes)
        for cls in self.classes:
            unknown |= set(cls.overrides) - set(codebook.codes)
        if unknown:
            raise ValueError(f"Unknown item codes in spec: {sorted(unknown)!r}.")
        classes = self.classes or [SynthClass(weight=1.0)]
        matrix = np.empty((len(classes), codebook.n_items))
        for c, cls in enumerate(classes):
            for j, code in enumerate(codebook.codes):
                if code in cls.overrides:
                    matrix[c, j] = cls.overrides[code]
                elif code in self.marginals:
                    matrix[c, j] = self.marginals[code]
                else:
                    raise ValueError(f"No frequency given for item {code!r}.")
        return matrix

    @classmethod
    def from_dict(cls, content: Mapping) -> "SynthSpec":
        unknown = set(content) - {"n", "marginals", "classes", "descriptors"}
        if unknown:
            raise ValueError(f"Unknown synthetic spec keys: {sorted(unknown)!r}.")
        classes = []
        for entry in content.get("classes", []):
            extra = set(entry) - {"weight", "overrides", "descriptors"}
            if extra:
                raise ValueError(f"Unknown class keys: {sorted(extra)!r}.")
            classes.append(
                SynthClass(
                    weight=float(entry["weight"]),
                    overrides={
                        k: float(v) for k, v in entry.get("overrides", {}).items()
                    },
                    descriptors=(
                        DescriptorSpec.from_dict(entry["descriptors"])
                        if entry.get("descriptors") is not None
                        else None
                    ),
                )
            )
        descriptors = content.get("descriptors")
        return cls(
            n=int(content["n"]),
            marginals={k: float(v) for k, v in content.get("marginals", {}).items()},
            classes=classes,
            descriptors=(
                DescriptorSpec.from_dict(descriptors)
                if descriptors is not None
                else None
            ),
        )


def load_synth_spec(path: Optional[PathLike] = None) -> SynthSpec:
    """Load a SynthSpec JSON document (defaults to the reference-calibrated spec)."""
    file = data_file("synth_reference.json") if path is None else path
    with open(file, "r") as f:
        try:
            content = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Synthetic spec {file} is not valid JSON: {e}") from e
    return SynthSpec.from_dict(content)


def _draw_categorical(
    rng: np.random.Generator, probabilities: np.ndarray, levels: List[int]
) -> np.ndarray:
    """Draw one level per row of ``probabilities`` (rows normalised here)."""
    probabilities = probabilities / probabilities.sum(axis=1, keepdims=True)
    cumulative = np.cumsum(probabilities, axis=1)
    u = rng.random(len(probabilities))
    idx = np.minimum((u[:, None] >= cumulative).sum(axis=1), len(levels) - 1)
    return np.asarray(levels)[idx]


def _generate_descriptors(
    rng: np.random.Generator, spec: SynthSpec, labels: np.ndarray
) -> pd.DataFrame:
    """Draw the descriptor columns of every household given its latent class."""
    default = (spec.descriptors or DescriptorSpec()).inherit(_DEFAULT_DESCRIPTORS)
    classes = spec.classes or [SynthClass(weight=1.0)]
    per_class = [
        (cls.descriptors or DescriptorSpec()).inherit(default) for cls in classes
    ]

    def param(name: str) -> np.ndarray:
        return np.array([getattr(d, name) for d in per_class], dtype=float)[labels]

    columns = {}
    for name in _CATEGORICAL:
        columns[name] = _draw_categorical(
            rng, param(name), sorted(DESCRIPTOR_LEVELS[name])
        )

    n = len(labels)
    adults = np.array([_COMPOSITION[t][0] for t in columns["TYM"]])
    rule = np.array([_COMPOSITION[t][1] for t in columns["TYM"]])
    extra = rng.poisson(param("children_lambda"), size=n)
    children = np.where(
        rule == "none", 0, np.where(rule == "at_least_one", 1 + extra, extra)
    )
    columns["NBTOT"] = adults + children
    columns["NB17"] = children

    age = rng.normal(param("AGEM"), param("age_sd"), size=n)
    columns["AGEM"] = np.round(np.clip(age, 17.0, 95.0), 1)

    sigma = param("income_sigma")
    mu = np.log(param("REVUC")) - sigma**2 / 2
    per_unit = rng.lognormal(mu, sigma, size=n)
    units = 1 + 0.5 * (adults - 1) + 0.3 * children
    columns["REV"] = np.round(per_unit * units)

    return pd.DataFrame(columns)


def generate_synthetic(
    spec: SynthSpec, seed: int, codebook: Optional[Codebook] = None
) -> Dataset:
    """Generate a synthetic dataset, deterministically given ``seed``.

    Parameters
    ----------
    spec
        The synthetic dataset specification.
    seed
        Seed of the ``synth`` random substream.
    codebook
        Codebook of the items (default: the shipped one).

    Returns
    -------
    dataset : Dataset
        Households with ids ``H000001``...; the latent class of every household is
        kept in ``dataset.responses.attrs["latent_class"]``.

    Raises
    ------
    ValueError
        If frequencies are outside [0, 1], class weights do not sum to 1 or the
        spec names unknown items.
    """
    codebook = codebook or load_codebook()
    rng = substream(seed, "synth")
    frequencies = spec.frequency_matrix(codebook)

    if spec.classes:
        weights = np.array([cls.weight for cls in spec.classes])
        labels = rng.choice(len(spec.classes), size=spec.n, p=weights / weights.sum())
    else:
        labels = np.zeros(spec.n, dtype=np.int64)
    draws = rng.random((spec.n, codebook.n_items))
    responses = (draws < frequencies[labels]).astype(np.int8)

    index = pd.Index([f"H{i + 1:06d}" for i in range(spec.n)], name="ID")
    frame = pd.DataFrame(responses, index=index, columns=codebook.codes)
    descriptors = None
    if spec.with_descriptors:
        descriptors = _generate_descriptors(rng, spec, labels).set_axis(index)

    dataset = Dataset.from_frame(frame, codebook, descriptors=descriptors)
    dataset.responses.attrs["latent_class"] = tuple(labels.tolist())
    log.info(
        "Generated %i synthetic household(s) over %i latent class(es).",
        spec.n,
        max(len(spec.classes), 1),
    )
    return dataset
