"""Codebook of the living-conditions items.

The codebook is the schema authority for all coding: it lists the binary items in a
fixed order, the domain each item belongs to, and the labels of its two modalities.
The "negative" modality (having a problem, lacking an item, not being able to
afford) is always coded 1 and the "neutral" one 0.

The default codebook is read from 'pylivcond/constants/data/codebook.json' and holds
26 items over 5 domains:

>>> from pylivcond.survey_data import load_codebook
>>> codebook = load_codebook()
>>> codebook.domain_sizes()
(5, 5, 4, 6, 6)
"""

import json
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from pylivcond.constants import data_file
from pylivcond.utils._typing import PathLike

__all__ = ["Codebook", "Item", "load_codebook", "modality_name"]

log = logging.getLogger(__name__)

_ITEM_KEYS = {
    "code",
    "domain",
    "negative_label",
    "neutral_label",
    "reference_frequency",
}


def modality_name(code: str, value: int) -> str:
    """Return the modality column name of item ``code`` coded ``value`` (0 or 1)."""
    return f"{code}{value}"


@dataclass(frozen=True)
class Item:
    """A binary living-conditions item."""

    variable_code: str
    domain: str
    negative_modality: str
    neutral_modality: str
    reference_frequency: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.variable_code:
            raise ValueError("Item variable code cannot be empty.")
        if self.negative_modality == self.neutral_modality:
            raise ValueError(
                f"Item {self.variable_code!r} has identical negative and neutral "
                + f"labels ({self.negative_modality!r})."
            )
        if self.reference_frequency is not None and not (
            0 <= self.reference_frequency <= 100
        ):
            raise ValueError(
                f"Item {self.variable_code!r}: reference frequency must be a "
                + f"percentage (got {self.reference_frequency})."
            )

    @property
    def modalities(self) -> Tuple[str, str]:
        """Return the (neutral, negative) modality column names."""
        return (
            modality_name(self.variable_code, 0),
            modality_name(self.variable_code, 1),
        )


@dataclass(frozen=True)
class Codebook:
    """Ordered catalog of items grouped in ordered domains."""

    items: Tuple[Item, ...]
    domains: Tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.domains)) != len(self.domains):
            raise ValueError(f"Duplicate domain names in {list(self.domains)!r}.")
        codes = [item.variable_code for item in self.items]
        duplicates = sorted({c for c in codes if codes.count(c) > 1})
        if duplicates:
            raise ValueError(f"Duplicate item variable codes: {duplicates!r}.")
        for item in self.items:
            if item.domain not in self.domains:
                raise ValueError(
                    f"Item {item.variable_code!r} belongs to unknown domain "
                    + f"{item.domain!r}."
                )

    @property
    def codes(self) -> List[str]:
        """Item variable codes in codebook order."""
        return [item.variable_code for item in self.items]

    @property
    def n_items(self) -> int:
        return len(self.items)

    @property
    def modalities(self) -> List[str]:
        """Modality column names: neutral then negative, items in codebook order."""
        return [m for item in self.items for m in item.modalities]

    @property
    def negative_modalities(self) -> List[str]:
        return [item.modalities[1] for item in self.items]

    def item(self, code: str) -> Item:
        """Return the item with variable code ``code``."""
        for item in self.items:
            if item.variable_code == code:
                return item
        raise KeyError(f"Unknown item variable code {code!r}.")

    def domain_items(self, domain: str) -> List[str]:
        """Return the codes of the items belonging to ``domain``."""
        if domain not in self.domains:
            raise KeyError(f"Unknown domain {domain!r}.")
        return [item.variable_code for item in self.items if item.domain == domain]

    def domain_sizes(self) -> Tuple[int, ...]:
        """Return the number of items per domain, in domain order."""
        return tuple(len(self.domain_items(d)) for d in self.domains)

    def modality_labels(self) -> Dict[str, str]:
        """Map every modality column name to its human-readable label."""
        labels = {}
        for item in self.items:
            neutral, negative = item.modalities
            labels[neutral] = item.neutral_modality
            labels[negative] = item.negative_modality
        return labels

    def modality_polarity(self) -> Dict[str, int]:
        """Map every modality column name to its coding (0 neutral, 1 negative)."""
        return {m: i % 2 for i, m in enumerate(self.modalities)}

    def reference_frequencies(self) -> Dict[str, Optional[float]]:
        """Map item codes to their reference negative frequency (percent)."""
        return {item.variable_code: item.reference_frequency for item in self.items}

    def to_dict(self) -> dict:
        """Return the codebook as its JSON document."""
        items = []
        for item in self.items:
            entry = {
                "code": item.variable_code,
                "domain": item.domain,
                "negative_label": item.negative_modality,
                "neutral_label": item.neutral_modality,
            }
            if item.reference_frequency is not None:
                entry["reference_frequency"] = item.reference_frequency
            items.append(entry)
        return {"items": items, "domains": list(self.domains)}


def _parse_codebook(content: dict) -> Codebook:
    """Build a :class:`Codebook` from its parsed JSON document."""
    if not isinstance(content, dict) or set(content) != {"items", "domains"}:
        raise ValueError(
            "Codebook document must be an object with exactly the keys "
            + "'items' and 'domains'."
        )
    items = []
    for entry in content["items"]:
        unknown = set(entry) - _ITEM_KEYS
        if unknown:
            raise ValueError(f"Unknown codebook item keys: {sorted(unknown)!r}.")
        try:
            items.append(
                Item(
                    variable_code=str(entry["code"]),
                    domain=str(entry["domain"]),
                    negative_modality=str(entry["negative_label"]),
                    neutral_modality=str(entry["neutral_label"]),
                    reference_frequency=entry.get("reference_frequency"),
                )
            )
        except KeyError as e:
            raise ValueError(f"Codebook item is missing the key {e}.") from e
    return Codebook(items=tuple(items), domains=tuple(content["domains"]))


def load_codebook(path: Optional[PathLike] = None) -> Codebook:
    """Load a codebook JSON document.

    Parameters
    ----------
    path
        Path to the codebook JSON file. Defaults to the shipped codebook
        reproducing the 26 items of the survey.

    Returns
    -------
    codebook : Codebook

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    ValueError
        If the document does not parse or violates the codebook invariants.
    """
    file = data_file("codebook.json") if path is None else path
    log.debug("Load codebook from %s", file)
    with open(file, "r") as f:
        try:
            content = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Codebook {file} is not valid JSON: {e}") from e
    return _parse_codebook(content)
