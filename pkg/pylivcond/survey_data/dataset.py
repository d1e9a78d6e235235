"""Household data model and CSV ingestion.

A data CSV has one row per household: an optional ``ID`` column, one column per
codebook item holding the 0/1 coding, and optional descriptor columns
(see :data:`DESCRIPTOR_COLUMNS`). Only complete records are kept: a household with
any missing item response is dropped at load time and counted.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Tuple

import numpy as np
import pandas as pd

from pylivcond.utils._typing import PathLike

from .codebook import Codebook, load_codebook

__all__ = [
    "DESCRIPTOR_COLUMNS",
    "DESCRIPTOR_LEVELS",
    "Dataset",
    "DescriptorBundle",
    "HouseholdRecord",
    "load_dataset",
    "write_dataset",
]

log = logging.getLogger(__name__)

ID_COLUMN = "ID"

# CSV column -> DescriptorBundle field
DESCRIPTOR_COLUMNS: Dict[str, str] = {
    "TYM": "household_type",
    "LOGT": "dwelling_type",
    "TUR": "location",
    "NBTOT": "n_persons",
    "NB17": "n_children_under17",
    "AGEM": "mean_adult_age",
    "REV": "monthly_income",
    "SLS": "subjective_lc",
}

# Accepted levels of the categorical descriptors, with their labels
DESCRIPTOR_LEVELS: Dict[str, Dict[int, str]] = {
    "LOGT": {
        1: "House, isolated",
        2: "House, in a neighbourhood",
        3: "Structure <10 units",
        4: "Structure >=10 units",
        5: "Other",
    },
    "TUR": {
        0: "Rural town",
        1: "City <10000 inh",
        2: "10000 to <100000 inh",
        3: "100000 to <2000000 inh",
        4: "Paris area",
    },
    "TYM": {
        0: "one person household",
        1: "couple without child",
        2: "couple with child(ren)",
        3: "lone parent family",
        4: "other type",
    },
    "SLS": {
        1: "with great difficulty",
        2: "with difficulty",
        3: "with some difficulty",
        4: "fairly easily",
        5: "easily and very easily",
    },
}


@dataclass(frozen=True)
class DescriptorBundle:
    """General descriptors of a household, used only to profile classes."""

    household_type: Optional[int] = None
    dwelling_type: Optional[int] = None
    location: Optional[int] = None
    n_persons: Optional[int] = None
    n_children_under17: Optional[int] = None
    mean_adult_age: Optional[float] = None
    monthly_income: Optional[float] = None
    subjective_lc: Optional[int] = None


@dataclass(frozen=True)
class HouseholdRecord:
    """A single household: its item responses and optional descriptors."""

    id: str
    responses: Dict[str, int]
    descriptors: Optional[DescriptorBundle] = None


def _validate_descriptors(descriptors: pd.DataFrame) -> None:
    """Raise a ``ValueError`` if ``descriptors`` break the descriptor invariants."""
    unknown = set(descriptors.columns) - set(DESCRIPTOR_COLUMNS)
    if unknown:
        raise ValueError(f"Unknown descriptor columns: {sorted(unknown)!r}.")
    for column in ["NBTOT", "NB17"]:
        if column in descriptors and (descriptors[column] < 0).any():
            raise ValueError(f"Descriptor {column!r} holds negative counts.")
    if {"NBTOT", "NB17"} <= set(descriptors.columns):
        if (descriptors["NB17"] > descriptors["NBTOT"]).any():
            raise ValueError("Descriptor 'NB17' exceeds 'NBTOT' for some records.")
    for column, levels in DESCRIPTOR_LEVELS.items():
        if column in descriptors:
            values = descriptors[column].dropna()
            invalid = sorted(set(values.unique()) - set(levels))
            if invalid:
                raise ValueError(
                    f"Descriptor {column!r} has invalid levels {invalid!r} "
                    + f"(accepted: {sorted(levels)!r})."
                )


@dataclass(frozen=True)
class Dataset:
    """Validated household records.

    Attributes
    ----------
    codebook : Codebook
        The schema the responses follow.
    responses : DataFrame
        One row per household (index: household ids as strings), one ``int8``
        column per item in codebook order, values in {0, 1}.
    descriptors : DataFrame or None
        Descriptor columns (subset of :data:`DESCRIPTOR_COLUMNS`) sharing the index
        of ``responses``; values may be missing.
    dropped : int
        Number of incomplete records dropped at load time.
    """

    codebook: Codebook
    responses: pd.DataFrame
    descriptors: Optional[pd.DataFrame] = None
    dropped: int = 0

    @classmethod
    def from_frame(
        cls,
        responses: pd.DataFrame,
        codebook: Codebook,
        descriptors: Optional[pd.DataFrame] = None,
        dropped: int = 0,
    ) -> "Dataset":
        """Validate ``responses`` (and ``descriptors``) and build a dataset.

        Raises
        ------
        ValueError
            On unknown or missing item columns, missing or non-binary responses,
            duplicate household ids, or invalid descriptors.
        """
        unknown = [c for c in responses.columns if c not in codebook.codes]
        if unknown:
            raise ValueError(f"Unknown item column(s): {unknown!r}.")
        missing = [c for c in codebook.codes if c not in responses.columns]
        if missing:
            raise ValueError(f"Missing item column(s): {missing!r}.")
        responses = responses[codebook.codes]
        if responses.isna().any().any():
            raise ValueError("Responses hold missing values.")
        for code in codebook.codes:
            invalid = sorted(set(responses[code].unique()) - {0, 1})
            if invalid:
                raise ValueError(
                    f"Non-binary response value(s) {invalid!r} in column {code!r}."
                )
        index = responses.index.astype(str)
        duplicated = index[index.duplicated()].unique().to_list()
        if duplicated:
            raise ValueError(f"Duplicate household id(s): {duplicated[:10]!r}.")
        responses = responses.astype(np.int8).set_axis(index, axis=0)
        responses.index.name = ID_COLUMN

        if descriptors is not None:
            descriptors = descriptors.astype(float).set_axis(
                descriptors.index.astype(str), axis=0
            )
            descriptors.index.name = ID_COLUMN
            if not descriptors.index.equals(responses.index):
                raise ValueError("Descriptors and responses indices differ.")
            _validate_descriptors(descriptors)

        return cls(
            codebook=codebook,
            responses=responses,
            descriptors=descriptors,
            dropped=dropped,
        )

    def __len__(self) -> int:
        return len(self.responses)

    @property
    def ids(self) -> pd.Index:
        return self.responses.index

    def record(self, i: int) -> HouseholdRecord:
        """Return the ``i``-th household as a :class:`HouseholdRecord`."""
        row = self.responses.iloc[i]
        bundle = None
        if self.descriptors is not None:
            values = self.descriptors.iloc[i]
            fields = {}
            for column, name in DESCRIPTOR_COLUMNS.items():
                value = values.get(column, np.nan)
                if pd.isna(value):
                    fields[name] = None
                elif column in ("AGEM", "REV"):
                    fields[name] = float(value)
                else:
                    fields[name] = int(value)
            bundle = DescriptorBundle(**fields)
        return HouseholdRecord(
            id=str(row.name),
            responses={code: int(v) for code, v in row.items()},
            descriptors=bundle,
        )

    def __iter__(self) -> Iterator[HouseholdRecord]:
        for i in range(len(self)):
            yield self.record(i)


def _split_missing(responses: pd.DataFrame) -> Tuple[pd.DataFrame, int]:
    """Drop the incomplete records, returning the complete ones and the count."""
    complete = responses.notna().all(axis=1)
    return responses[complete], int((~complete).sum())


def load_dataset(
    data_path: PathLike, codebook_path: Optional[PathLike] = None
) -> Dataset:
    """Load and validate a household data CSV.

    Parameters
    ----------
    data_path
        Path to the data CSV.
    codebook_path
        Path to the codebook JSON (defaults to the shipped codebook).

    Returns
    -------
    dataset : Dataset
        Complete records only; the number of dropped records is in
        ``dataset.dropped``.

    Raises
    ------
    FileNotFoundError
        If a file does not exist.
    ValueError
        On an empty file, unknown columns, non-binary responses or duplicate ids.
    """
    codebook = load_codebook(codebook_path)
    try:
        raw = pd.read_csv(data_path, dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise ValueError(f"No records: {data_path} is empty.") from e

    known = set(codebook.codes) | set(DESCRIPTOR_COLUMNS) | {ID_COLUMN}
    unknown = [c for c in raw.columns if c not in known]
    if unknown:
        raise ValueError(f"Unknown column(s) in {data_path}: {unknown!r}.")
    missing = [c for c in codebook.codes if c not in raw.columns]
    if missing:
        raise ValueError(f"Missing item column(s) in {data_path}: {missing!r}.")

    if ID_COLUMN in raw.columns:
        if raw[ID_COLUMN].isna().any():
            raise ValueError(f"Missing household id(s) in {data_path}.")
        raw = raw.set_index(ID_COLUMN)
    else:
        raw.index = pd.Index([str(i + 1) for i in range(len(raw))], name=ID_COLUMN)
    duplicated = raw.index[raw.index.duplicated()].unique().to_list()
    if duplicated:
        raise ValueError(f"Duplicate household id(s): {duplicated[:10]!r}.")

    responses = raw[codebook.codes].apply(pd.to_numeric, errors="coerce")
    not_numeric = responses.isna() & raw[codebook.codes].notna()
    if not_numeric.any().any():
        column = not_numeric.any().idxmax()
        value = raw.loc[not_numeric[column], column].iloc[0]
        raise ValueError(f"Non-binary response value {value!r} in column {column!r}.")
    for code in codebook.codes:
        invalid = sorted(set(responses[code].dropna().unique()) - {0, 1})
        if invalid:
            raise ValueError(
                f"Non-binary response value(s) {invalid!r} in column {code!r}."
            )

    responses, dropped = _split_missing(responses)
    if dropped:
        log.warning("Dropped %i record(s) with missing item responses.", dropped)

    descriptors = None
    columns = [c for c in DESCRIPTOR_COLUMNS if c in raw.columns]
    if columns:
        descriptors = raw.loc[responses.index, columns]
        numeric = descriptors.apply(pd.to_numeric, errors="coerce")
        bad = numeric.isna() & descriptors.notna()
        if bad.any().any():
            raise ValueError(
                f"Non-numeric descriptor value(s) in column {bad.any().idxmax()!r}."
            )
        descriptors = numeric

    dataset = Dataset.from_frame(
        responses, codebook, descriptors=descriptors, dropped=dropped
    )
    log.info("Loaded %i household record(s) from %s.", len(dataset), data_path)
    return dataset


def write_dataset(dataset: Dataset, path: PathLike) -> None:
    """Write ``dataset`` as a data CSV readable by :func:`load_dataset`."""
    frame = dataset.responses
    if dataset.descriptors is not None:
        descriptors = dataset.descriptors.copy()
        for column in descriptors.columns:
            values = descriptors[column].dropna()
            if (values == values.round()).all():
                descriptors[column] = descriptors[column].astype("Int64")
        frame = pd.concat([frame, descriptors], axis=1)
    frame.to_csv(path, index=True, index_label=ID_COLUMN)
    log.info("Wrote %i household record(s) to %s.", len(dataset), path)
