"""Characterisation of household classes by their descriptors.

A profile gives, for each class (and merged groups of classes) and for the whole
sample ("All"), the class size share, the shares of the categorical descriptor
levels, the means of the numeric descriptors and scores, the poverty rate and the
proportions of negative responses per item. Over-represented characteristics are
detected with the hypergeometric v-test, ``|v| >= 2``.

Incomes are compared per consumption unit, with the ``1 - 0.5 - 0.3`` equivalence
scale: 1 for the first adult, 0.5 per other person aged 17 or over, 0.3 per person
under 17. A household is poor when its income per consumption unit is below half
the median over households.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from pylivcond.survey_data import DESCRIPTOR_LEVELS, Dataset, HouseholdRecord

__all__ = [
    "ADULT_AGE",
    "FIGURE_ORDER",
    "ClassProfile",
    "OverrepFlag",
    "class_profile",
    "consumption_units",
    "equivalized_income",
    "equivalized_incomes",
    "overrepresentation",
    "poverty_flags",
    "poverty_from_incomes",
    "profile_variables",
    "standardized_partial_means",
]

log = logging.getLogger(__name__)

ADULT_AGE = 17
POVERTY_FRACTION = 0.5
V_THRESHOLD = 2.0
UNDEFINED = "undefined"
ALL = "All"
FIGURE_ORDER = (
    "dwelling-comfort",
    "dwelling-problems",
    "environment",
    "deprivations",
    "durables",
)

SIZE_BLOCK = "Size"
MEAN_BLOCK = "Means"
POVERTY_BLOCK = "Poverty"
ITEM_BLOCK = "Items"
_NUMERIC = {
    "NBTOT": "Number of persons",
    "NB17": "Persons under 17",
    "AGEM": "Mean age of adults",
    "REVUC": "Income per CU",
}


def consumption_units(n_persons, n_children):
    """Consumption units of households with ``n_persons`` of whom ``n_children``
    are under 17; a household without adult counts its first child as 1."""
    n_persons = np.asarray(n_persons, dtype=float)
    n_children = np.asarray(n_children, dtype=float)
    adults = n_persons - n_children
    return np.where(
        adults >= 1,
        1 + 0.5 * (adults - 1) + 0.3 * n_children,
        1 + 0.3 * (n_children - 1),
    )


def equivalized_income(record: HouseholdRecord) -> float:
    """Monthly income per consumption unit of a household.

    Raises
    ------
    ValueError
        If the income is missing or the household has no person.
    """
    bundle = record.descriptors
    if bundle is None or bundle.monthly_income is None:
        raise ValueError(f"Household {record.id!r} has no income.")
    if bundle.n_persons is None or bundle.n_persons < 1:
        raise ValueError(f"Household {record.id!r} has no person.")
    children = bundle.n_children_under17 or 0
    return float(bundle.monthly_income / consumption_units(bundle.n_persons, children))


def equivalized_incomes(dataset: Dataset) -> pd.Series:
    """Income per consumption unit of every household (``NaN`` if unknown)."""
    descriptors = dataset.descriptors
    if descriptors is None or not {"REV", "NBTOT"} <= set(descriptors.columns):
        raise ValueError("Equivalized incomes need the 'REV' and 'NBTOT' descriptors.")
    persons = descriptors["NBTOT"].where(descriptors["NBTOT"] >= 1)
    children = descriptors["NB17"] if "NB17" in descriptors else 0.0
    units = consumption_units(persons, children)
    return pd.Series(descriptors["REV"] / units, index=descriptors.index, name="REVUC")


def poverty_from_incomes(incomes: pd.Series) -> Tuple[pd.Series, float]:
    """Poverty flags (income below half the median) and poverty rate in percent.

    Raises
    ------
    ValueError
        If ``incomes`` is empty or holds missing values.
    """
    incomes = pd.Series(incomes, dtype=float)
    if incomes.empty or incomes.isna().any():
        raise ValueError("Poverty needs a non-empty set of known incomes.")
    threshold = POVERTY_FRACTION * incomes.median()
    flags = (incomes < threshold).rename("POOR")
    return flags, float(100 * flags.mean())


def poverty_flags(dataset: Dataset) -> Tuple[pd.Series, float]:
    """Poverty flags of the households of ``dataset`` and the poverty rate (%)."""
    flags, rate = poverty_from_incomes(equivalized_incomes(dataset))
    log.info("Monetary poverty rate: %.2f%%.", rate)
    return flags, rate


def profile_variables(
    dataset: Dataset, scores: Optional[pd.DataFrame] = None
) -> Tuple[pd.DataFrame, Dict[str, str]]:
    """Per-household variables entering a profile.

    Returns
    -------
    variables : DataFrame
        Indexed like ``dataset``, with ``(block, variable)`` columns: one 0/1 column
        per level of each categorical descriptor, the numeric descriptors with the
        income per consumption unit, the scores, the poverty flag and the item
        responses. Unknown descriptor values are ``NaN``.
    kinds : dict
        ``block -> 'share' | 'mean'``.
    """
    columns: Dict[Tuple[str, str], pd.Series] = {}
    kinds: Dict[str, str] = {}
    poor: Optional[pd.Series] = None
    descriptors = dataset.descriptors
    if descriptors is not None:
        for code, levels in DESCRIPTOR_LEVELS.items():
            if code in descriptors:
                values = descriptors[code]
                for level, label in levels.items():
                    columns[(code, label)] = (values == level).astype(float).where(
                        values.notna()
                    )
                kinds[code] = "share"
        for code in ["NBTOT", "NB17", "AGEM"]:
            if code in descriptors:
                columns[(MEAN_BLOCK, _NUMERIC[code])] = descriptors[code]
        if {"REV", "NBTOT"} <= set(descriptors.columns):
            incomes = equivalized_incomes(dataset)
            columns[(MEAN_BLOCK, _NUMERIC["REVUC"])] = incomes
            if incomes.notna().all() and not incomes.empty:
                poor, _ = poverty_from_incomes(incomes)
    if scores is not None:
        for name in scores.columns:
            label = "Score" if name == "total" else f"Score {name}"
            columns[(MEAN_BLOCK, label)] = scores[name].astype(float)
    if poor is not None:
        columns[(POVERTY_BLOCK, "Poor households")] = poor.astype(float)
        kinds[POVERTY_BLOCK] = "share"
    if any(block == MEAN_BLOCK for block, _ in columns):
        kinds[MEAN_BLOCK] = "mean"
    for code in dataset.codebook.codes:
        columns[(ITEM_BLOCK, code)] = dataset.responses[code].astype(float)
    kinds[ITEM_BLOCK] = "share"

    variables = pd.DataFrame(columns, index=dataset.ids)
    variables.columns = pd.MultiIndex.from_tuples(
        variables.columns, names=["block", "variable"]
    )
    return variables, kinds


@dataclass(frozen=True, eq=False)
class ClassProfile:
    """Per-class statistics of the profile variables.

    Attributes
    ----------
    table : DataFrame
        Rows ``(block, variable)`` with a leading ``('Size', 'Share (%)')`` row;
        one column per class, then merged groups after their last member, then
        ``'All'``. Shares are percents. Empty classes hold ``NaN``.
    sizes : Series
        Number of households per column.
    kinds : dict
        ``block -> 'share' | 'mean'``.
    variables : DataFrame
        The per-household variables the table summarises.
    members : dict
        ``column -> boolean mask`` over the households.
    classes : list of str
        The class columns (excluding groups and ``'All'``).
    """

    table: pd.DataFrame
    sizes: pd.Series
    kinds: Dict[str, str]
    variables: pd.DataFrame
    members: Dict[str, np.ndarray]
    classes: List[str] = field(default_factory=list)

    def to_frame(
        self, header: Optional[Mapping[str, str]] = None, include_all: bool = True
    ) -> pd.DataFrame:
        """The table, optionally with a top header level (e.g. regroup labels)."""
        table = self.table if include_all else self.table.drop(columns=ALL)
        if header is None:
            return table.copy()
        table = table.copy()
        table.columns = pd.MultiIndex.from_tuples(
            [(header.get(c, ""), c) for c in table.columns]
        )
        return table


def _column_order(
    classes: Sequence[str], groups: Mapping[str, Sequence[str]]
) -> List[str]:
    """Classes in order, each group right after its last member."""
    position = {c: i for i, c in enumerate(classes)}
    order = []
    for klass in classes:
        order.append(klass)
        for name, members in groups.items():
            if max(position[m] for m in members) == position[klass]:
                order.append(name)
    return order


def _summary(values: pd.DataFrame, kinds: Mapping[str, str]) -> pd.Series:
    means = values.mean(axis=0, skipna=True)
    shares = means.index.get_level_values("block").map(
        lambda b: kinds.get(b) == "share"
    )
    return means.where(~np.asarray(shares), means * 100)


def class_profile(
    assignment: Sequence,
    dataset: Dataset,
    scores: Optional[pd.DataFrame] = None,
    classes: Optional[Sequence] = None,
    groups: Optional[Mapping[str, Sequence]] = None,
) -> ClassProfile:
    """Profile the classes of ``assignment`` over ``dataset``.

    Parameters
    ----------
    assignment
        Class of each household, in dataset order; converted to strings.
    dataset
        The households, with their descriptors.
    scores
        Optional score table (see :func:`pylivcond.scores.score_table`).
    classes
        All classes to report, in order (default: sorted observed classes); classes
        without members are kept with ``NaN`` statistics.
    groups
        Merged columns, e.g. ``{'2+3': ['2', '3']}``.

    Raises
    ------
    ValueError
        If ``assignment`` does not cover the dataset or a group names an unknown
        class.
    """
    labels = np.asarray([str(a) for a in assignment])
    if len(labels) != len(dataset):
        raise ValueError(
            f"Assignment covers {len(labels)} households, dataset has {len(dataset)}."
        )
    if classes is None:
        classes = sorted(set(labels), key=lambda c: (len(c), c))
    classes = [str(c) for c in classes]
    unknown = set(labels) - set(classes)
    if unknown:
        raise ValueError(f"Assigned classes {sorted(unknown)!r} are not reported.")
    groups = {str(k): [str(m) for m in v] for k, v in (groups or {}).items()}
    for name, group in groups.items():
        if not set(group) <= set(classes):
            raise ValueError(f"Group {name!r} names unknown classes {group!r}.")

    variables, kinds = profile_variables(dataset, scores)
    members = {c: labels == c for c in classes}
    members.update({g: np.isin(labels, m) for g, m in groups.items()})
    members[ALL] = np.ones(len(labels), dtype=bool)

    columns = _column_order(classes, groups) + [ALL]
    n_total = len(labels)
    summaries, sizes = {}, {}
    for column in columns:
        mask = members[column]
        sizes[column] = int(mask.sum())
        summaries[column] = _summary(variables[mask], kinds)
    table = pd.DataFrame(summaries)[columns]
    size_row = pd.DataFrame(
        [[100 * sizes[c] / n_total if n_total else np.nan for c in columns]],
        index=pd.MultiIndex.from_tuples([(SIZE_BLOCK, "Share (%)")]),
        columns=columns,
    )
    table = pd.concat([size_row, table])
    table.index.names = ["block", "variable"]
    empty = [c for c in classes if sizes[c] == 0]
    if empty:
        log.warning("Class(es) without members: %s.", ", ".join(empty))
    return ClassProfile(
        table=table,
        sizes=pd.Series(sizes)[columns],
        kinds=kinds,
        variables=variables,
        members=members,
        classes=classes,
    )


@dataclass(frozen=True)
class OverrepFlag:
    """v-test of one characteristic in one class.

    ``v_value`` is ``NaN`` and ``marker`` is ``'undefined'`` when the test is
    degenerate (zero variance, empty or full class).
    """

    klass: str
    block: str
    descriptor: str
    v_value: float
    flagged: bool
    marker: Optional[str] = None

    def as_dict(self):
        return {
            "class": self.klass,
            "block": self.block,
            "descriptor": self.descriptor,
            "v_value": None if np.isnan(self.v_value) else self.v_value,
            "flagged": self.flagged,
            "marker": self.marker,
        }


def _v_share(n_k: float, p_k: float, n: float, p: float) -> float:
    denominator = n_k * p * (1 - p) * (n - n_k) / (n - 1) if n > 1 else 0.0
    if not denominator > 0:
        return np.nan
    return (n_k * p_k - n_k * p) / np.sqrt(denominator)


def _v_mean(n_k: float, mean_k: float, n: float, mean: float, var: float) -> float:
    denominator = (n - n_k) / (n - 1) * var / n_k if n > 1 and n_k > 0 else 0.0
    if not denominator > 0:
        return np.nan
    return (mean_k - mean) / np.sqrt(denominator)


def _check_profile_inputs(
    profile: ClassProfile, dataset: Optional[Dataset], assignment: Optional[Sequence]
) -> None:
    if dataset is not None and not profile.variables.index.equals(dataset.ids):
        raise ValueError("The profile was not computed over this dataset.")
    if assignment is not None:
        labels = np.asarray([str(a) for a in assignment])
        if len(labels) != len(profile.variables) or any(
            not np.array_equal(labels == c, profile.members[c]) for c in profile.classes
        ):
            raise ValueError("The profile was not computed from this assignment.")


def overrepresentation(
    profile: ClassProfile,
    dataset: Optional[Dataset] = None,
    assignment: Optional[Sequence] = None,
    threshold: float = V_THRESHOLD,
) -> List[OverrepFlag]:
    """v-tests of every characteristic of every class and merged group of a profile.

    Shares use ``v = (n_k p_k - n_k p) / sqrt(n_k p (1 - p) (N - n_k) / (N - 1))``,
    means ``v = (mean_k - mean) / sqrt((N - n_k) / (N - 1) * s^2 / n_k)`` with the
    population variance ``s^2``; only households with a known value count.
    A characteristic is flagged when ``|v| >= threshold``.

    ``dataset`` and ``assignment``, when given, are checked against the households
    and classes the profile was computed from.

    Raises
    ------
    ValueError
        If ``dataset`` or ``assignment`` does not match the profile.
    """
    _check_profile_inputs(profile, dataset, assignment)
    flags = []
    variables = profile.variables
    known = variables.notna()
    n_all = known.sum(axis=0)
    mean_all = variables.mean(axis=0)
    var_all = variables.var(axis=0, ddof=0)
    for column in profile.table.columns:
        if column == ALL:
            continue
        mask = profile.members[column]
        n_k = known[mask].sum(axis=0)
        mean_k = variables[mask].mean(axis=0)
        for key in variables.columns:
            block, descriptor = key
            if profile.kinds.get(block) == "share":
                v = _v_share(n_k[key], mean_k[key], n_all[key], mean_all[key])
            else:
                v = _v_mean(
                    n_k[key], mean_k[key], n_all[key], mean_all[key], var_all[key]
                )
            undefined = bool(np.isnan(v))
            flags.append(
                OverrepFlag(
                    klass=column,
                    block=block,
                    descriptor=descriptor,
                    v_value=float(v),
                    flagged=bool(not undefined and abs(v) >= threshold),
                    marker=UNDEFINED if undefined else None,
                )
            )
    return flags


def standardized_partial_means(
    assignment: Sequence,
    scores: pd.DataFrame,
    classes: Optional[Sequence] = None,
    order: Optional[Sequence[str]] = None,
) -> pd.DataFrame:
    """Standardised class means of the partial scores.

    ``z[c, d] = (mean of d in class c - overall mean of d) / overall std of d``
    with the population standard deviation.

    Parameters
    ----------
    assignment
        Class of each household (converted to strings).
    scores
        Score table; the ``'total'`` column is ignored.
    classes
        Classes to report (default: sorted observed classes); empty ones get NaN.
    order
        Domain order (default: dwelling comfort, dwelling problems, environment,
        deprivations, durables when these domains exist).

    Returns
    -------
    z : DataFrame
        One row per class, one column per domain. Domains with zero overall
        standard deviation get ``z = 0`` and are listed in
        ``z.attrs['undefined']``.
    """
    labels = np.asarray([str(a) for a in assignment])
    domains = [c for c in scores.columns if c != "total"]
    if order is None:
        order = list(FIGURE_ORDER) if set(FIGURE_ORDER) == set(domains) else domains
    if classes is None:
        classes = sorted(set(labels), key=lambda c: (len(c), c))
    classes = [str(c) for c in classes]

    values = scores[list(order)].astype(float)
    mean = values.mean(axis=0)
    std = values.std(axis=0, ddof=0)
    undefined = [d for d in order if not std[d] > 0]
    rows = {}
    for klass in classes:
        mask = labels == klass
        class_mean = values[mask].mean(axis=0)
        z = (class_mean - mean) / std.where(std > 0)
        if mask.any():
            z[undefined] = 0.0
        rows[klass] = z
    result = pd.DataFrame(rows).T[list(order)]
    result.index.name = "class"
    result.attrs["undefined"] = undefined
    if undefined:
        log.warning(
            "Partial score(s) without variance, z set to 0: %s.", ", ".join(undefined)
        )
    return result
