"""Multiple correspondence analysis under the chi-square metric.

The analysis is the correspondence analysis (CA) of the indicator matrix ``Z``
(n households x K modalities, Q items): with ``P = Z / (n Q)``, row masses ``r``,
column masses ``c``, the standardised residuals

    S = D_r^{-1/2} (P - r c^T) D_c^{-1/2}

are decomposed by SVD. Eigenvalues are the squared singular values, principal
coordinates are the mass-scaled singular vectors times the singular values.
Centering removes the trivial unit axis, and the total inertia of a complete
disjunctive table is ``(K - Q) / Q``.

Each axis is sign-fixed so that the modality with the largest absolute loading has
a positive coordinate, and singular values below ``1e-10`` times the largest one are
treated as zero.

The module also provides the chi-square scaling of Burt-table row profiles, which
makes the Euclidean distance between scaled rows equal to the chi-square distance
between profiles; it is the input of the modality maps.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from pylivcond.survey_data import BurtTable, IndicatorMatrix

__all__ = [
    "MCA_VARIANT",
    "CorrespondenceModel",
    "coordinates",
    "correspondence_analysis",
    "explained_inertia",
    "fit_mca",
    "observation_coords_from_modalities",
    "scaled_burt_profiles",
]

log = logging.getLogger(__name__)

MCA_VARIANT = "CA of the indicator matrix, principal coordinates"
RANK_TOLERANCE = 1e-10
_FRACTION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class CorrespondenceModel:
    """Fitted correspondence analysis.

    Attributes
    ----------
    row_masses : ndarray, shape (n,)
    col_masses : ndarray, shape (K,)
    eigenvalues : ndarray, shape (A,)
        Non-trivial eigenvalues, descending.
    modality_coords : ndarray, shape (K, A)
        Column principal coordinates.
    observation_coords : ndarray, shape (n, A)
        Row principal coordinates.
    total_inertia : float
    modalities : tuple of str
    ids : tuple of str
    n_items : int
    """

    row_masses: np.ndarray
    col_masses: np.ndarray
    eigenvalues: np.ndarray
    modality_coords: np.ndarray
    observation_coords: np.ndarray
    total_inertia: float
    modalities: Tuple[str, ...]
    ids: Tuple[str, ...]
    n_items: int
    variant: str = MCA_VARIANT

    @property
    def n_axes(self) -> int:
        return len(self.eigenvalues)


def correspondence_analysis(
    table: np.ndarray,
    row_labels: Optional[Sequence[str]] = None,
    col_labels: Optional[Sequence[str]] = None,
    n_items: int = 1,
) -> CorrespondenceModel:
    """Correspondence analysis of a non-negative two-way ``table``.

    Parameters
    ----------
    table
        Non-negative matrix without zero rows or columns.
    row_labels, col_labels
        Optional labels (default: positions as strings).
    n_items
        Number of items, recorded in the model (1 for a plain contingency table).

    Raises
    ------
    ValueError
        If ``table`` has negative entries, zero rows or zero columns.
    RuntimeError
        If the table has no non-trivial axis (e.g. all rows proportional).
    """
    table = np.asarray(table, dtype=float)
    if table.ndim != 2:
        raise ValueError("Correspondence analysis needs a two-way table.")
    if np.any(table < 0):
        raise ValueError("All values of the table should be non-negative.")
    row_sums, col_sums = table.sum(axis=1), table.sum(axis=0)
    if np.any(col_sums == 0):
        empty = [i for i, v in enumerate(col_sums) if v == 0]
        raise ValueError(f"Zero-frequency column(s) at position(s) {empty!r}.")
    if np.any(row_sums == 0):
        raise ValueError("The table has zero rows.")

    p = table / table.sum()
    r = p.sum(axis=1)
    c = p.sum(axis=0)
    s_matrix = (p - np.outer(r, c)) / np.sqrt(r)[:, None] / np.sqrt(c)[None, :]

    u, s, vt = np.linalg.svd(s_matrix, full_matrices=False)
    if s.size == 0 or s[0] <= RANK_TOLERANCE:
        raise RuntimeError("The table has no non-trivial axis.")
    keep = s > RANK_TOLERANCE * s[0]
    u, s, v = u[:, keep], s[keep], vt[keep].T

    col_coords = v * s / np.sqrt(c)[:, None]
    for axis in range(len(s)):
        j = int(np.argmax(np.abs(col_coords[:, axis])))
        if col_coords[j, axis] < 0:
            u[:, axis] *= -1
            col_coords[:, axis] *= -1
    row_coords = u * s / np.sqrt(r)[:, None]

    n, k = table.shape
    return CorrespondenceModel(
        row_masses=r,
        col_masses=c,
        eigenvalues=s**2,
        modality_coords=col_coords,
        observation_coords=row_coords,
        total_inertia=float(np.sum(s_matrix**2)),
        modalities=tuple(col_labels or [str(j) for j in range(k)]),
        ids=tuple(row_labels or [str(i) for i in range(n)]),
        n_items=n_items,
    )


def fit_mca(indicator: IndicatorMatrix, q: Optional[int] = None) -> CorrespondenceModel:
    """Fit the multiple correspondence analysis of an indicator matrix.

    Parameters
    ----------
    indicator
        The disjunctive table; zero-frequency modalities must have been dropped
        upstream (see :func:`pylivcond.survey_data.drop_empty_modalities`).
    q
        Item count (default: ``indicator.n_items``); every row must sum to it.

    Returns
    -------
    model : CorrespondenceModel

    Raises
    ------
    ValueError
        If there are fewer than 2 households, a zero-frequency modality column, or
        rows not summing to ``q``.
    """
    q = indicator.n_items if q is None else q
    n = indicator.values.shape[0]
    if n < 2:
        raise ValueError(f"MCA needs at least 2 households (got {n}).")
    counts = indicator.column_counts()
    if np.any(counts == 0):
        empty = [m for m, v in zip(indicator.modalities, counts) if v == 0]
        raise ValueError(f"Zero-frequency modality column(s): {empty!r}.")
    if np.any(indicator.values.sum(axis=1) != q):
        raise ValueError(f"Indicator rows must sum to the item count ({q}).")

    model = correspondence_analysis(
        indicator.values,
        row_labels=indicator.ids,
        col_labels=indicator.modalities,
        n_items=q,
    )
    log.info(
        "MCA fitted: %i axes, total inertia %.6f, first eigenvalue %.4f.",
        model.n_axes,
        model.total_inertia,
        model.eigenvalues[0],
    )
    return model


def explained_inertia(model: CorrespondenceModel) -> np.ndarray:
    """Share of the total inertia carried by each retained axis."""
    return model.eigenvalues / model.total_inertia


def _n_axes(model: CorrespondenceModel, k: Union[int, float, None]) -> int:
    """Resolve an axis count or a cumulative inertia fraction into an axis count."""
    if k is None:
        return model.n_axes
    if isinstance(k, bool):
        raise ValueError("Axis selection cannot be a boolean.")
    if isinstance(k, (int, np.integer)):
        if not 1 <= k <= model.n_axes:
            raise ValueError(
                f"Axis count must be in [1, {model.n_axes}] (got {k})."
            )
        return int(k)
    if not 0 < k <= 1:
        raise ValueError(f"Inertia fraction must be in (0, 1] (got {k}).")
    shares = np.cumsum(model.eigenvalues) / np.sum(model.eigenvalues)
    return int(np.argmax(shares >= k - _FRACTION_TOLERANCE)) + 1


def coordinates(
    model: CorrespondenceModel,
    side: Literal["observations", "modalities"],
    k: Union[int, float, None] = None,
) -> pd.DataFrame:
    """Return the first principal coordinates of one side of the analysis.

    Parameters
    ----------
    model
        A fitted model.
    side
        ``"observations"`` or ``"modalities"``.
    k
        Number of axes (int), or cumulative inertia fraction in (0, 1] (float):
        the smallest number of axes whose cumulative eigenvalue share reaches it.
        ``None`` keeps every axis.

    Raises
    ------
    ValueError
        If ``side`` is unknown or ``k`` is out of range.
    """
    n_axes = _n_axes(model, k)
    columns = [f"axis{a + 1}" for a in range(n_axes)]
    if side == "observations":
        return pd.DataFrame(
            model.observation_coords[:, :n_axes],
            index=pd.Index(model.ids, name="ID"),
            columns=columns,
        )
    if side == "modalities":
        return pd.DataFrame(
            model.modality_coords[:, :n_axes],
            index=pd.Index(model.modalities, name="modality"),
            columns=columns,
        )
    raise ValueError(
        f"Provided `side` ({side!r}) is not valid."
        + " Accepted values are in ['observations', 'modalities']."
    )


def observation_coords_from_modalities(
    model: CorrespondenceModel, indicator: IndicatorMatrix
) -> np.ndarray:
    """Recover observation coordinates from modality coordinates.

    Implements the transition relation
    ``F[i, s] = (1 / sqrt(lambda_s)) * sum_j (z_ij / Q) * G[j, s]``.
    """
    z = indicator.values.astype(float) / model.n_items
    return (z @ model.modality_coords) / np.sqrt(model.eigenvalues)


def scaled_burt_profiles(burt: BurtTable) -> pd.DataFrame:
    """Scale the Burt-table row profiles for the chi-square metric.

    Row ``j`` becomes ``(B[j, :] / B[j, +]) / sqrt(c)`` where
    ``c[l] = B[+, l] / B[+, +]`` is the column mass, so that Euclidean distances
    between output rows equal chi-square distances between Burt row profiles.

    Raises
    ------
    ValueError
        If a modality has zero frequency.
    """
    values = burt.values.astype(float)
    row_totals = values.sum(axis=1)
    if np.any(row_totals == 0):
        empty = [m for m, v in zip(burt.modalities, row_totals) if v == 0]
        raise ValueError(f"Zero-frequency modality row(s): {empty!r}.")
    col_masses = values.sum(axis=0) / values.sum()
    profiles = values / row_totals[:, None] / np.sqrt(col_masses)[None, :]
    return pd.DataFrame(
        profiles, index=list(burt.modalities), columns=list(burt.modalities)
    )
