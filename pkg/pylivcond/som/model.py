"""Kohonen map core: configuration, initialisation, online training and assignment.

Training is the classical online Kohonen algorithm with a hard-step neighbourhood:
at step ``t`` a data row ``x`` is drawn with replacement, its best matching unit
``c`` is found and every unit ``i`` with ``map_distance(c, i) <= r(t)`` moves
towards ``x`` by ``eps(t) * (x - m_i)``. Both the rate and the radius decay
linearly over the ``T`` steps, the radius being rounded to the nearest integer.

Randomness comes from two substreams of the configured seed: ``init`` for the code
vector initialisation and ``order`` for the sequence of presented rows.
"""

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Literal, Optional

import dask.array as da
import numpy as np

from pylivcond.utils._random import substream
from pylivcond.utils._typing import FloatArray, IntArray, LoggerLike

from .topology import MapTopology

__all__ = [
    "SomConfig",
    "SomModel",
    "assign",
    "bmu",
    "class_sizes",
    "init_som",
    "train_online",
]

log = logging.getLogger(__name__)

_INITS = ["sample", "uniform-box"]
_CHUNK_ROWS = 4096


@dataclass(frozen=True)
class SomConfig:
    """Training configuration of a Kohonen map.

    Attributes
    ----------
    iterations : int, optional
        Number of training steps ``T``; ``None`` means ``100 * n``.
    rate_start, rate_end : float
        Learning rate decaying linearly from ``rate_start`` to ``rate_end``, with
        ``0 <= rate_end <= rate_start <= 1``.
    radius_start : int, optional
        Initial neighbourhood radius; ``None`` means ``ceil(max(dims) / 2)``.
    radius_end : int
        Final neighbourhood radius.
    init : {'sample', 'uniform-box'}
        Initialisation of the code vectors.
    seed : int
    """

    iterations: Optional[int] = None
    rate_start: float = 0.5
    rate_end: float = 0.01
    radius_start: Optional[int] = None
    radius_end: int = 0
    init: Literal["sample", "uniform-box"] = "sample"
    seed: int = 0

    def __post_init__(self):
        if self.iterations is not None and self.iterations < 1:
            raise ValueError(f"Iterations must be >= 1 (got {self.iterations}).")
        if not 0 <= self.rate_end <= self.rate_start <= 1:
            raise ValueError(
                "Learning rates must satisfy 0 <= rate_end <= rate_start <= 1 "
                + f"(got {self.rate_start} -> {self.rate_end})."
            )
        if self.radius_end < 0 or (
            self.radius_start is not None and self.radius_start < self.radius_end
        ):
            raise ValueError(
                "Radii must satisfy radius_start >= radius_end >= 0 "
                + f"(got {self.radius_start} -> {self.radius_end})."
            )
        if self.init not in _INITS:
            raise ValueError(
                f"Provided init ({self.init!r}) is not valid."
                + f" Accepted values are in {_INITS!r}."
            )
        if self.seed < 0:
            raise ValueError(f"Seed must be non-negative (got {self.seed}).")

    def resolve(self, topology: MapTopology, n_rows: int) -> "SomConfig":
        """Fill the defaults depending on the map and on the data size."""
        return replace(
            self,
            iterations=self.iterations or max(1, 100 * n_rows),
            radius_start=(
                topology.default_radius()
                if self.radius_start is None
                else self.radius_start
            ),
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, content: Dict[str, Any]) -> "SomConfig":
        """Build a config from a mapping, rejecting unknown keys."""
        unknown = set(content) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"Unknown SOM configuration key(s): {sorted(unknown)!r}.")
        return cls(**content)


@dataclass(frozen=True, eq=False)
class SomModel:
    """A map topology with one code vector per unit.

    Attributes
    ----------
    topology : MapTopology
    codevectors : ndarray, shape (U, d)
    config : SomConfig
        The configuration used (resolved once trained).
    trained : bool
    provenance : dict
        Training facts echoed into artifacts (rows, iterations, fallbacks).
    """

    topology: MapTopology
    codevectors: np.ndarray
    config: SomConfig
    trained: bool = False
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.codevectors.ndim != 2:
            raise ValueError("Code vectors must form a (U, d) matrix.")
        if self.codevectors.shape[0] != self.topology.n_units:
            raise ValueError(
                f"{self.topology} needs {self.topology.n_units} code vectors "
                + f"(got {self.codevectors.shape[0]})."
            )
        if not np.all(np.isfinite(self.codevectors)):
            raise ValueError("Code vectors hold non-finite values.")

    @property
    def n_units(self) -> int:
        return self.topology.n_units

    @property
    def dim(self) -> int:
        return self.codevectors.shape[1]


def _check_data(data: np.ndarray, dim: int, allow_empty: bool = False) -> np.ndarray:
    """Return ``data`` as a float matrix, checking its shape and finiteness."""
    data = np.asarray(data, dtype=float)
    if data.ndim != 2:
        raise ValueError(f"Data must be a 2-D matrix (got {data.ndim} dimension(s)).")
    if data.shape[0] == 0 and not allow_empty:
        raise ValueError("Data is empty.")
    if data.shape[1] != dim:
        raise ValueError(
            f"Dimension mismatch: data has {data.shape[1]} columns, "
            + f"code vectors have {dim}."
        )
    if not np.all(np.isfinite(data)):
        raise ValueError("Data holds non-finite values.")
    return data


def init_som(
    topology: MapTopology,
    dim: int,
    data: Optional[np.ndarray] = None,
    config: SomConfig = SomConfig(),
) -> SomModel:
    """Initialise the code vectors of a map.

    Parameters
    ----------
    topology
        The map.
    dim
        Dimension ``d`` of the code vectors.
    data
        Training data; required for ``'sample'`` initialisation and giving the
        per-dimension box of ``'uniform-box'`` initialisation (the unit box if
        absent).
    config
        ``config.init`` selects the method, ``config.seed`` the ``init`` substream.

    Raises
    ------
    ValueError
        If ``'sample'`` initialisation gets fewer data rows than map units.
    """
    rng = substream(config.seed, "init")
    n_units = topology.n_units
    if data is not None:
        data = _check_data(data, dim)

    if config.init == "sample":
        if data is None or data.shape[0] < n_units:
            rows = 0 if data is None else data.shape[0]
            raise ValueError(
                f"Sample initialisation of {topology} needs at least {n_units} "
                + f"data rows (got {rows})."
            )
        rows = rng.choice(data.shape[0], size=n_units, replace=False)
        codevectors = data[rows].copy()
    else:
        if data is None:
            low, high = np.zeros(dim), np.ones(dim)
        else:
            low, high = data.min(axis=0), data.max(axis=0)
        codevectors = rng.uniform(low, high, size=(n_units, dim))

    return SomModel(topology=topology, codevectors=codevectors, config=config)


def bmu(model: SomModel, x: FloatArray) -> int:
    """Best matching unit of ``x``: lowest squared distance, lowest index on ties.

    Raises
    ------
    ValueError
        If ``x`` has the wrong dimension or non-finite entries.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,):
        raise ValueError(
            f"Dimension mismatch: input has shape {x.shape}, expected ({model.dim},)."
        )
    if not np.all(np.isfinite(x)):
        raise ValueError("Input holds non-finite values.")
    return int(np.argmin(((model.codevectors - x) ** 2).sum(axis=1)))


def _schedules(config: SomConfig) -> tuple:
    """Per-step learning rates and integer radii of a resolved config."""
    steps = config.iterations
    progress = np.arange(steps) / (steps - 1) if steps > 1 else np.zeros(1)
    rates = config.rate_start + (config.rate_end - config.rate_start) * progress
    radii = np.floor(
        config.radius_start + (config.radius_end - config.radius_start) * progress + 0.5
    ).astype(np.int64)
    return rates, radii


def train_online(
    model: SomModel,
    data: np.ndarray,
    config: Optional[SomConfig] = None,
    logger: LoggerLike = log,
) -> SomModel:
    """Train ``model`` on ``data`` with the online Kohonen algorithm.

    Parameters
    ----------
    model
        The initial map (left untouched).
    data
        Training rows, shape ``(n, d)``.
    config
        Training configuration (default: ``model.config``); defaults are resolved
        against the map and ``n``.
    logger
        Where to log (a ``LoggingStack`` inside dask tasks).

    Returns
    -------
    model : SomModel
        A new, trained model.

    Raises
    ------
    ValueError
        On empty data, dimension mismatch or non-finite data.
    """
    data = _check_data(data, model.dim)
    n = data.shape[0]
    config = (model.config if config is None else config).resolve(model.topology, n)

    rows = substream(config.seed, "order").integers(0, n, size=config.iterations)
    rates, radii = _schedules(config)
    distances = model.topology.distance_matrix()
    codevectors = model.codevectors.astype(float).copy()

    logger.info(
        "Training %s map on %i rows of dimension %i (%i iterations).",
        model.topology,
        n,
        model.dim,
        config.iterations,
    )
    for row, rate, radius in zip(rows, rates, radii):
        x = data[row]
        winner = np.argmin(((codevectors - x) ** 2).sum(axis=1))
        neighbours = distances[winner] <= radius
        codevectors[neighbours] += rate * (x - codevectors[neighbours])

    provenance = dict(model.provenance)
    provenance.update({"rows": n, "iterations": int(config.iterations)})
    return SomModel(
        topology=model.topology,
        codevectors=codevectors,
        config=config,
        trained=True,
        provenance=provenance,
    )


def _best_two_units(block: np.ndarray, codevectors: np.ndarray) -> np.ndarray:
    """Return ``(bmu, second unit, squared distance to bmu)`` for each row of ``block``.

    The second unit is ``-1`` on a single-unit map.
    """
    sqdist = ((block[:, None, :] - codevectors[None, :, :]) ** 2).sum(axis=2)
    order = np.argsort(sqdist, axis=1, kind="stable")
    rows = np.arange(block.shape[0])
    second = order[:, 1] if codevectors.shape[0] > 1 else np.full(len(rows), -1)
    return np.column_stack([order[:, 0], second, sqdist[rows, order[:, 0]]])


def _winners(model: SomModel, data: np.ndarray) -> np.ndarray:
    """Evaluate :func:`_best_two_units` over row chunks of ``data`` with dask."""
    data = _check_data(data, model.dim, allow_empty=True)
    if data.shape[0] == 0:
        return np.empty((0, 3))
    blocks = da.from_array(data, chunks=(_CHUNK_ROWS, model.dim))
    result = blocks.map_blocks(
        _best_two_units,
        codevectors=model.codevectors,
        chunks=(blocks.chunks[0], (3,)),
        dtype=float,
    )
    return result.compute()


def assign(model: SomModel, data: FloatArray) -> IntArray:
    """Best matching unit of every row of ``data``.

    Rows are processed in chunks, possibly concurrently; the result only depends on
    ``(model, data)``.

    Raises
    ------
    ValueError
        On dimension mismatch.
    """
    return _winners(model, data)[:, 0].astype(np.int64)


def class_sizes(model: SomModel, assignment: IntArray) -> IntArray:
    """Number of rows assigned to each unit, empty units included."""
    assignment = np.asarray(assignment, dtype=np.int64)
    if assignment.size and (assignment.min() < 0 or assignment.max() >= model.n_units):
        raise ValueError("Assignment holds unit indices outside the map.")
    return np.bincount(assignment, minlength=model.n_units)
