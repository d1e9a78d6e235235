"""Map topologies: strings (one-dimension maps) and rectangular grids.

Units are indexed ``0..U-1``; on a grid of ``width x height`` units the index of the
unit at ``(row, col)`` is ``row * width + col``. The map distance is ``|i - j|`` on
a string and the Chebyshev distance on a grid, so that map neighbours (distance 1)
are the 8-neighbourhood of a grid unit.
"""

import re
from dataclasses import dataclass
from typing import List, Literal, Tuple

import numpy as np

__all__ = ["MapTopology", "map_distance"]

_PATTERN = re.compile(r"^(string)-(\d+)$|^(grid)-(\d+)x(\d+)$")


@dataclass(frozen=True)
class MapTopology:
    """Shape of a Kohonen map.

    Attributes
    ----------
    kind : {'string', 'grid'}
    dims : tuple of int
        ``(length,)`` for a string, ``(width, height)`` for a grid.
    """

    kind: Literal["string", "grid"]
    dims: Tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("string", "grid"):
            raise ValueError(
                f"Provided topology kind ({self.kind!r}) is not valid."
                + " Accepted values are in ['string', 'grid']."
            )
        expected = 1 if self.kind == "string" else 2
        if len(self.dims) != expected:
            raise ValueError(
                f"A {self.kind} topology needs {expected} dimension(s) "
                + f"(got {self.dims!r})."
            )
        if any(int(d) != d or d < 1 for d in self.dims):
            raise ValueError(f"Map dimensions must be integers >= 1 ({self.dims!r}).")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @classmethod
    def string(cls, length: int) -> "MapTopology":
        return cls("string", (length,))

    @classmethod
    def grid(cls, width: int, height: int) -> "MapTopology":
        return cls("grid", (width, height))

    @classmethod
    def parse(cls, text: str) -> "MapTopology":
        """Parse ``'string-10'`` or ``'grid-8x8'`` (width x height).

        Raises
        ------
        ValueError
            If ``text`` follows neither form.
        """
        match = _PATTERN.match(text.strip().lower())
        if match is None:
            raise ValueError(
                f"Cannot parse topology {text!r}; expected 'string-<length>' or "
                + "'grid-<width>x<height>'."
            )
        if match.group(1):
            return cls.string(int(match.group(2)))
        return cls.grid(int(match.group(4)), int(match.group(5)))

    def __str__(self) -> str:
        if self.kind == "string":
            return f"string-{self.dims[0]}"
        return f"grid-{self.dims[0]}x{self.dims[1]}"

    @property
    def n_units(self) -> int:
        return int(np.prod(self.dims))

    @property
    def width(self) -> int:
        return self.dims[0]

    @property
    def height(self) -> int:
        return 1 if self.kind == "string" else self.dims[1]

    def default_radius(self) -> int:
        """Initial neighbourhood radius ``ceil(max(dims) / 2)``."""
        return -(-max(self.dims) // 2)

    def _check_unit(self, i: int) -> None:
        if not 0 <= i < self.n_units:
            raise ValueError(
                f"Unit index {i} out of range for {self} ({self.n_units} units)."
            )

    def position(self, i: int) -> Tuple[int, int]:
        """Return the ``(row, col)`` position of unit ``i``."""
        self._check_unit(i)
        return divmod(int(i), self.width)

    def positions(self) -> np.ndarray:
        """Return the ``(U, 2)`` array of ``(row, col)`` unit positions."""
        units = np.arange(self.n_units)
        return np.column_stack([units // self.width, units % self.width])

    def distance_matrix(self) -> np.ndarray:
        """Return the ``(U, U)`` integer matrix of map distances."""
        pos = self.positions()
        return np.abs(pos[:, None, :] - pos[None, :, :]).max(axis=2)

    def neighbor_pairs(self) -> List[Tuple[int, int]]:
        """Unit pairs ``(i, j)``, ``i < j``, at map distance 1, in sorted order."""
        dist = self.distance_matrix()
        rows, cols = np.nonzero(np.triu(dist == 1))
        return [(int(i), int(j)) for i, j in zip(rows, cols)]


def map_distance(topology: MapTopology, i: int, j: int) -> int:
    """Map distance between units ``i`` and ``j``.

    ``|i - j|`` on a string; ``max(|drow|, |dcol|)`` on a grid.

    Raises
    ------
    ValueError
        If an index is out of range.
    """
    row_i, col_i = topology.position(i)
    row_j, col_j = topology.position(j)
    return max(abs(row_i - row_j), abs(col_i - col_j))
