"""Named random substreams derived from the single pipeline seed.

Every stochastic step draws from its own generator, keyed by a stream name, so that
changing e.g. the number of synthetic households does not shift the initialisation
of a map trained afterwards.
"""

import zlib

import numpy as np

__all__ = ["STREAMS", "substream"]

STREAMS = ("synth", "init", "order", "permutation")


def substream(seed: int, name: str) -> np.random.Generator:
    """Return the generator of the substream ``name`` for ``seed``.

    Parameters
    ----------
    seed
        The pipeline seed (non-negative integer).
    name
        One of :data:`STREAMS`.

    Raises
    ------
    ValueError
        If ``name`` is not a known stream or ``seed`` is negative.
    """
    if name not in STREAMS:
        raise ValueError(
            f"Provided stream ({name!r}) is not valid. Accepted values are in "
            + f"{list(STREAMS)!r}."
        )
    if seed < 0:
        raise ValueError(f"Seed must be non-negative (got {seed}).")
    key = zlib.crc32(name.encode("ascii"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), key]))
