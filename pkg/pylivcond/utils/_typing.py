import logging
from pathlib import Path
from typing import TypeAlias, Union

import numpy as np
import numpy.typing as npt

from ._logging import LoggingStack

__all__ = ["PathLike", "LoggerLike", "FloatArray", "IntArray"]

PathLike: TypeAlias = Union[str, Path]
LoggerLike: TypeAlias = Union[logging.Logger, LoggingStack]
FloatArray: TypeAlias = npt.NDArray[np.float64]
IntArray: TypeAlias = npt.NDArray[np.int64]
