"""Arguments, configuration and exit codes shared by the ``pylivcond_*`` commands."""

import argparse
import logging
from typing import Any, Callable

import numpy as np

from pylivcond.pipeline import PipelineConfig, load_config
from pylivcond.utils._logging import cli_level, setup_cli_logging

__all__ = ["EXIT_OK", "EXIT_INVALID", "EXIT_NUMERICAL", "add_common_arguments", "run"]

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Add ``--config``, ``--data``, ``--seed``, ``--out``, ``-v`` and ``-s``."""
    parser.add_argument("-c", "--config", default=None, help="YAML configuration file")
    parser.add_argument("-d", "--data", default=None, help="household data CSV")
    parser.add_argument(
        "--seed", type=int, default=None, help="seed of all random substreams"
    )
    parser.add_argument("-o", "--out", default=None, help="output root directory")
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="enable debug output"
    )
    parser.add_argument(
        "-s",
        "--silent",
        action="store_true",
        help="disable info output (priority to --verbose)",
    )


def exit_code(error: BaseException) -> int:
    """``2`` for numerical failures, ``1`` for invalid input or files."""
    if isinstance(
        error,
        (np.linalg.LinAlgError, FloatingPointError, ArithmeticError, RuntimeError),
    ):
        return EXIT_NUMERICAL
    return EXIT_INVALID


def run(
    args: argparse.Namespace,
    command: Callable[[PipelineConfig], Any],
    **overrides: Any,
) -> int:
    """Set up logging, build the configuration and run ``command`` on it.

    ``overrides`` are passed to :meth:`PipelineConfig.with_overrides` on top of the
    common flags. Returns the exit code.
    """
    setup_cli_logging(cli_level(args.verbose, args.silent))
    try:
        config = load_config(args.config).with_overrides(
            data=args.data, seed=args.seed, out=args.out, **overrides
        )
        command(config)
    except (ValueError, KeyError, OSError, RuntimeError, ArithmeticError) as e:
        log.error("%s: %s", type(e).__name__, e)
        return exit_code(e)
    return EXIT_OK
