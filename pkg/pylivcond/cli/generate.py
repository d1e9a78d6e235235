#!/bin/usr python3

"""
Entry point for the ``pylivcond_generate`` command. The command has a help option:

.. code-block:: console

    $ pylivcond_generate --help
    usage: pylivcond_generate [-h] [--seed SEED] [--spec SPEC] [-n N]
                              [--codebook CODEBOOK] [-v] [-s] output

    Generate a synthetic household data file.

    positional arguments:
    output               CSV file to write

    options:
    -h, --help           show this help message and exit
    --seed SEED          seed of the synthetic substream (default: 0)
    --spec SPEC          SynthSpec JSON (default: the shipped calibrated spec)
    -n, --n N            number of households (default: from the spec)
    --codebook CODEBOOK  codebook JSON (default: the shipped codebook)
    -v, --verbose        enable debug output
    -s, --silent         disable info output (priority to --verbose)
"""

import argparse
import logging
import sys

from pylivcond.pipeline import cmd_generate
from pylivcond.utils._logging import cli_level, setup_cli_logging

from ._common import EXIT_OK, exit_code

log = logging.getLogger(__name__)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Generate a synthetic household data file."
    )
    parser.add_argument("output", help="CSV file to write")
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed of the synthetic substream (default: 0)",
    )
    parser.add_argument(
        "--spec",
        default=None,
        help="SynthSpec JSON (default: the shipped calibrated spec)",
    )
    parser.add_argument(
        "-n",
        "--n",
        type=int,
        default=None,
        help="number of households (default: from the spec)",
    )
    parser.add_argument(
        "--codebook", default=None, help="codebook JSON (default: the shipped codebook)"
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="enable debug output"
    )
    parser.add_argument(
        "-s",
        "--silent",
        action="store_true",
        help="disable info output (priority to --verbose)",
    )
    args = parser.parse_args(argv)

    setup_cli_logging(cli_level(args.verbose, args.silent))
    try:
        cmd_generate(args.output, args.seed, args.spec, args.n, args.codebook)
    except (ValueError, KeyError, OSError, RuntimeError, ArithmeticError) as e:
        log.error("%s: %s", type(e).__name__, e)
        return exit_code(e)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
