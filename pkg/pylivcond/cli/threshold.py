#!/bin/usr python3

"""
Entry point for the ``pylivcond_threshold`` command. The command has a help option:

.. code-block:: console

    $ pylivcond_threshold --help
    usage: pylivcond_threshold [-h] [-c CONFIG] [-d DATA] [--seed SEED] [-o OUT]
                               [-v] [-s] [-r RATE] [--distribution DISTRIBUTION]

    Compute the score distribution and calibrate the living-conditions threshold.

    options:
    -h, --help            show this help message and exit
    -c, --config CONFIG   YAML configuration file
    -d, --data DATA       household data CSV
    --seed SEED           seed of all random substreams
    -o, --out OUT         output root directory
    -v, --verbose         enable debug output
    -s, --silent          disable info output (priority to --verbose)
    -r, --rate RATE       target rate in percent (default: computed monetary
                          poverty rate)
    --distribution DISTRIBUTION
                          'data', 'reference' (published distribution) or a YAML
                          file of score weights
"""

import argparse
import sys

from pylivcond.pipeline import cmd_threshold

from ._common import add_common_arguments, run


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Compute the score distribution and calibrate the "
        + "living-conditions threshold."
    )
    add_common_arguments(parser)
    parser.add_argument(
        "-r",
        "--rate",
        type=float,
        default=None,
        help="target rate in percent (default: computed monetary poverty rate)",
    )
    parser.add_argument(
        "--distribution",
        default=None,
        help="'data', 'reference' (published distribution) "
        + "or a YAML file of score weights",
    )
    args = parser.parse_args(argv)
    return run(
        args,
        cmd_threshold,
        threshold__target_rate=args.rate,
        threshold__distribution=args.distribution,
    )


if __name__ == "__main__":
    sys.exit(main())
