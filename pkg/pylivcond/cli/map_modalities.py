#!/bin/usr python3

"""
Entry point for the ``pylivcond_map_modalities`` command. The command has a help option:

.. code-block:: console

    $ pylivcond_map_modalities --help
    usage: pylivcond_map_modalities [-h] [-c CONFIG] [-d DATA] [--seed SEED] [-o OUT]
                                    [-v] [-s] [-t TOPOLOGY] [-i ITERATIONS]

    Classify the modalities on Kohonen maps and run the MCA of the modalities.

    options:
    -h, --help            show this help message and exit
    -c, --config CONFIG   YAML configuration file
    -d, --data DATA       household data CSV
    --seed SEED           seed of all random substreams
    -o, --out OUT         output root directory
    -v, --verbose         enable debug output
    -s, --silent          disable info output (priority to --verbose)
    -t, --topology TOPOLOGY
                          map topology, e.g. 'string-10' or 'grid-10x10' (repeatable)
    -i, --iterations ITERATIONS
                          number of training steps (default: 100 x modalities)
"""

import argparse
import sys

from pylivcond.pipeline import cmd_map_modalities

from ._common import add_common_arguments, run


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Classify the modalities on Kohonen maps "
        + "and run the MCA of the modalities."
    )
    add_common_arguments(parser)
    parser.add_argument(
        "-t",
        "--topology",
        action="append",
        default=None,
        help="map topology, e.g. 'string-10' or 'grid-10x10' (repeatable)",
    )
    parser.add_argument(
        "-i",
        "--iterations",
        type=int,
        default=None,
        help="number of training steps (default: 100 x modalities)",
    )
    args = parser.parse_args(argv)
    return run(
        args,
        cmd_map_modalities,
        modalities__topologies=tuple(args.topology) if args.topology else None,
        modalities__iterations=args.iterations,
    )


if __name__ == "__main__":
    sys.exit(main())
