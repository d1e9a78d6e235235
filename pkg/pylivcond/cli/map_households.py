#!/bin/usr python3

"""
Entry point for the ``pylivcond_map_households`` command. The command has a help option:

.. code-block:: console

    $ pylivcond_map_households --help
    usage: pylivcond_map_households [-h] [-c CONFIG] [-d DATA] [--seed SEED] [-o OUT]
                                    [-v] [-s] [-t TOPOLOGY] [-i ITERATIONS] [-k K]

    Classify the households on a Kohonen map of their MCA coordinates, group the
    units into super-classes and profile them.

    options:
    -h, --help            show this help message and exit
    -c, --config CONFIG   YAML configuration file
    -d, --data DATA       household data CSV
    --seed SEED           seed of all random substreams
    -o, --out OUT         output root directory
    -v, --verbose         enable debug output
    -s, --silent          disable info output (priority to --verbose)
    -t, --topology TOPOLOGY
                          map topology (default: 'grid-8x8')
    -i, --iterations ITERATIONS
                          number of training steps (default: 100 x households)
    -k, --k K             number of super-classes (default: 5)
"""

import argparse
import sys

from pylivcond.pipeline import cmd_map_households

from ._common import add_common_arguments, run


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Classify the households on a Kohonen map of their MCA "
        + "coordinates, group the units into super-classes and profile them."
    )
    add_common_arguments(parser)
    parser.add_argument(
        "-t", "--topology", default=None, help="map topology (default: 'grid-8x8')"
    )
    parser.add_argument(
        "-i",
        "--iterations",
        type=int,
        default=None,
        help="number of training steps (default: 100 x households)",
    )
    parser.add_argument(
        "-k", "--k", type=int, default=None, help="number of super-classes (default: 5)"
    )
    args = parser.parse_args(argv)
    return run(
        args,
        cmd_map_households,
        households__topology=args.topology,
        households__iterations=args.iterations,
        households__k=args.k,
    )


if __name__ == "__main__":
    sys.exit(main())
