#!/bin/usr python3

"""
Entry point for the ``pylivcond_map_scores`` command. The command has a help option:

.. code-block:: console

    $ pylivcond_map_scores --help
    usage: pylivcond_map_scores [-h] [-c CONFIG] [-d DATA] [--seed SEED] [-o OUT]
                                [-v] [-s] [-t TOPOLOGY] [-i ITERATIONS] [-r RATE]

    Classify the households on a Kohonen map of their partial scores and profile
    the classes beside the basic-score classification.

    options:
    -h, --help            show this help message and exit
    -c, --config CONFIG   YAML configuration file
    -d, --data DATA       household data CSV
    --seed SEED           seed of all random substreams
    -o, --out OUT         output root directory
    -v, --verbose         enable debug output
    -s, --silent          disable info output (priority to --verbose)
    -t, --topology TOPOLOGY
                          map topology (default: 'string-5')
    -i, --iterations ITERATIONS
                          number of training steps (default: 100 x households)
    -r, --rate RATE       target rate in percent for the basic-score threshold
                          (default: computed monetary poverty rate)
"""

import argparse
import sys

from pylivcond.pipeline import cmd_map_scores

from ._common import add_common_arguments, run


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Classify the households on a Kohonen map of their partial "
        + "scores and profile the classes beside the basic-score classification."
    )
    add_common_arguments(parser)
    parser.add_argument(
        "-t", "--topology", default=None, help="map topology (default: 'string-5')"
    )
    parser.add_argument(
        "-i",
        "--iterations",
        type=int,
        default=None,
        help="number of training steps (default: 100 x households)",
    )
    parser.add_argument(
        "-r",
        "--rate",
        type=float,
        default=None,
        help="target rate in percent for the basic-score threshold "
        + "(default: computed monetary poverty rate)",
    )
    args = parser.parse_args(argv)
    return run(
        args,
        cmd_map_scores,
        scores__topology=args.topology,
        scores__iterations=args.iterations,
        threshold__target_rate=args.rate,
    )


if __name__ == "__main__":
    sys.exit(main())
