#!/bin/usr python3

"""
Entry point for the ``pylivcond_validate`` command. The command has a help option:

.. code-block:: console

    $ pylivcond_validate --help
    usage: pylivcond_validate [-h] [-c CONFIG] [-d DATA] [--seed SEED] [-o OUT]
                              [-v] [-s]

    Validate a household data file and report modality frequencies.

    options:
    -h, --help            show this help message and exit
    -c, --config CONFIG   YAML configuration file
    -d, --data DATA       household data CSV
    --seed SEED           seed of all random substreams
    -o, --out OUT         output root directory
    -v, --verbose         enable debug output
    -s, --silent          disable info output (priority to --verbose)
"""

import argparse
import sys

from pylivcond.pipeline import PipelineConfig, cmd_validate

from ._common import add_common_arguments, run


def _print_report(config: PipelineConfig) -> None:
    print(cmd_validate(config).to_text())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Validate a household data file and report modality frequencies."
    )
    add_common_arguments(parser)
    args = parser.parse_args(argv)
    return run(args, _print_report)


if __name__ == "__main__":
    sys.exit(main())
