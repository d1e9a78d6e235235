"""Provide utility functions."""

from ._random import substream
