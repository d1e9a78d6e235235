"""Provide constants retrieved from internal files."""

from .reference import REFERENCE_POVERTY_RATE, SCORE_DISTRIBUTION, data_file
