"""Provide the analyses run by the ``pylivcond_*`` commands, and their configuration."""

from .config import PipelineConfig, load_config
from .generate import cmd_generate
from .map_households import cmd_map_households
from .map_modalities import cmd_map_modalities
from .map_scores import cmd_map_scores
from .threshold import cmd_threshold
from .validate import ValidationReport, cmd_validate
