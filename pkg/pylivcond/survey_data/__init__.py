"""Provide the codebook, the household data model, coding and synthetic data."""

from .codebook import Codebook, Item, load_codebook, modality_name
from .coding import (
    BurtTable,
    IndicatorMatrix,
    burt_table,
    disjunctive_code,
    drop_empty_modalities,
)
from .dataset import (
    DESCRIPTOR_COLUMNS,
    DESCRIPTOR_LEVELS,
    Dataset,
    DescriptorBundle,
    HouseholdRecord,
    load_dataset,
    write_dataset,
)
from .synthetic import (
    DescriptorSpec,
    SynthClass,
    SynthSpec,
    generate_synthetic,
    load_synth_spec,
)
