"""Provide the Kohonen map core: topologies, training, assignment and diagnostics."""

from .diagnostics import MapQuality, quality, umatrix, unit_distances
from .io import load_som, save_som, som_from_dict, som_to_dict
from .model import (
    SomConfig,
    SomModel,
    assign,
    bmu,
    class_sizes,
    init_som,
    train_online,
)
from .topology import MapTopology, map_distance
