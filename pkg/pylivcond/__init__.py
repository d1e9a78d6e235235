"""
PyLivCond classifies households by their living conditions, from binary survey
items. It includes:

#. :mod:`~pylivcond.survey_data`: the codebook, household data, disjunctive coding
   and a synthetic household generator.

#. :mod:`~pylivcond.mca`, :mod:`~pylivcond.som`, :mod:`~pylivcond.korresp` and
   :mod:`~pylivcond.superclass`: multiple correspondence analysis, Kohonen maps,
   classification of the modalities and contiguous super-classes.

#. :mod:`~pylivcond.scores` and :mod:`~pylivcond.profiling`: scores of bad living
   conditions, threshold calibration and class profiles.

#. :mod:`~pylivcond.pipeline`: the analyses run by the ``pylivcond_*`` commands.

.. note::

    Importing :mod:`pylivcond` does not import the :mod:`~pylivcond.pipeline`
    subpackage, which is aimed at the command-line tools. Import it specifically if
    needed.
"""

try:
    from ._version import __version__ as VERSION
except ImportError:  # source tree without build metadata
    VERSION = "0.0.0+unknown"

from .constants import REFERENCE_POVERTY_RATE, SCORE_DISTRIBUTION
from .korresp import (
    ModalityMap,
    classify_modalities,
    classify_modalities_many,
    mca_consistency,
    polarity_baseline,
    polarity_separation,
)
from .mca import (
    CorrespondenceModel,
    coordinates,
    correspondence_analysis,
    explained_inertia,
    fit_mca,
    observation_coords_from_modalities,
    scaled_burt_profiles,
)
from .profiling import (
    ClassProfile,
    OverrepFlag,
    class_profile,
    equivalized_income,
    equivalized_incomes,
    overrepresentation,
    poverty_flags,
    profile_variables,
    standardized_partial_means,
)
from .scores import (
    ScoreDistribution,
    ScoreVector,
    calibrate_threshold,
    classify_bad,
    distribution,
    distribution_from_weights,
    score,
    score_table,
)
from .som import (
    MapTopology,
    SomConfig,
    SomModel,
    assign,
    bmu,
    init_som,
    load_som,
    map_distance,
    quality,
    save_som,
    train_online,
    umatrix,
    unit_distances,
)
from .superclass import (
    SuperClustering,
    audit_contiguity,
    cluster_units,
    coarsen,
    partition_at,
    regroup,
)
from .survey_data import (
    Codebook,
    Dataset,
    burt_table,
    disjunctive_code,
    generate_synthetic,
    load_codebook,
    load_dataset,
    load_synth_spec,
)
