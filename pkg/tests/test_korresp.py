import logging
from dataclasses import replace

import numpy as np
import pytest

import pylivcond.korresp as module
from pylivcond.som import MapTopology, SomConfig, SomModel
from pylivcond.survey_data import (
    BurtTable,
    SynthClass,
    SynthSpec,
    burt_table,
    disjunctive_code,
    generate_synthetic,
)


@pytest.fixture(scope="module")
def tmp_two_blobs(tmp_default_codebook):
    """Fixture for households either mostly fine or mostly deprived, and their
    Burt table."""
    codes = tmp_default_codebook.codes
    spec = SynthSpec(
        n=1000,
        marginals={},
        classes=[
            SynthClass(0.6, {code: 0.03 for code in codes}),
            SynthClass(0.4, {code: 0.85 for code in codes}),
        ],
    )
    dataset = generate_synthetic(spec, seed=4, codebook=tmp_default_codebook)
    return burt_table(disjunctive_code(dataset))


@pytest.fixture(scope="module")
def tmp_two_blobs_map(tmp_two_blobs):
    """Fixture for the 10-unit string of the two-blob modalities."""
    return module.classify_modalities(
        tmp_two_blobs, MapTopology.string(10), SomConfig(iterations=3000, seed=1)
    )


def map_of(topology, modalities, assignment):
    model = SomModel(topology, np.zeros((topology.n_units, 1)), SomConfig())
    return module.ModalityMap(model, tuple(modalities), np.asarray(assignment))


class TestPolaritySeparation:
    def test_hand_computed(self, tmp_codebook):
        """Test the separation score of a hand-placed map."""
        modality_map = map_of(
            MapTopology.string(4), tmp_codebook.modalities, [0, 3, 0, 3, 1, 2, 1, 3]
        )
        score = module.polarity_separation(modality_map, tmp_codebook)
        np.testing.assert_allclose(score, 12 / 14)

    def test_no_close_pairs(self, tmp_codebook):
        """Test the score is undefined when no modalities are close."""
        modality_map = map_of(MapTopology.string(3), ["A0", "A1"], [0, 2])
        assert np.isnan(module.polarity_separation(modality_map, tmp_codebook))
        baseline = module.polarity_baseline(modality_map, tmp_codebook, 5)
        assert np.all(np.isnan(baseline))

    def test_two_blobs(self, tmp_two_blobs_map, tmp_default_codebook):
        """Test negative and neutral modalities occupy separate map regions."""
        score = module.polarity_separation(tmp_two_blobs_map, tmp_default_codebook)
        baseline = module.polarity_baseline(
            tmp_two_blobs_map, tmp_default_codebook, n_permutations=200
        )
        assert score >= 0.8
        assert score >= baseline.mean() + 0.1


class TestPolarityBaseline:
    def test_deterministic(self, tmp_codebook):
        """Test the permutation scores depend only on the seed."""
        modality_map = map_of(
            MapTopology.string(4), tmp_codebook.modalities, [0, 3, 0, 3, 1, 2, 1, 3]
        )
        a = module.polarity_baseline(modality_map, tmp_codebook, 50, seed=3)
        b = module.polarity_baseline(modality_map, tmp_codebook, 50, seed=3)
        np.testing.assert_array_equal(a, b)
        assert a.shape == (50,)
        assert np.all((a >= 0) & (a <= 1))


class TestClassifyModalities:
    def test_layout(self, tmp_two_blobs_map):
        """Test every modality is placed once in the layout."""
        layout = tmp_two_blobs_map.layout()
        assert list(layout.columns) == ["unit", "row", "col", "modalities"]
        assert len(layout) == 10
        placed = " ".join(layout["modalities"]).split()
        assert sorted(placed) == sorted(tmp_two_blobs_map.modalities)
        assert len(placed) == 52

    def test_profiles(self, tmp_two_blobs_map):
        """Test code vector profiles are labelled by modality."""
        profiles = tmp_two_blobs_map.codevector_profiles()
        assert profiles.shape == (10, 52)
        assert profiles.index.name == "unit"

    def test_fallback(self, tmp_dataset, caplog):
        """Test a map larger than the modality count falls back to uniform-box."""
        burt = burt_table(disjunctive_code(tmp_dataset))
        with caplog.at_level(logging.WARNING):
            modality_map = module.classify_modalities(
                burt, MapTopology.grid(4, 4), SomConfig(iterations=50)
            )
        assert "Falling back" in caplog.text
        assert modality_map.model.provenance["init_fallback"]
        assert modality_map.model.config.init == "uniform-box"
        assert modality_map.assignment.shape == (8,)

    def test_many(self, tmp_dataset):
        """Test several maps run as tasks match their single runs."""
        burt = burt_table(disjunctive_code(tmp_dataset))
        topologies = [MapTopology.string(3), MapTopology.grid(2, 2)]
        config = SomConfig(iterations=80, seed=6)
        maps = module.classify_modalities_many(burt, topologies, config)
        assert list(maps) == ["string-3", "grid-2x2"]
        for topology in topologies:
            single = module.classify_modalities(burt, topology, config)
            np.testing.assert_array_equal(
                maps[str(topology)].assignment, single.assignment
            )

    def test_many_cluster(self, tmp_dataset, caplog):
        """Test maps computed on a local dask cluster match the threaded run."""
        burt = burt_table(disjunctive_code(tmp_dataset))
        topologies = [MapTopology.string(3), MapTopology.grid(2, 2)]
        config = SomConfig(iterations=80, seed=6)
        with caplog.at_level(logging.INFO):
            maps = module.classify_modalities_many(burt, topologies, config, ntasks=1)
        threaded = module.classify_modalities_many(burt, topologies, config)
        assert list(maps) == list(threaded)
        for name, modality_map in maps.items():
            np.testing.assert_array_equal(
                modality_map.model.codevectors, threaded[name].model.codevectors
            )
        assert "properly shut down" in caplog.text
        assert "Training string-3 map" in caplog.text

    def test_deterministic(self, tmp_two_blobs):
        """Test a map depends only on the seed."""
        topology = MapTopology.string(5)
        a, b, c = (
            module.classify_modalities(
                tmp_two_blobs, topology, SomConfig(iterations=500, seed=seed)
            )
            for seed in [2, 2, 3]
        )
        np.testing.assert_array_equal(a.model.codevectors, b.model.codevectors)
        np.testing.assert_array_equal(a.assignment, b.assignment)
        assert not np.array_equal(a.model.codevectors, c.model.codevectors)

    def test_count_scale(self, tmp_two_blobs):
        """Test scaling every count leaves the map unchanged."""
        doubled = replace(
            tmp_two_blobs,
            values=2 * tmp_two_blobs.values,
            n_rows=2 * tmp_two_blobs.n_rows,
        )
        config = SomConfig(iterations=500, seed=2)
        a = module.classify_modalities(tmp_two_blobs, MapTopology.string(5), config)
        b = module.classify_modalities(doubled, MapTopology.string(5), config)
        np.testing.assert_array_equal(a.model.codevectors, b.model.codevectors)
        np.testing.assert_array_equal(a.assignment, b.assignment)

    def test_independence(self, tmp_codebook):
        """Test modalities with identical profiles share a single unit."""
        totals = np.array([3, 1, 2, 2, 1, 3, 2, 2])
        burt = BurtTable(
            np.outer(totals, totals), tuple(tmp_codebook.modalities), 4, 16
        )
        modality_map = module.classify_modalities(
            burt, MapTopology.string(3), SomConfig(iterations=200, seed=1)
        )
        assert len(np.unique(modality_map.assignment)) == 1


class TestMCAConsistency:
    def test_positive(self, tmp_two_blobs_map, tmp_two_blobs):
        """Test map distances follow the chi-square profile distances."""
        rho, pvalue = module.mca_consistency(tmp_two_blobs_map, tmp_two_blobs)
        assert rho > 0
        assert pvalue < 0.01
