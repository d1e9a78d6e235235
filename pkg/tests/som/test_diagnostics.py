import numpy as np
import pytest

import pylivcond.som as som
import pylivcond.som.diagnostics as module
from pylivcond.som import MapTopology, SomConfig, SomModel, init_som, train_online


def model_of(topology, codevectors):
    return SomModel(topology, np.asarray(codevectors, dtype=float), SomConfig())


class TestQuality:
    def test_quantization_error(self):
        """Test the quantization error is the mean squared distance to the BMU."""
        model = model_of(MapTopology.string(2), [[0.0, 0.0], [10.0, 0.0]])
        data = np.array([[1.0, 0.0], [0.0, 2.0], [9.0, 0.0]])
        result = module.quality(model, data)
        np.testing.assert_allclose(result.quantization_error, (1 + 4 + 1) / 3)
        assert result.topographic_error == 0.0

    def test_topographic_error(self):
        """Test rows whose two best units are not neighbours count as errors."""
        model = model_of(MapTopology.string(3), [[0.0], [10.0], [1.0]])
        data = np.array([[0.2], [9.0], [0.9]])
        result = module.quality(model, data)
        # [0.2] and [0.9] have units 0 and 2 as best pair
        np.testing.assert_allclose(result.topographic_error, 2 / 3)

    def test_single_unit(self):
        """Test a single-unit map has no topographic error."""
        model = model_of(MapTopology.string(1), [[0.0, 0.0]])
        result = module.quality(model, np.ones((3, 2)))
        assert result.topographic_error == 0.0
        np.testing.assert_allclose(result.quantization_error, 2.0)

    def test_training_improves(self, tmp_rng):
        """Test training lowers the quantization error on uniform data."""
        data = tmp_rng.uniform(size=(400, 2))
        config = SomConfig(iterations=4000, init="uniform-box", seed=5)
        model = init_som(MapTopology.grid(6, 6), 2, data, config)
        trained = train_online(model, data)
        before = module.quality(model, data)
        after = module.quality(trained, data)
        assert after.quantization_error <= before.quantization_error
        assert after.topographic_error <= 0.2

    def test_grid_seeds(self, tmp_rng):
        """Test an 8x8 map of uniform 2-D data over several seeds."""
        data = tmp_rng.uniform(size=(500, 2))
        errors = []
        for seed in range(5):
            config = SomConfig(iterations=8000, seed=seed)
            model = init_som(MapTopology.grid(8, 8), 2, data, config)
            trained = train_online(model, data)
            before, after = module.quality(model, data), module.quality(trained, data)
            assert after.quantization_error <= before.quantization_error
            errors.append(after.topographic_error)
        assert np.mean(errors) <= 0.2

    def test_package_export(self):
        """Test the package exports the function next to its submodule."""
        assert som.quality is module.quality
        assert som.diagnostics is module

    def test_to_dict(self):
        """Test the diagnostics dictionary."""
        result = module.MapQuality(0.5, 0.1)
        assert result.to_dict() == {
            "quantization_error": 0.5,
            "topographic_error": 0.1,
        }

    def test_error_empty(self):
        """Test error raising for empty data."""
        model = model_of(MapTopology.string(2), [[0.0], [1.0]])
        with pytest.raises(ValueError):
            module.quality(model, np.empty((0, 1)))


class TestUnitDistances:
    def test_grid(self):
        """Test neighbour distances on a 2x2 grid."""
        model = model_of(
            MapTopology.grid(2, 2), [[0.0, 0.0], [3.0, 0.0], [0.0, 4.0], [3.0, 4.0]]
        )
        distances = module.unit_distances(model)
        assert list(distances.columns) == ["unit_a", "unit_b", "distance"]
        assert len(distances) == 6
        row = distances[(distances["unit_a"] == 0) & (distances["unit_b"] == 3)]
        np.testing.assert_allclose(row["distance"], 5.0)

    def test_umatrix(self):
        """Test the U-matrix is the mean distance to map neighbours."""
        model = model_of(MapTopology.string(3), [[0.0], [1.0], [4.0]])
        np.testing.assert_allclose(module.umatrix(model), [1.0, 2.0, 3.0])

    def test_single_unit(self):
        """Test a single-unit map has no distances and a zero U-matrix."""
        model = model_of(MapTopology.string(1), [[1.0]])
        assert module.unit_distances(model).empty
        np.testing.assert_array_equal(module.umatrix(model), [0.0])
