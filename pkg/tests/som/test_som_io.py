import json

import numpy as np
import pytest

import pylivcond.som.io as module
from pylivcond.som import MapTopology, SomConfig, init_som, train_online


@pytest.fixture
def tmp_trained(tmp_rng):
    """Fixture for a trained 3x2 grid map."""
    data = tmp_rng.normal(size=(40, 3))
    config = SomConfig(iterations=100, seed=2)
    model = init_som(MapTopology.grid(3, 2), 3, data, config)
    return train_online(model, data)


class TestSaveLoad:
    def test_identical(self, tmp_path, tmp_trained):
        """Test a saved map loads back with identical code vectors and config."""
        path = tmp_path / "som.json"
        module.save_som(tmp_trained, path)
        loaded = module.load_som(path)
        np.testing.assert_array_equal(loaded.codevectors, tmp_trained.codevectors)
        assert loaded.topology == tmp_trained.topology
        assert loaded.config == tmp_trained.config
        assert loaded.trained
        assert loaded.provenance == tmp_trained.provenance

    def test_sorted_keys(self, tmp_path, tmp_trained):
        """Test the document lists the topology as text."""
        path = tmp_path / "som.json"
        module.save_som(tmp_trained, path)
        content = json.loads(path.read_text())
        assert content["topology"] == "grid-3x2"
        assert list(content) == sorted(content)

    def test_error_missing_key(self, tmp_trained):
        """Test error raising for an incomplete document."""
        content = module.som_to_dict(tmp_trained)
        del content["codevectors"]
        with pytest.raises(ValueError):
            module.som_from_dict(content)

    def test_error_inconsistent(self, tmp_trained):
        """Test error raising for code vectors not matching the topology."""
        content = module.som_to_dict(tmp_trained)
        content["topology"] = "string-4"
        with pytest.raises(ValueError):
            module.som_from_dict(content)

    def test_error_not_json(self, tmp_path):
        """Test error raising for an unreadable file."""
        path = tmp_path / "som.json"
        path.write_text("{")
        with pytest.raises(ValueError):
            module.load_som(path)
