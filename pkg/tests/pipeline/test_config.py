import pytest
import yaml

import pylivcond.pipeline.config as module
from pylivcond.som import SomConfig


@pytest.fixture
def tmp_config_file(tmp_path):
    """Fixture writing a configuration file next to a data file name."""
    content = {
        "data": "households.csv",
        "seed": 4,
        "modalities": {"topologies": ["string-6"], "som": {"iterations": 100}},
        "households": {"k": 3, "groups": [[0], [1, 2]], "group_labels": ["A", "B"]},
        "threshold": {"target_rate": 12.5},
    }
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(content))
    return path


class TestLoadConfig:
    def test_defaults(self):
        """Test the default configuration."""
        config = module.load_config()
        assert config.seed == 0
        assert config.modalities.topologies == ("string-10", "grid-10x10")
        assert config.households.topology == "grid-8x8"
        assert config.households.k == 5
        assert config.scores.topology == "string-5"
        assert config.threshold.target_rate == "computed"

    def test_file(self, tmp_config_file):
        """Test loading a file, with data resolved against its directory."""
        config = module.load_config(tmp_config_file)
        assert config.data == str(tmp_config_file.parent / "households.csv")
        assert config.modalities.topologies == ("string-6",)
        assert config.modalities.som.iterations == 100
        assert config.households.groups == ((0,), (1, 2))
        assert config.households.group_labels == ("A", "B")
        assert config.threshold.target_rate == 12.5

    def test_empty_file(self, tmp_path):
        """Test an empty file gives the defaults."""
        path = tmp_path / "config.yaml"
        path.write_text("")
        assert module.load_config(path) == module.PipelineConfig()

    def test_dict(self, tmp_config_file):
        """Test a configuration is rebuilt from its echo."""
        config = module.load_config(tmp_config_file)
        assert module.PipelineConfig.from_dict(config.to_dict()) == config

    def test_som_config(self, tmp_config_file):
        """Test section maps get the pipeline seed."""
        config = module.load_config(tmp_config_file)
        assert config.som_config("modalities") == SomConfig(iterations=100, seed=4)

    @pytest.mark.parametrize(
        "content",
        [
            {"sed": 1},
            {"households": {"kk": 3}},
            {"households": {"som": {"seed": 3}}},
            {"households": {"som": {"sigma": 1}}},
            {"households": {"weighting": "area"}},
            {"households": {"linkage": "median"}},
            {"households": {"group_labels": ["A"]}},
            {"modalities": {"topologies": ["ring-4"]}},
            {"threshold": {"target_rate": 150}},
            {"threshold": {"target_rate": "median"}},
            {"seed": -1},
            {"seed": "one"},
            {"mca": 3},
        ],
    )
    def test_error(self, tmp_path, content):
        """Test error raising for unknown keys and invalid values."""
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump(content))
        with pytest.raises(ValueError):
            module.load_config(path)

    def test_error_not_mapping(self, tmp_path):
        """Test error raising for a document that is not a mapping."""
        path = tmp_path / "config.yaml"
        path.write_text("- seed\n")
        with pytest.raises(ValueError):
            module.load_config(path)

    def test_error_missing(self, tmp_path):
        """Test error raising for a missing file."""
        with pytest.raises(FileNotFoundError):
            module.load_config(tmp_path / "absent.yaml")


class TestWithOverrides:
    def test_overrides(self):
        """Test top-level and section overrides, None being ignored."""
        config = module.PipelineConfig().with_overrides(
            seed=7,
            data=None,
            households__k=4,
            households__iterations=500,
            threshold__target_rate=10.0,
        )
        assert config.seed == 7
        assert config.data is None
        assert config.households.k == 4
        assert config.households.som.iterations == 500
        assert config.threshold.target_rate == 10.0
        assert config.scores.som.iterations is None

    def test_error(self):
        """Test overrides are validated."""
        with pytest.raises(ValueError):
            module.PipelineConfig().with_overrides(scores__topology="ring")
