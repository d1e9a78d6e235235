import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pylivcond.scores as module
from pylivcond.constants import REFERENCE_POVERTY_RATE, SCORE_DISTRIBUTION
from pylivcond.survey_data import Codebook, Dataset, HouseholdRecord, Item

_CODEBOOK = Codebook(
    items=tuple(
        Item(code, domain, f"no {code}", code)
        for code, domain in [("A", "x"), ("B", "x"), ("C", "y"), ("D", "y"), ("E", "z")]
    ),
    domains=("x", "y", "z"),
)


def dataset_of(rows):
    frame = pd.DataFrame(rows, columns=_CODEBOOK.codes)
    return Dataset.from_frame(frame, _CODEBOOK)


class TestScore:
    def test_example(self):
        """Test total and partial scores of one household."""
        household = HouseholdRecord("h", {"A": 1, "B": 0, "C": 1, "D": 1, "E": 0})
        result = module.score(household, _CODEBOOK)
        assert result.total == 3
        assert result.partial == (1, 2, 0)
        assert result.as_dict() == {"x": 1, "y": 2, "z": 0, "total": 3}

    @pytest.mark.parametrize("value, total", [(0, 0), (1, 5)])
    def test_extremes(self, value, total):
        """Test all-neutral and all-negative households."""
        household = HouseholdRecord("h", {code: value for code in _CODEBOOK.codes})
        assert module.score(household, _CODEBOOK).total == total

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(0, 1), min_size=5, max_size=5), st.integers(0, 4))
    def test_additive_monotone(self, responses, flip):
        """Test partial scores add up and turning a response negative adds one."""
        household = HouseholdRecord("h", dict(zip(_CODEBOOK.codes, responses)))
        result = module.score(household, _CODEBOOK)
        assert sum(result.partial) == result.total == sum(responses)
        if responses[flip] == 0:
            worse = dict(household.responses, **{_CODEBOOK.codes[flip]: 1})
            assert module.score(HouseholdRecord("h", worse), _CODEBOOK).total == (
                result.total + 1
            )


class TestScoreTable:
    def test_table(self):
        """Test the score table matches household scores."""
        dataset = dataset_of([[1, 0, 1, 1, 0], [0, 0, 0, 0, 0], [1, 1, 1, 1, 1]])
        table = module.score_table(dataset)
        assert list(table.columns) == ["total", "x", "y", "z"]
        assert table["total"].tolist() == [3, 0, 5]
        assert (table.dtypes == np.int64).all()
        for record in dataset:
            assert module.score(record, _CODEBOOK).as_dict() == (
                table.loc[record.id].to_dict()
            )


class TestDistribution:
    def test_reference(self):
        """Test the published distribution gives 10.8 percent at score 9."""
        dist = module.distribution_from_weights(SCORE_DISTRIBUTION)
        assert dist.descending_at(9) == 10.8
        assert dist.descending_at(0) == 100.0
        assert dist.descending_at(27) == 0.0
        assert dist.max_score == 26

    def test_empirical(self):
        """Test the distribution of a dataset counts its total scores."""
        dataset = dataset_of([[1, 0, 1, 1, 0], [0, 0, 0, 0, 0], [1, 1, 1, 1, 1]] * 2)
        dist = module.distribution(dataset)
        assert dist.max_score == 5
        assert dist.weights.tolist() == [2, 0, 0, 2, 0, 2]
        assert dist.descending_at(3) == pytest.approx(200 / 3)

    def test_frame(self):
        """Test the laid-out distribution."""
        frame = module.distribution_from_weights({0: 1, 2: 3}, max_score=2).to_frame()
        assert frame.index.name == "score"
        assert list(frame.columns) == ["percent", "cumulative_desc", "cumulative_asc"]
        assert frame["percent"].tolist() == [25.0, 0.0, 75.0]
        assert frame["cumulative_desc"].tolist() == [100.0, 75.0, 75.0]
        assert frame["cumulative_asc"].tolist() == [25.0, 25.0, 100.0]

    @pytest.mark.parametrize(
        "weights", [{0: -1, 1: 2}, {30: 1}, {0: 0, 1: 0}]
    )
    def test_error_weights(self, weights):
        """Test error raising for invalid weights."""
        with pytest.raises(ValueError):
            module.distribution_from_weights(weights)

    def test_error_empty(self):
        """Test error raising for an empty dataset."""
        with pytest.raises(ValueError):
            module.distribution(dataset_of([]))

    def test_error_score(self):
        """Test error raising for scores outside the distribution."""
        dist = module.distribution_from_weights({0: 1}, max_score=3)
        with pytest.raises(ValueError):
            dist.descending_at(5)


class TestCalibrateThreshold:
    def test_reference(self):
        """Test the published poverty rate calibrates to a threshold of 9."""
        dist = module.distribution_from_weights(SCORE_DISTRIBUTION)
        assert module.calibrate_threshold(dist, REFERENCE_POVERTY_RATE) == 9

    @pytest.mark.parametrize("rate, threshold", [(0, 27), (100, 0)])
    def test_extremes(self, rate, threshold):
        """Test extreme rates."""
        dist = module.distribution_from_weights(SCORE_DISTRIBUTION)
        assert module.calibrate_threshold(dist, rate) == threshold

    def test_tie(self):
        """Test equally close scores resolve to the higher score."""
        dist = module.distribution_from_weights({0: 1, 1: 1, 2: 2}, max_score=2)
        # 100, 75, 50, 0 percent at scores 0..3
        assert module.calibrate_threshold(dist, 62.5) == 2

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0, 100))
    def test_closest(self, rate):
        """Test no score gets closer to the target than the threshold."""
        dist = module.distribution_from_weights(SCORE_DISTRIBUTION)
        threshold = module.calibrate_threshold(dist, rate)
        gap = abs(dist.descending_at(threshold) - rate)
        assert all(
            abs(dist.descending_at(s) - rate) >= gap for s in range(dist.max_score + 2)
        )

    @pytest.mark.parametrize("rate", [-1, 101])
    def test_error(self, rate):
        """Test error raising for rates outside [0, 100]."""
        dist = module.distribution_from_weights(SCORE_DISTRIBUTION)
        with pytest.raises(ValueError):
            module.calibrate_threshold(dist, rate)


class TestClassifyBad:
    def test_consistent(self):
        """Test the flagged share matches the distribution at the threshold."""
        dataset = dataset_of(
            [[1, 0, 1, 1, 0], [0, 0, 0, 0, 0], [1, 1, 1, 1, 1], [0, 1, 0, 0, 0]]
        )
        totals = module.score_table(dataset)["total"]
        dist = module.distribution(dataset)
        threshold = module.calibrate_threshold(dist, 50)
        flags = module.classify_bad(totals, threshold)
        assert flags.tolist() == [True, False, True, False]
        assert 100 * flags.mean() == dist.descending_at(threshold)
