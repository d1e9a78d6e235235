import json

import numpy as np
import pandas as pd
import pytest

import pylivcond.profiling as module
from pylivcond.scores import score_table
from pylivcond.survey_data import Dataset, DescriptorBundle, HouseholdRecord

# Households h0..h5 of the small dataset fixture
ASSIGNMENT = ["1", "2", "2", "1", "3", "2"]


@pytest.fixture
def tmp_profile(tmp_dataset):
    """Fixture for the profile of three classes and a merged group."""
    return module.class_profile(
        ASSIGNMENT,
        tmp_dataset,
        score_table(tmp_dataset),
        classes=["1", "2", "3"],
        groups={"2+3": ["2", "3"]},
    )


class TestConsumptionUnits:
    @pytest.mark.parametrize(
        "persons, children, expected",
        [(1, 0, 1.0), (2, 0, 1.5), (4, 2, 2.1), (4, 1, 2.3), (3, 2, 1.6), (2, 2, 1.3)],
    )
    def test_scale(self, persons, children, expected):
        """Test the 1 - 0.5 - 0.3 equivalence scale."""
        np.testing.assert_allclose(
            module.consumption_units(persons, children), expected
        )

    def test_income(self):
        """Test the income per consumption unit of a record."""
        record = HouseholdRecord(
            "h",
            {},
            DescriptorBundle(n_persons=4, n_children_under17=2, monthly_income=4200.0),
        )
        np.testing.assert_allclose(module.equivalized_income(record), 2000.0)

    def test_error_income(self):
        """Test error raising for a household without income."""
        record = HouseholdRecord("h", {}, DescriptorBundle(n_persons=2))
        with pytest.raises(ValueError):
            module.equivalized_income(record)

    def test_incomes(self, tmp_dataset):
        """Test incomes per consumption unit over a dataset."""
        incomes = module.equivalized_incomes(tmp_dataset)
        np.testing.assert_allclose(
            incomes, [1000.0, 2000.0, 2000.0, 812.5, 4000 / 1.8, 2500.0]
        )
        assert incomes.name == "REVUC"


class TestPoverty:
    def test_flags(self, tmp_dataset):
        """Test households below half the median income per unit are poor."""
        flags, rate = module.poverty_flags(tmp_dataset)
        assert flags.tolist() == [False, False, False, True, False, False]
        np.testing.assert_allclose(rate, 100 / 6)

    def test_threshold_strict(self):
        """Test an income equal to half the median is not poor."""
        flags, rate = module.poverty_from_incomes(pd.Series([50.0, 100.0, 200.0]))
        assert flags.tolist() == [False, False, False]
        assert rate == 0.0

    def test_all_equal(self):
        """Test equal incomes give no poverty."""
        _, rate = module.poverty_from_incomes(pd.Series([10.0] * 4))
        assert rate == 0.0

    @pytest.mark.parametrize("incomes", [[], [1.0, np.nan]])
    def test_error(self, incomes):
        """Test error raising for empty or incomplete incomes."""
        with pytest.raises(ValueError):
            module.poverty_from_incomes(pd.Series(incomes, dtype=float))


class TestClassProfile:
    def test_layout(self, tmp_profile):
        """Test columns, the size row and the blocks."""
        table = tmp_profile.to_frame()
        assert list(table.columns) == ["1", "2", "3", "2+3", "All"]
        assert table.index[0] == ("Size", "Share (%)")
        assert table.loc[("Size", "Share (%)")].tolist() == pytest.approx(
            [100 / 3, 50.0, 100 / 6, 100 * 4 / 6, 100.0]
        )
        blocks = table.index.get_level_values("block").unique().tolist()
        assert blocks == ["Size", "TYM", "Means", "Poverty", "Items"]
        assert ("Means", "Score home") in table.index
        assert ("TYM", "couple with child(ren)") in table.index

    def test_values(self, tmp_profile):
        """Test shares are percents and means are plain means."""
        table = tmp_profile.table
        np.testing.assert_allclose(table.loc[("Items", "C"), "1"], 50.0)
        np.testing.assert_allclose(table.loc[("Items", "D"), "2"], 200 / 3)
        np.testing.assert_allclose(
            table.loc[("Means", "Number of persons"), "2"], 7 / 3
        )
        np.testing.assert_allclose(table.loc[("Poverty", "Poor households"), "1"], 50.0)
        np.testing.assert_allclose(
            table.loc[("TYM", "couple with child(ren)"), "All"], 100 / 3
        )

    def test_weighted_mean_identity(self, tmp_profile):
        """Test the All column is the size-weighted mean of the class columns."""
        table = tmp_profile.table.drop(index=[("Size", "Share (%)")])
        sizes = tmp_profile.sizes[["1", "2", "3"]].to_numpy()
        combined = table[["1", "2", "3"]].to_numpy() @ sizes / sizes.sum()
        np.testing.assert_allclose(combined, table["All"].to_numpy())
        group = table[["2", "3"]].to_numpy() @ sizes[1:] / sizes[1:].sum()
        np.testing.assert_allclose(group, table["2+3"].to_numpy())

    def test_header(self, tmp_profile):
        """Test a header adds a top column level."""
        table = tmp_profile.to_frame({"1": "A", "2": "B", "3": "B", "2+3": "B"})
        assert table.columns.tolist()[-2:] == [("B", "2+3"), ("", "All")]
        assert "All" not in tmp_profile.to_frame(include_all=False).columns

    def test_empty_class(self, tmp_dataset, caplog):
        """Test a class without members is kept with missing statistics."""
        profile = module.class_profile(
            ASSIGNMENT, tmp_dataset, classes=["1", "2", "3", "4"]
        )
        assert profile.table["4"].iloc[1:].isna().all()
        assert profile.sizes["4"] == 0
        assert "without members" in caplog.text

    def test_default_classes(self, tmp_dataset):
        """Test observed classes are sorted numerically by default."""
        labels = ["10", "2", "2", "10", "1", "2"]
        profile = module.class_profile(labels, tmp_dataset)
        assert profile.classes == ["1", "2", "10"]

    def test_without_descriptors(self, tmp_codebook):
        """Test a dataset without descriptors profiles its items only."""
        frame = pd.DataFrame({"A": [0, 1], "B": [1, 1], "C": [0, 0], "D": [1, 0]})
        dataset = Dataset.from_frame(frame, tmp_codebook)
        profile = module.class_profile([0, 1], dataset)
        blocks = profile.table.index.get_level_values("block").unique().tolist()
        assert blocks == ["Size", "Items"]

    @pytest.mark.parametrize(
        "assignment, classes, groups",
        [
            (ASSIGNMENT[:5], None, None),
            (ASSIGNMENT, ["1", "2"], None),
            (ASSIGNMENT, None, {"2+5": ["2", "5"]}),
        ],
    )
    def test_error(self, tmp_dataset, assignment, classes, groups):
        """Test error raising for inconsistent classes."""
        with pytest.raises(ValueError):
            module.class_profile(
                assignment, tmp_dataset, classes=classes, groups=groups
            )


class TestOverrepresentation:
    def test_share(self, tmp_profile):
        """Test the v-test of a share against its closed form."""
        flags = module.overrepresentation(tmp_profile)
        flag = next(
            f for f in flags if (f.klass, f.block, f.descriptor) == ("2", "Items", "D")
        )
        # p = 2/6 overall, 2 of 3 in the class
        expected = (3 * 2 / 3 - 3 * 2 / 6) / np.sqrt(3 * (1 / 3) * (2 / 3) * 3 / 5)
        np.testing.assert_allclose(flag.v_value, expected)
        assert not flag.flagged
        assert flag.marker is None

    def test_mean(self, tmp_profile, tmp_dataset):
        """Test the v-test of a mean against its closed form."""
        flags = module.overrepresentation(tmp_profile)
        flag = next(
            f
            for f in flags
            if (f.klass, f.descriptor) == ("2+3", "Mean age of adults")
        )
        ages = tmp_dataset.descriptors["AGEM"].to_numpy()
        members = np.isin(ASSIGNMENT, ["2", "3"])
        expected = (ages[members].mean() - ages.mean()) / np.sqrt(
            (6 - 4) / 5 * ages.var() / 4
        )
        np.testing.assert_allclose(flag.v_value, expected)

    def test_flagged(self, tmp_default_codebook, tmp_synthetic):
        """Test a class made of the deprived households over-represents deprivation."""
        scores = score_table(tmp_synthetic)
        deprived = scores["deprivations"] >= 2
        labels = np.where(deprived, "poor", "rest")
        profile = module.class_profile(labels, tmp_synthetic, scores)
        flags = module.overrepresentation(profile)
        flag = next(
            f
            for f in flags
            if (f.klass, f.descriptor) == ("poor", "Score deprivations")
        )
        assert flag.flagged and flag.v_value >= 2

    def test_undefined(self, tmp_dataset):
        """Test a class holding every household has undefined v-tests."""
        profile = module.class_profile(["1"] * 6, tmp_dataset)
        flags = module.overrepresentation(profile)
        assert flags
        assert all(f.marker == module.UNDEFINED for f in flags)
        assert not any(f.flagged for f in flags)
        assert flags[0].as_dict()["v_value"] is None

    def test_threshold(self, tmp_profile):
        """Test flags follow the threshold."""
        flags = module.overrepresentation(tmp_profile, threshold=0.0)
        assert all(f.flagged for f in flags if f.marker is None)

    def test_null_rate(self, tmp_synthetic):
        """Test random classes are rarely flagged."""
        rng = np.random.default_rng(5)
        scores = score_table(tmp_synthetic)
        flagged = defined = 0
        for _ in range(100):
            labels = np.where(rng.permutation(len(tmp_synthetic)) < 60, "k", "rest")
            profile = module.class_profile(labels, tmp_synthetic, scores)
            flags = [f for f in module.overrepresentation(profile) if f.klass == "k"]
            defined += sum(f.marker is None for f in flags)
            flagged += sum(f.flagged for f in flags)
        assert defined > 0
        assert flagged / defined <= 0.1

    def test_serializable(self, tmp_profile):
        """Test flags are plain Python values that serialize to JSON."""
        flags = module.overrepresentation(tmp_profile, threshold=0.0)
        assert all(type(f.flagged) is bool for f in flags)
        records = json.loads(json.dumps([f.as_dict() for f in flags]))
        assert any(r["flagged"] is True for r in records)

    def test_inputs(self, tmp_profile, tmp_dataset):
        """Test the dataset and assignment are checked against the profile."""
        flags = module.overrepresentation(tmp_profile, tmp_dataset, ASSIGNMENT)
        expected = module.overrepresentation(tmp_profile)
        assert [f.as_dict() for f in flags] == [f.as_dict() for f in expected]
        with pytest.raises(ValueError, match="assignment"):
            module.overrepresentation(tmp_profile, tmp_dataset, ASSIGNMENT[::-1])
        with pytest.raises(ValueError, match="assignment"):
            module.overrepresentation(tmp_profile, assignment=ASSIGNMENT[:5])

    def test_other_dataset(self, tmp_profile, tmp_synthetic):
        """Test a profile is not tested against another dataset."""
        with pytest.raises(ValueError, match="dataset"):
            module.overrepresentation(tmp_profile, tmp_synthetic)


class TestStandardizedPartialMeans:
    def test_centered(self, tmp_synthetic):
        """Test size-weighted standardised means are centered."""
        scores = score_table(tmp_synthetic)
        labels = np.asarray(scores["total"] % 3)
        z = module.standardized_partial_means(labels, scores)
        assert list(z.columns) == list(module.FIGURE_ORDER)
        assert z.index.name == "class"
        sizes = np.bincount(labels)
        np.testing.assert_allclose(sizes @ z.to_numpy(), 0, atol=1e-9)

    def test_values(self, tmp_dataset):
        """Test standardised means of the small dataset."""
        scores = score_table(tmp_dataset)
        z = module.standardized_partial_means(ASSIGNMENT, scores)
        home = scores["home"].to_numpy(dtype=float)
        expected = (home[[1, 2, 5]].mean() - home.mean()) / home.std()
        np.testing.assert_allclose(z.loc["2", "home"], expected)
        assert list(z.columns) == ["home", "car"]

    def test_zero_variance(self, tmp_dataset, caplog):
        """Test a domain without variance gets z = 0 and is reported."""
        scores = score_table(tmp_dataset).assign(car=1)
        z = module.standardized_partial_means(
            ASSIGNMENT, scores, classes=["1", "2", "7"]
        )
        assert z.attrs["undefined"] == ["car"]
        assert z.loc[["1", "2"], "car"].tolist() == [0.0, 0.0]
        assert z.loc["7"].isna().all()
        assert "without variance" in caplog.text
