import numpy as np
import pandas as pd
import pytest

from pylivcond.survey_data import (
    Codebook,
    Dataset,
    Item,
    SynthSpec,
    generate_synthetic,
    load_codebook,
)


def make_codebook(domains):
    """Build a codebook from ``{domain: [codes]}``."""
    items = tuple(
        Item(
            variable_code=code,
            domain=domain,
            negative_modality=f"no {code}",
            neutral_modality=f"{code}",
        )
        for domain, codes in domains.items()
        for code in codes
    )
    return Codebook(items=items, domains=tuple(domains))


@pytest.fixture
def tmp_codebook():
    """Fixture for a small codebook: items A, B, C in 'home' and D in 'car'."""
    return make_codebook({"home": ["A", "B", "C"], "car": ["D"]})


@pytest.fixture
def tmp_dataset(tmp_codebook):
    """Fixture for a small dataset with descriptors over the small codebook."""
    responses = pd.DataFrame(
        {
            "A": [0, 1, 1, 0, 1, 0],
            "B": [0, 1, 0, 0, 1, 0],
            "C": [1, 1, 0, 0, 0, 1],
            "D": [0, 1, 1, 0, 0, 0],
        },
        index=[f"h{i}" for i in range(6)],
    )
    descriptors = pd.DataFrame(
        {
            "TYM": [0, 1, 2, 3, 2, 0],
            "NBTOT": [1, 2, 4, 3, 3, 1],
            "NB17": [0, 0, 2, 2, 1, 0],
            "AGEM": [30.0, 40.0, 35.0, 28.0, 50.0, 70.0],
            "REV": [1000.0, 3000.0, 4200.0, 1300.0, 4000.0, 2500.0],
        },
        index=responses.index,
    )
    return Dataset.from_frame(responses, tmp_codebook, descriptors=descriptors)


@pytest.fixture(scope="session")
def tmp_default_codebook():
    """Fixture for the shipped codebook."""
    return load_codebook()


@pytest.fixture(scope="session")
def tmp_synthetic(tmp_default_codebook):
    """Fixture for a synthetic dataset of 300 households with descriptors."""
    marginals = {
        code: item.reference_frequency / 100
        for code, item in zip(tmp_default_codebook.codes, tmp_default_codebook.items)
    }
    spec = SynthSpec.from_dict(
        {"n": 300, "marginals": marginals, "descriptors": {"REVUC": 7000}}
    )
    return generate_synthetic(spec, seed=11, codebook=tmp_default_codebook)


@pytest.fixture
def tmp_rng():
    """Fixture for a seeded random generator."""
    return np.random.default_rng(1234)
