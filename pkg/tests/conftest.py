"""Shared fixtures: one noise-free dataset and a model trained on it."""

import pytest

from corrseg.regressor import TrainingSet, train_ridge
from corrseg.synthgen import SynthSpec, generate_dataset

CLEAN8_SPEC = SynthSpec(
    size=8,
    noise_mean=0.0,
    noise_var=0.0,
    groups_mean=3.0,
    groups_var=1.0,
    count=8192,
    seed=101,
)


@pytest.fixture(scope="session")
def clean8_dataset():
    return generate_dataset(CLEAN8_SPEC)


@pytest.fixture(scope="session")
def clean8_model(clean8_dataset):
    pairs = [(m.values, s.bits) for m, s in clean8_dataset.train]
    return train_ridge(TrainingSet.from_pairs(pairs), lam=1.0)
