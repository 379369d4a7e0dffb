from __future__ import annotations

import numpy as np
import pytest

import textcurator as tc
from oracles import recount_corpus, write_planted_corpus

# Seed sets used as ranking fixtures throughout the suite.
SEED_FIXTURES = {
    "disease": ["disease", "smallpox", "cholera", "fever", "pestilence"],
    "contagion": ["infect", "epidemic", "inoculate", "contagion",
                  "contaminate", "vaccinate"],
    "ethnic_identity": ["irish", "fenian", "papist", "jewish", "jew"],
    "migration": ["immigrant", "alien", "interloper", "migrant"],
}

PLANTED_TRAIN_CONFIG = dict(dimension=50, window=5, min_count=5, epochs=3)


@pytest.fixture(scope="session")
def mini_dir():
    return tc.mini_corpus_dir()


@pytest.fixture(scope="session")
def mini_corpus(mini_dir):
    return tc.ingest_corpus(mini_dir)


@pytest.fixture(scope="session")
def mini_recount(mini_dir):
    return recount_corpus(mini_dir)


@pytest.fixture(scope="session")
def mini_index(mini_corpus):
    return tc.build_index(mini_corpus)


@pytest.fixture(scope="session")
def mini_model(mini_corpus):
    return tc.train_cbow(
        mini_corpus,
        tc.TrainingConfig(dimension=40, window=5, min_count=2, epochs=3, seed=11),
    )


@pytest.fixture(scope="session")
def planted_dir(tmp_path_factory):
    return write_planted_corpus(tmp_path_factory.mktemp("planted"), seed=95)


@pytest.fixture(scope="session")
def planted_corpus(planted_dir):
    return tc.ingest_corpus(planted_dir)


@pytest.fixture(scope="session")
def planted_model(planted_corpus):
    return tc.train_cbow(
        planted_corpus, tc.TrainingConfig(seed=0, **PLANTED_TRAIN_CONFIG)
    )


def make_random_model(n_terms: int, dimension: int, seed: int) -> tc.EmbeddingModel:
    """A synthetic model with random vectors; handy for similarity tests."""
    rng = np.random.default_rng(seed)
    terms = tuple(f"term{i:04d}" for i in range(n_terms))
    vocab = tc.Vocabulary(
        terms=terms,
        term_to_id={t: i for i, t in enumerate(terms)},
        counts=tuple([1] * n_terms),
        min_count=1,
    )
    config = tc.TrainingConfig(dimension=dimension, min_count=1, seed=seed)
    return tc.EmbeddingModel(vocab, rng.standard_normal((n_terms, dimension)), config)


@pytest.fixture(scope="session")
def random_model():
    return make_random_model(300, 24, seed=42)
