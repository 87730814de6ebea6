import time

import pytest

from synrep.numerics import make_rng
from synrep.prosody import TrainConfig, corpus_from_trees, train
from synrep.synth import random_corpus
from synrep.treebank import parse_tree

CAT_SAT = "(S (NP (DT the) (NN cat)) (VP (VB sat)))"

#: Training corpus used by the acceptance suite: 200 sentences of 2-8
#: words over the fixed 12-label vocabulary.
CORPUS_SEED = 2024
CORPUS_SIZE = 200


@pytest.fixture
def cat_sat():
    return parse_tree(CAT_SAT)


@pytest.fixture(scope="session")
def corpus200():
    trees = random_corpus(make_rng(CORPUS_SEED), CORPUS_SIZE, min_words=2, max_words=8)
    return corpus_from_trees(trees)


@pytest.fixture(scope="session")
def nml_ablation_runs(corpus200):
    """One training run with the nuclear-norm term and one without.

    Shared by the acceptance criteria on NML effect, learnability, and
    loss composition; wall-clock seconds for each run are recorded so the
    runtime bounds can be asserted.
    """
    config = TrainConfig()  # nml_weight=0.05, lr=1e-3, 50 epochs, seed 42
    started = time.monotonic()
    with_nml = train(corpus200, config)
    mid = time.monotonic()
    without_nml = train(corpus200, config.override(nml_weight=0.0))
    done = time.monotonic()
    return {
        "config": config,
        "with_nml": with_nml,
        "without_nml": without_nml,
        "seconds_with": mid - started,
        "seconds_without": done - mid,
    }
