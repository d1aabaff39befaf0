import random

import pytest

from layouttree import Con, Idx, Strc, Vec, flatten, reconstruct

from helpers import random_tree

# the interleaved showcase layout: a run, then five index triples walking
# backwards by ten
FIG_TREE = Strc(2, (0, 60), (Con(5),
                             Vec(5, -10, Idx(3, (0, -4, 7), Con(1)))))
FIG_SEQ = [0, 1, 2, 3, 4, 60, 56, 67, 50, 46, 57,
           40, 36, 47, 30, 26, 37, 20, 16, 27]
FIG_TEXT = "strc(2,[0,60],[con(5),vec(5,-10,idx(3,[0,-4,7],con(1)))])"


@pytest.fixture
def fig_tree():
    return FIG_TREE


@pytest.fixture
def fig_seq():
    return list(FIG_SEQ)


@pytest.fixture(scope="session")
def corpus():
    """Mixed corpus: flattenings of random six-constructor trees at random
    bases, plus unstructured noise.  Lengths up to 128."""
    rng = random.Random(0xC0FFEE)
    seqs = []
    for _ in range(700):
        budget = rng.choice((2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128))
        tree = random_tree(rng, budget, extended=True)
        seqs.append(flatten(tree, base=rng.randint(-50, 50)))
    for _ in range(300):
        n = rng.randint(1, 64)
        seqs.append([rng.randint(-100, 200) for _ in range(n)])
    return seqs


@pytest.fixture(scope="session")
def corpus_basic(corpus):
    """Basic-mode reconstruction of every corpus sequence."""
    return [(seq, reconstruct(seq)) for seq in corpus]
