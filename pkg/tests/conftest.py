import random
from pathlib import Path

import pytest

from stylomine.seqdb import Dictionary, Sequence, SequenceDatabase

DATA_DIR = Path(__file__).parent / "data"

# published token sequence for the annotated news sentence fixture
NEWS_TOKENS = (
    "s NN1 NN2 VBB VBN vg EVENT VBN PRP ng DT0 NN2 PRP ng TIMEX3 ng CRD NP0 "
    "VBG vg EVENT VBG AT0 NN1 PRF AJ0 NN1 NP0 NP0 CJC AT0 PUQ AJ0 AJ0 NN1 PUQ "
    "VBG vg EVENT VBG AT0 NN1 NN1"
).split()


def sample_db() -> SequenceDatabase:
    """Three sequences over items a..d: ({a,b},{c}), ({a,c},{a,d}), ({c,d})."""
    return SequenceDatabase(
        [
            Sequence(1, ((0, 1), (2,))),
            Sequence(2, ((0, 2), (0, 3))),
            Sequence(3, ((2, 3),)),
        ],
        Dictionary("abcd"),
    )


@pytest.fixture
def db() -> SequenceDatabase:
    return sample_db()


def random_db(rng: random.Random, *, max_seqs=10, max_sets=8, max_items=3,
              max_alphabet=6) -> SequenceDatabase:
    alphabet = rng.randint(2, max_alphabet)
    sequences = []
    for sid in range(1, rng.randint(1, max_seqs) + 1):
        itemsets = []
        for _ in range(rng.randint(1, max_sets)):
            size = min(rng.randint(1, max_items), alphabet)
            itemsets.append(tuple(sorted(rng.sample(range(alphabet), size))))
        sequences.append(Sequence(sid, tuple(itemsets)))
    return SequenceDatabase(
        sequences, Dictionary(str(i) for i in range(alphabet))
    )


def random_singleton_db(rng: random.Random, *, max_seqs=8, max_len=12,
                        alphabet=6) -> SequenceDatabase:
    sequences = []
    for sid in range(1, rng.randint(1, max_seqs) + 1):
        itemsets = tuple(
            (rng.randrange(alphabet),) for _ in range(rng.randint(1, max_len))
        )
        sequences.append(Sequence(sid, itemsets))
    return SequenceDatabase(
        sequences, Dictionary(str(i) for i in range(alphabet))
    )
