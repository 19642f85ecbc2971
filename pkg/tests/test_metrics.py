import numpy as np
import pytest

import oracles
from artkit.errors import DataError
from artkit.metrics import UNASSIGNED, accuracy, adjusted_rand_index


def test_identical_partitions():
    assert adjusted_rand_index([0, 0, 1, 2], [5, 5, 7, 9]) == 1.0


def test_single_element():
    assert adjusted_rand_index([3], [1]) == 1.0


@pytest.mark.parametrize("seed", range(8))
def test_against_pair_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 30))
    a = rng.integers(0, 4, n).tolist()
    b = rng.integers(-1, 3, n).tolist()
    assert adjusted_rand_index(a, b) == pytest.approx(float(oracles.ari_bruteforce(a, b)), abs=1e-12)


def test_unassigned_is_one_cluster():
    assert adjusted_rand_index([None, None, 0, 0], [UNASSIGNED, UNASSIGNED, 4, 4]) == 1.0


def test_length_mismatch():
    with pytest.raises(DataError):
        adjusted_rand_index([0, 1], [0])
    with pytest.raises(DataError):
        accuracy([0], [0, 1])


def test_accuracy():
    t = list(range(10))
    assert accuracy(t, t) == 1.0
    assert accuracy([0, 1, None, UNASSIGNED], [0, 2, 0, UNASSIGNED]) == 0.25
