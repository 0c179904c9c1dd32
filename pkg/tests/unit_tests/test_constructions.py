import numpy as np
import pytest

from fuglede.constructions import paley_i, paley_ii, sylvester
from fuglede.gf2 import is_hadamard


def test_sylvester_orders():
    assert sylvester(0).order == 1
    for k in range(1, 6):
        h = sylvester(k)
        assert h.order == 2**k
        assert is_hadamard(h)


@pytest.mark.parametrize("q", [3, 7, 11, 19, 23])
def test_paley_i(q):
    h = paley_i(q)
    assert h.order == q + 1
    assert is_hadamard(h)


@pytest.mark.parametrize("q", [5, 13])
def test_paley_ii(q):
    h = paley_ii(q)
    assert h.order == 2 * (q + 1)
    assert is_hadamard(h)


def test_paley_rejects_wrong_residue():
    with pytest.raises(ValueError):
        paley_i(13)
    with pytest.raises(ValueError):
        paley_ii(19)
    with pytest.raises(ValueError):
        paley_i(15)


def test_matrices_are_read_only():
    with pytest.raises(ValueError):
        sylvester(2).entries[0, 0] = -1
    assert np.all(np.abs(paley_i(7).entries) == 1)
