import numpy as np
import pytest

from fixtures import CODE_13_26, TREE_10, rows0
from linenc.codes import random_ldpc
from linenc.errors import UsageError
from linenc.oracle import codeword_census, enumerate_codewords, systematic_encode, systematic_form, verify


def test_code_13_26_has_full_rank():
    sf = systematic_form(rows0(CODE_13_26), 26)
    assert sf.rank == 13
    assert len(sf.free) == 13


def test_repetition_code():
    rows = [[0, 1], [1, 2]]
    assert enumerate_codewords(rows, 3) == {(0, 0, 0), (1, 1, 1)}
    assert codeword_census(rows, 3) == 2


def test_systematic_encode_keeps_free_columns():
    sf = systematic_form(rows0(TREE_10), 10)
    rng = np.random.default_rng(0)
    for _ in range(20):
        u = rng.integers(0, 2, len(sf.free))
        x = systematic_encode(sf, u)
        assert verify(rows0(TREE_10), x)
        assert [x[i] for i in sf.free] == list(u)


def test_dependent_rows_lower_rank():
    rows = [[0, 1], [1, 2], [0, 2]]
    sf = systematic_form(rows, 3)
    assert sf.rank == 2
    assert codeword_census(rows, 3) == 2 ** (3 - sf.rank)


def test_census_matches_rank_on_random_codes():
    for seed in range(5):
        g = random_ldpc(14, 3, 6, seed)
        sf = systematic_form(g.check_adj, g.n_bits)
        assert codeword_census(g.check_adj, g.n_bits) == 2 ** (g.n_bits - sf.rank)


def test_verify_rejects_single_flip():
    sf = systematic_form(rows0(CODE_13_26), 26)
    x = systematic_encode(sf, [1] * 13)
    assert verify(rows0(CODE_13_26), x)
    x.flip(7)
    assert not verify(rows0(CODE_13_26), x)


def test_census_limit():
    with pytest.raises(UsageError):
        codeword_census([[0, 1]], 30)
    with pytest.raises(UsageError):
        systematic_encode(systematic_form([[0, 1]], 2), [1, 0])
