import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linenc.errors import UsageError
from linenc.gf2 import BitWord, DenseGf2Matrix, independent_row_set, rank, xor_into

bits = st.lists(st.integers(0, 1), min_size=0, max_size=200)


@given(bits)
def test_bitword_array_round_trip(b):
    w = BitWord.from_bits(b)
    assert w.to_list() == b
    assert len(w) == len(b)
    assert w.weight() == sum(b)


@given(bits)
def test_hex_round_trip(b):
    w = BitWord.from_bits(b)
    assert BitWord.from_hex(w.to_hex(), len(b)) == w


def test_hex_is_msb_first():
    assert BitWord.from_bits([1, 0, 0, 0, 0, 1]).to_hex() == "84"


def test_hex_rejects_padding_and_length():
    with pytest.raises(UsageError):
        BitWord.from_hex("85", 6)  # bit 7 is padding
    with pytest.raises(UsageError):
        BitWord.from_hex("8", 6)


@given(st.integers(1, 150).flatmap(lambda n: st.tuples(st.lists(st.integers(0, 1), min_size=n, max_size=n), st.lists(st.integers(0, 1), min_size=n, max_size=n))))
def test_xor_matches_elementwise(pair):
    a, b = pair
    got = BitWord.from_bits(a) ^ BitWord.from_bits(b)
    assert got.to_list() == [x ^ y for x, y in zip(a, b)]
    acc = BitWord.from_bits(a)
    xor_into(acc, BitWord.from_bits(b))
    assert acc == got


def test_setitem_flip_and_bounds():
    w = BitWord.zeros(70)
    w[65] = 1
    w.flip(3)
    assert w.support() == [3, 65]
    with pytest.raises((IndexError, UsageError)):
        w[70]


def test_from_array_rejects_non_binary():
    with pytest.raises(UsageError):
        BitWord.from_array(np.array([0, 2, 1]))


def _np_rank(a):
    a = a.copy() % 2
    r = 0
    for c in range(a.shape[1]):
        piv = [i for i in range(r, a.shape[0]) if a[i, c]]
        if not piv:
            continue
        a[[r, piv[0]]] = a[[piv[0], r]]
        for i in range(a.shape[0]):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


@settings(max_examples=60)
@given(st.integers(1, 12), st.integers(1, 90), st.integers(0, 2**32 - 1))
def test_rank_matches_reference(m, n, seed):
    a = np.random.default_rng(seed).integers(0, 2, (m, n), dtype=np.uint8)
    assert rank(DenseGf2Matrix.from_dense(a)) == _np_rank(a)


def test_independent_rows_are_greedy_ascending():
    # row 2 = row 0 + row 1, row 3 = row 0
    a = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 0, 1]], dtype=np.uint8)
    assert independent_row_set(DenseGf2Matrix.from_dense(a)) == [0, 1, 4]


def test_dense_round_trip_and_transpose():
    a = np.random.default_rng(3).integers(0, 2, (5, 130), dtype=np.uint8)
    m = DenseGf2Matrix.from_dense(a)
    assert (m.to_dense() == a).all()
    assert (m.transpose().to_dense() == a.T).all()
    assert (DenseGf2Matrix.from_row_lists([np.flatnonzero(r) for r in a], 130).to_dense() == a).all()
