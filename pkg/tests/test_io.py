import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import CODE_13_26, graph
from linenc.codes import random_ldpc
from linenc.encoder import encode, preprocess
from linenc.errors import FormatError, UsageError
from linenc.io import (
    AlistDocument,
    dump_schedule,
    load_schedule,
    parse_alist,
    parse_alist_document,
    parse_dense,
    read_matrix,
    sniff_format,
    write_alist,
    write_dense,
)

REPETITION_3 = """3 2
2 2
1 2 1
2 2
1
1 2
2
1 2
2 3
"""


def test_repetition_alist():
    g = parse_alist(REPETITION_3)
    assert (g.n_bits, g.n_checks) == (3, 2)
    assert g.check_adj == ((0, 1), (1, 2))


def test_zero_padded_lists_accepted():
    padded = REPETITION_3.replace("\n1\n1 2\n2\n", "\n1 0\n1 2\n2 0\n")
    assert parse_alist(padded) == parse_alist(REPETITION_3)


def test_code_13_26_alist():
    g = parse_alist(write_alist(graph(CODE_13_26)))
    assert (g.n_bits, g.n_checks) == (26, 13)
    assert all(len(a) == 3 for a in g.bit_adj)
    assert g == graph(CODE_13_26)


@pytest.mark.parametrize(
    "text,line",
    [
        (REPETITION_3.rsplit("\n", 2)[0] + "\n", 9),  # truncated
        (REPETITION_3.replace("2 3\n", "2 4\n"), 9),  # index out of range
        (REPETITION_3.replace("1 2 1", "1 2 2"), 7),  # third bit list too short
        (REPETITION_3.replace("1 2\n2\n1 2", "1 2\n2\n1 3"), 8),
    ],
)
def test_malformed_alist(text, line):
    with pytest.raises(FormatError) as exc:
        parse_alist(text)
    assert exc.value.line == line


def test_inconsistent_lists():
    # bit lists claim x1 is in check 2, check lists disagree
    bad = "2 2\n1 1\n1 1\n1 1\n2\n1\n1\n2\n"
    with pytest.raises(FormatError):
        parse_alist(bad)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_alist_document_round_trip(seed):
    g = random_ldpc(int(np.random.default_rng(seed).integers(8, 80)), [2, 3, 4], 5, seed)
    doc = AlistDocument.from_graph(g)
    assert parse_alist_document(write_alist(doc)) == doc


def test_dense_sniff_and_parse(tmp_path):
    g = graph(CODE_13_26)
    text = write_dense(g)
    assert sniff_format(text) == "dense"
    assert sniff_format(write_alist(g)) == "alist"
    assert parse_dense(text) == g
    p = tmp_path / "h.txt"
    p.write_text(text)
    assert read_matrix(p) == g


def test_dense_ragged_rows():
    with pytest.raises(FormatError) as exc:
        parse_dense("1 0 1\n1 1\n")
    assert exc.value.line == 2


@pytest.mark.parametrize("mode", ["flip", "recompute"])
def test_schedule_round_trip(mode):
    g = random_ldpc(120, [2, 3, 5], 6, 7)
    s, _ = preprocess(g, mode)
    blob = dump_schedule(s)
    t = load_schedule(blob, g)
    assert t.steps == s.steps
    assert (t.info_positions, t.load_positions, t.mode, t.xor_budget) == (s.info_positions, s.load_positions, s.mode, s.xor_budget)
    assert dump_schedule(t) == blob
    u = np.random.default_rng(0).integers(0, 2, s.n_info)
    assert encode(t, u).codeword == encode(s, u).codeword


def test_schedule_is_deterministic():
    g = random_ldpc(90, 3, 6, 1)
    assert dump_schedule(preprocess(g)[0]) == dump_schedule(preprocess(g)[0])


def test_schedule_digest_mismatch():
    s, _ = preprocess(graph(CODE_13_26))
    with pytest.raises(UsageError):
        load_schedule(dump_schedule(s), random_ldpc(26, 3, 6, 0))


def test_schedule_corruption():
    s, _ = preprocess(graph(CODE_13_26))
    blob = dump_schedule(s)
    with pytest.raises(FormatError):
        load_schedule(blob[:-3])
    with pytest.raises(FormatError):
        load_schedule(b"X" + blob[1:])
