import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import (
    CODE_13_26,
    CODE_13_26_PIECES,
    GOLDEN_CODEWORD,
    GOLDEN_INFO,
    PSEUDO_TREE_16,
    PSEUDO_TREE_16_PARENTS,
    TREE_10,
    graph,
    pieces0,
)
from linenc import kernels
from linenc.codes import random_ldpc
from linenc.decompose import PseudoTreePiece, decompose, pinned_plan
from linenc.encoder import (
    ComputeParity,
    DELTA_IN_BOTH,
    DISJOINT,
    GAMMA_IN_BOTH,
    compile_schedule,
    encode,
    encode_many,
    label_and_decide,
    linear_response,
    preprocess,
    program_to_steps,
    solve_correction,
    steps_to_program,
)
from linenc.errors import UsageError
from linenc.oracle import verify
from linenc.structures import PseudoTree


def golden_schedule(mode):
    g = graph(CODE_13_26)
    return compile_schedule(pinned_plan(g, pieces0(CODE_13_26_PIECES)), g, mode)


@pytest.mark.parametrize("mode", ["flip", "recompute"])
def test_golden_codeword(mode):
    s = golden_schedule(mode)
    u = [GOLDEN_INFO[p + 1] for p in s.info_positions]
    r = encode(s, u)
    assert r.codeword.to_list() == [GOLDEN_CODEWORD[i] for i in range(1, 27)]


def test_golden_xor_counts():
    s = golden_schedule("flip")
    u = [GOLDEN_INFO[p + 1] for p in s.info_positions]
    assert encode(s, u).xor_count == 56
    assert s.xor_budget == 130


def test_pseudo_tree_16_costs_21_xors():
    g = graph(PSEUDO_TREE_16)
    spec = [{"checks": list(range(7)), "parents": {c - 1: b - 1 for c, b in PSEUDO_TREE_16_PARENTS.items()}}]
    s = compile_schedule(pinned_plan(g, spec), g)
    rng = np.random.default_rng(1)
    for _ in range(8):
        r = encode(s, rng.integers(0, 2, s.n_info))
        assert r.xor_count == 21
        assert verify(g.check_adj, r.codeword)


def test_tree_10_single_pass():
    s, _ = preprocess(graph(TREE_10))
    assert s.n_keys == 0
    assert all(isinstance(st_, ComputeParity) for st_ in s.steps)
    # x4 = x1+x2+x3, x7 = x4+x5+x6, x10 = x4+x8+x9
    assert s.static_xor_count() == 6


def test_zero_info_gives_zero_word():
    s, _ = preprocess(graph(CODE_13_26))
    assert not encode(s, [0] * s.n_info).codeword.any()


def test_wrong_length_info():
    s, _ = preprocess(graph(TREE_10))
    with pytest.raises(UsageError):
        encode(s, [0, 1])


def test_compile_rejects_other_graph():
    plan = decompose(graph(TREE_10))
    with pytest.raises(UsageError):
        compile_schedule(plan, graph(CODE_13_26))


@pytest.mark.parametrize(
    "tag,ca,cb,want",
    [(DISJOINT, 1, 0, (1, 0)), (GAMMA_IN_BOTH, 1, 1, (1, 0)), (GAMMA_IN_BOTH, 1, 0, (1, 1)), (DELTA_IN_BOTH, 0, 1, (1, 1))],
)
def test_solve_correction(tag, ca, cb, want):
    assert solve_correction(tag, ca, cb) == want


def test_program_round_trip():
    s, _ = preprocess(graph(CODE_13_26), "recompute")
    assert tuple(program_to_steps(steps_to_program(s.steps))) == s.steps


def test_label_and_decide_on_tree_and_stopping_set():
    g = graph(TREE_10)
    x = label_and_decide(g, [0, 1, 2, 4, 5, 7, 8], [1, 0, 1, 1, 1, 0, 0])
    assert x is not None and verify(g.check_adj, x)
    g3 = graph(CODE_13_26)
    s, _ = preprocess(g3)
    assert label_and_decide(g3, s.info_positions, [1] * 13) is None


def test_linear_response_of_a_chain():
    # x1 = x0, x2 = x1 + x3
    pt = PseudoTree([[2], [1], [1], [0], [0, 3]], {0: 1, 1: 2})
    piece = PseudoTreePiece(pt, [0, 3], [1, 2], (0,), "test")
    resp = linear_response([piece], [(0, 1), (1, 2, 3)], [0, 3])
    assert resp == {0: 0b01, 3: 0b10, 1: 0b01, 2: 0b11}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["flip", "recompute"]))
def test_random_codes_encode_and_respect_budget(seed, mode):
    rng = np.random.default_rng(seed)
    cw = 3 if seed % 2 else [2, 3, 4, 6]
    g = random_ldpc(int(rng.integers(30, 200)), cw, float(rng.uniform(4, 8)), seed)
    s, _ = preprocess(g, mode)
    for _ in range(3):
        r = encode(s, rng.integers(0, 2, s.n_info))
        assert verify(g.check_adj, r.codeword)
        assert r.xor_count <= s.xor_budget


def test_batch_matches_single_on_every_backend():
    g = random_ldpc(300, [2, 3, 5], 6, 2)
    s, _ = preprocess(g)
    infos = np.random.default_rng(0).integers(0, 2, (130, s.n_info), dtype=np.uint8)
    single = np.stack([encode(s, u).codeword.to_array() for u in infos])
    xors = sum(encode(s, u).xor_count for u in infos)
    for name, impl in kernels.backends().items():
        cw, total, _ = encode_many(s, infos, impl=impl)
        assert (cw == single).all(), name
        assert total == xors, name


def test_backends_agree_word_by_word():
    g = random_ldpc(200, 3, 6, 9)
    s, _ = preprocess(g, "recompute")
    rng = np.random.default_rng(4)
    for _ in range(10):
        u = rng.integers(0, 2, s.n_info)
        outs = {name: encode(s, u, impl=impl) for name, impl in kernels.backends().items()}
        vals = list(outs.values())
        assert all(v.codeword == vals[0].codeword and v.xor_count == vals[0].xor_count for v in vals)


def test_empty_batch():
    s, _ = preprocess(graph(TREE_10))
    cw, x, f = encode_many(s, np.zeros((0, s.n_info)))
    assert cw.shape == (0, 10) and x == 0
