"""Acceptance criteria 1-8, one pass/fail line each."""

import time

import numpy as np
import pytest

from fixtures import (
    CODE_13_26,
    CODE_13_26_PIECES,
    GOLDEN_CODEWORD,
    GOLDEN_INFO,
    PSEUDO_TREE_16,
    PSEUDO_TREE_16_PARENTS,
    graph,
    pieces0,
)
from linenc.codes import random_cycle_code, random_ldpc, random_tree, random_upper_triangular
from linenc.decompose import pinned_plan
from linenc.encoder import ComputeParity, compile_schedule, encode, encode_many, preprocess
from linenc.oracle import enumerate_codewords, verify


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


def test_1_golden_codeword(report):
    t = time.perf_counter()
    g = graph(CODE_13_26)
    s = compile_schedule(pinned_plan(g, pieces0(CODE_13_26_PIECES)), g)
    word = encode(s, [GOLDEN_INFO[p + 1] for p in s.info_positions]).codeword.to_list()
    want = [GOLDEN_CODEWORD[i] for i in range(1, 27)]
    dt = time.perf_counter() - t
    report(1, "golden codeword", word == want and dt < 1, f"{dt:.2f}s")


def test_2_exhaustive_code_13_26(report):
    t = time.perf_counter()
    g = graph(CODE_13_26)
    s, _ = preprocess(g)
    infos = (np.arange(1 << 13)[:, None] >> np.arange(13) & 1).astype(np.uint8)
    cw, _, _ = encode_many(s, infos)
    valid = all(verify(g.check_adj, row) for row in cw)
    distinct = len({row.tobytes() for row in cw})
    dt = time.perf_counter() - t
    report(2, "8192 info words valid and distinct", valid and distinct == 8192 and dt < 10, f"{distinct} distinct, {dt:.1f}s")


def test_3_pseudo_tree_xor_count(report):
    g = graph(PSEUDO_TREE_16)
    spec = [{"checks": list(range(7)), "parents": {c - 1: b - 1 for c, b in PSEUDO_TREE_16_PARENTS.items()}}]
    s = compile_schedule(pinned_plan(g, spec), g)
    rng = np.random.default_rng(0)
    counts = {encode(s, rng.integers(0, 2, s.n_info)).xor_count for _ in range(32)}
    report(3, "pseudo-tree costs 21 XORs", counts == {21}, f"counts {sorted(counts)}")


def test_4_complexity_bounds(report):
    t = time.perf_counter()
    rng = np.random.default_rng(4)
    worst = 0.0
    bad = []
    for i in range(300):
        split = i >= 200
        n = int(rng.integers(50, 2001))
        cw = [2, 3, 4, 5, 6, 8] if split else 3
        g = random_ldpc(n, cw, float(rng.uniform(4, 8)), 10_000 + i)
        s, plan = preprocess(g)
        assert plan.budget_factor == (4 if split else 2)
        bound = s.xor_budget
        infos = rng.integers(0, 2, (64, s.n_info), dtype=np.uint8)
        for u in infos[:3]:
            x = encode(s, u).xor_count
            worst = max(worst, x / bound)
            if x > bound:
                bad.append((i, x, bound))
    dt = time.perf_counter() - t
    report(4, "xor_count within 2M(k-1) and 4M(k-1)", not bad and dt < 60, f"max ratio {worst:.2f}, {len(bad)} over, {dt:.1f}s")


def test_5_oracle_equivalence(report):
    t = time.perf_counter()
    rng = np.random.default_rng(5)
    bad = []
    for i in range(50):
        n = int(rng.integers(6, 19))
        g = random_ldpc(n, [2, 3], float(rng.uniform(3, 6)), 20_000 + i)
        s, _ = preprocess(g)
        k = s.n_info
        infos = (np.arange(1 << k)[:, None] >> np.arange(k) & 1).astype(np.uint8)
        cw, _, _ = encode_many(s, infos)
        got = {tuple(int(v) for v in row) for row in cw}
        if got != enumerate_codewords(g.check_adj, g.n_bits) or len(got) != 1 << k:
            bad.append(i)
    dt = time.perf_counter() - t
    report(5, "encoder image equals the enumerated nullspace", not bad and dt < 30, f"{len(bad)} mismatches, {dt:.1f}s")


def test_6_mode_equivalence(report):
    rng = np.random.default_rng(6)
    pairs = 0
    mismatches = 0
    for i in range(100):
        g = random_ldpc(int(rng.integers(20, 400)), 3 if i % 2 else [2, 3, 4, 6], float(rng.uniform(4, 8)), 30_000 + i)
        a, _ = preprocess(g, "flip")
        b, _ = preprocess(g, "recompute")
        infos = rng.integers(0, 2, (100, a.n_info), dtype=np.uint8)
        ca, _, _ = encode_many(a, infos)
        cb, _, _ = encode_many(b, infos)
        mismatches += int((ca != cb).any(axis=1).sum())
        pairs += len(infos)
    report(6, "flip and recompute agree", pairs == 10_000 and mismatches == 0, f"{pairs} pairs, {mismatches} differ")


def test_7_structured_families(report):
    rng = np.random.default_rng(7)
    bad = {"cycle": 0, "tree": 0, "triangular": 0}
    for i in range(100):
        m = int(rng.integers(4, 40))
        _, plan = preprocess(random_cycle_code(int(rng.integers(m, 3 * m)), m, 40_000 + i))
        bad["cycle"] += any(p.kind == "stopping-set" for p in plan.pieces) or plan.n_pseudo_sets > 0
        s, _ = preprocess(random_tree(int(rng.integers(1, 30)), seed=50_000 + i))
        bad["tree"] += s.n_keys != 0 or not all(isinstance(st, ComputeParity) for st in s.steps)
        mt = int(rng.integers(3, 30))
        _, plan = preprocess(random_upper_triangular(mt, mt + int(rng.integers(0, 30)), seed=60_000 + i))
        bad["triangular"] += any(p.kind == "stopping-set" for p in plan.pieces)
    report(7, "cycle, tree and triangular families", not any(bad.values()), ", ".join(f"{k} {v}" for k, v in bad.items()))


def test_8_linear_scaling(report):
    sizes = [1_000, 10_000, 100_000]
    means = []
    for n in sizes:
        s, _ = preprocess(random_ldpc(n, 3, 6.0, 8))
        infos = np.random.default_rng(n).integers(0, 2, (64, s.n_info), dtype=np.uint8)
        _, total, _ = encode_many(s, infos)
        means.append(total / len(infos))
    x, y = np.array(sizes, float), np.array(means)
    slope, icept = np.polyfit(x, y, 1)
    r2 = 1 - ((y - (slope * x + icept)) ** 2).sum() / ((y - y.mean()) ** 2).sum()
    report(8, "mean xor_count linear in n", r2 >= 0.99, f"R^2={r2:.5f}, {slope:.2f} XORs per bit")
