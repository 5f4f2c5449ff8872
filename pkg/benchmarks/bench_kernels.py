"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--n 2000 5000] [--words 4096] [--repeat 3]

Times the single-word interpreter, the 64-lane bit-sliced interpreter, the
peeling kernel and GF(2) row reduction on random column-weight-3 codes, and checks that both
backends agree on every output.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from linenc import kernels
from linenc.codes import random_ldpc
from linenc.encoder import encode_many, preprocess
from linenc.gf2 import DenseGf2Matrix


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_code(n: int, words: int, repeat: int, seed: int) -> list[tuple]:
    g = random_ldpc(n, 3, 6.0, seed)
    s, _ = preprocess(g)
    rng = np.random.default_rng(seed)
    infos = rng.integers(0, 2, size=(words, s.n_info), dtype=np.uint8)
    pos = np.asarray(s.load_positions, dtype=np.int64)
    c_ptr, c_idx, b_ptr, b_idx = kernels.csr_of(g)
    dense = DenseGf2Matrix.from_row_lists(g.check_adj, g.n_bits)

    rows = []
    ref = None
    for name, impl in kernels.backends().items():
        def single():
            for u in infos[:64]:
                impl.run_program(s.program, s.n_work_bits, s.n_keys, pos, u)

        def sliced():
            return encode_many(s, infos, impl=impl)

        def peel():
            impl.peel_inplace(c_ptr, c_idx, b_ptr, b_idx, bytearray(b"\x01") * g.n_bits, bytearray(b"\x01") * g.n_checks, None)

        def reduce():
            return kernels.kept_rows(dense.data, impl)

        out = (sliced()[0], reduce())
        if ref is None:
            ref = out
        elif not (np.array_equal(ref[0], out[0]) and ref[1] == out[1]):
            raise SystemExit(f"backend {name} disagrees on n={n}")
        t_single = best_of(single, repeat) / 64
        t_sliced = best_of(sliced, repeat) / words
        t_peel = best_of(peel, repeat)
        t_reduce = best_of(reduce, repeat)
        rows.append((n, name, t_single * 1e6, t_sliced * 1e6, t_peel * 1e3, t_reduce * 1e3))
    return rows


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1000, 5000])
    ap.add_argument("--words", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    print(f"{'n':>7} {'backend':>8} {'us/word':>10} {'us/word sliced':>15} {'peel ms':>9} {'rank ms':>9}")
    for n in args.n:
        rows = bench_code(n, args.words, args.repeat, args.seed)
        for r in rows:
            print(f"{r[0]:>7} {r[1]:>8} {r[2]:>10.2f} {r[3]:>15.3f} {r[4]:>9.2f} {r[5]:>9.2f}")
        if len(rows) == 2:
            py, cy = rows
            print(f"{'':>7} speedup  {py[2] / cy[2]:>10.1f} {py[3] / cy[3]:>15.1f} {py[4] / cy[4]:>9.1f} {py[5] / cy[5]:>9.1f}")


if __name__ == "__main__":
    main()
