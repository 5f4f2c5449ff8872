"""Command-line entry point: ``linenc {info,preprocess,encode,verify,bench}``."""

from __future__ import annotations

import argparse
import sys
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, kernels
from .encoder import MODES, encode, encode_many, preprocess
from .errors import LinencError
from .gf2 import BitWord
from .io import read_codewords, read_matrix, read_schedule, save_schedule
from .oracle import systematic_form, verify
from .tanner import SubgraphMask, connected_components


def _hist(values) -> str:
    return " ".join(f"{k}:{v}" for k, v in sorted(Counter(values).items()))


def cmd_info(args) -> int:
    g = read_matrix(args.matrix)
    rank = systematic_form(g.check_adj, g.n_bits).rank
    comps = connected_components(g, SubgraphMask.full(g))
    print(f"n={g.n_bits} M={g.n_checks} rank={rank} edges={g.n_edges}")
    print(f"bit degrees   {_hist(len(a) for a in g.bit_adj)}")
    print(f"check degrees {_hist(len(r) for r in g.check_adj)}")
    print(f"components={len(comps)}")
    return 0


def cmd_preprocess(args) -> int:
    g = read_matrix(args.matrix)
    t0 = time.perf_counter()
    s, plan = preprocess(g, args.mode)
    dt = time.perf_counter() - t0
    summ = plan.summary()
    keys, reeval = [], []
    for p in plan.pieces:
        if p.kind == "stopping-set":
            keys += p.info.key_checks
            reeval += p.info.reevaluated_bits
    n_sets = summ["fold1"] + summ["fold2"]
    print(f"pieces: {len(plan.pieces)} ({summ['pseudo_trees']} pseudo-trees, {n_sets} stopping sets)")
    print(f"stopping sets: {summ['fold1']} one-fold, {summ['fold2']} two-fold")
    print(f"key checks: {len(keys)}  reevaluated bits: {len(reeval)}")
    if summ["synthesized"] or summ["redundant"]:
        print(f"synthesized checks: {summ['synthesized']}  redundant checks: {summ['redundant']}")
    if plan.split is not None and not plan.split.is_identity:
        print(f"degree split: {plan.n_bits - plan.split.original_n_bits} clone bits")
    print(f"info bits: {s.n_info}  mode: {s.mode}")
    print(f"xor_budget: {s.xor_budget}  worst-case schedule xors: {s.static_xor_count()}")
    print(f"preprocess time: {dt:.3f}s")
    if args.output:
        save_schedule(s, args.output)
    return 0


def _info_words(args, n_info: int) -> np.ndarray:
    if args.random is not None:
        rng = np.random.default_rng(args.seed)
        return rng.integers(0, 2, size=(args.random, n_info), dtype=np.uint8)
    if args.input:
        words = read_codewords(args.input, n_info)
    else:
        words = [BitWord.from_hex(ln.strip(), n_info) for ln in sys.stdin if ln.strip()]
    if not words:
        return np.zeros((0, n_info), dtype=np.uint8)
    return np.stack([w.to_array() for w in words])


def cmd_encode(args) -> int:
    s = read_schedule(args.schedule)
    infos = _info_words(args, s.n_info)
    out = sys.stdout
    for row in infos:
        r = encode(s, row)
        line = r.codeword.to_hex()
        if args.stats:
            line += f" xors={r.xor_count}"
        out.write(line + "\n")
    return 0


def cmd_verify(args) -> int:
    g = read_matrix(args.matrix)
    words = read_codewords(args.codewords, g.n_bits)
    bad = [i for i, w in enumerate(words) if not verify(g.check_adj, w)]
    for i in bad:
        print(f"word {i + 1}: parity check failed", file=sys.stderr)
    print(f"{len(words) - len(bad)}/{len(words)} codewords valid")
    return 1 if bad else 0


def cmd_bench(args) -> int:
    g = read_matrix(args.matrix)
    s, _ = preprocess(g, args.mode)
    rng = np.random.default_rng(args.seed)
    infos = rng.integers(0, 2, size=(args.words, s.n_info), dtype=np.uint8)
    chunks = np.array_split(infos, max(1, args.threads))
    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        results = list(pool.map(lambda c: encode_many(s, c), chunks))
    dt = time.perf_counter() - t0
    xors = sum(r[1] for r in results)
    kbar = g.mean_check_degree()
    bound = (4 if g.max_bit_degree > 3 else 2) * g.n_checks * (kbar - 1)
    print(f"backend={kernels.BACKEND} words={args.words} time={dt:.4f}s rate={args.words / max(dt, 1e-9):.0f} words/s")
    print(f"mean xor_count={xors / max(args.words, 1):.1f} budget={s.xor_budget} bound={bound:.0f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="linenc", description="Linear-time LDPC encoding schedules.")
    ap.add_argument("--version", action="version", version=f"linenc {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("info", help="matrix statistics")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("preprocess", help="decompose and compile a schedule")
    p.add_argument("matrix")
    p.add_argument("-o", "--output")
    p.add_argument("--mode", choices=MODES, default="flip")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("encode", help="encode info words with a compiled schedule")
    p.add_argument("schedule")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--in", dest="input", help="file of hex info words, one per line")
    src.add_argument("--random", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stats", action="store_true", help="append the xor count to each line")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("verify", help="check codewords against a matrix")
    p.add_argument("matrix")
    p.add_argument("codewords")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="batch encode throughput")
    p.add_argument("matrix")
    p.add_argument("--words", type=int, default=10000)
    p.add_argument("--mode", choices=MODES, default="flip")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LinencError as exc:
        print(f"linenc: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"linenc: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
