"""Schedule compilation and execution.

A :class:`Schedule` is a flat list of steps over the (possibly split)
work graph. Executing it never branches on anything but bit values, so
the XOR count is a property of the schedule plus, in recompute mode, of
which reevaluated bits came out nonzero.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .decompose import DecompositionPlan, preprocess_plan
from .errors import UsageError
from .gf2 import BitWord
from .steps import (  # noqa: F401
    DELTA_IN_BOTH,
    DISJOINT,
    FLIP,
    GAMMA_IN_BOTH,
    MODES,
    RECOMPUTE,
    ComputeParity,
    CorrectPair,
    CorrectSingle,
    EvalKeyCheck,
    FlipList,
    Recompute,
    Step,
    base_steps,
    correction_steps,
    linear_response,
    piece_steps,
    program_to_steps,
    reverse_lanes,
    forward_lanes,
    step_cost,
    steps_to_program,
)
from .tanner import TannerGraph


# --------------------------------------------------------------- schedule


def graph_digest(g: TannerGraph) -> bytes:
    return hashlib.sha256(g.digest_payload()).digest()


@dataclass(frozen=True)
class Schedule:
    """Compiled encoder for one parity-check matrix.

    ``info_positions`` are codeword indices (ascending) fed from the input
    word in order; ``load_positions`` are where those values land in the
    work graph, which differs from the codeword only after degree splitting.
    """

    n_bits: int
    n_work_bits: int
    info_positions: tuple[int, ...]
    load_positions: tuple[int, ...]
    steps: tuple
    xor_budget: int
    mode: str
    n_keys: int
    digest: bytes = b""
    program: np.ndarray = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.program is None:
            object.__setattr__(self, "program", steps_to_program(self.steps))
        self.program.setflags(write=False)

    @property
    def n_info(self) -> int:
        return len(self.info_positions)

    def static_xor_count(self) -> int:
        """Worst-case XORs: every guarded step counted as fired."""
        return sum(step_cost(s) for s in self.steps)


@dataclass
class EncodeReport:
    codeword: BitWord
    xor_count: int
    flip_ops: int


def compile_schedule(
    plan: DecompositionPlan,
    g: TannerGraph | None = None,
    mode: str = FLIP,
    digest: bytes = b"",
) -> Schedule:
    """Turn a decomposition plan into an executable schedule."""
    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}")
    rows = plan.check_rows
    if g is not None:
        if g.n_bits != plan.n_bits or tuple(g.check_adj) != tuple(rows[: g.n_checks]):
            raise UsageError("plan was not built for this graph")
    known = bytearray(plan.n_bits)
    for b in plan.info_bits:
        known[b] = 1
    steps: list = []
    n_keys = 0

    def need(bits) -> None:
        for b in bits:
            if not known[b]:
                raise UsageError(f"step reads bit {b} before it is determined")

    # correction targets may be read by earlier pieces while still zero;
    # the flip list attached to the correction repairs those readers
    late = {sc.target for p in plan.pieces for sc in p.corrections}
    for b in late:
        known[b] = 1
    for piece in plan.pieces:
        ps, held, n_keys = piece_steps(piece, rows, mode, n_keys)
        for b in held:
            if b in late:
                continue
            if known[b]:
                raise UsageError(f"held bit {b} already determined")
            known[b] = 1
        for st in ps:
            if isinstance(st, ComputeParity):
                need(st.sources)
                if known[st.target]:
                    raise UsageError(f"parity bit {st.target} determined twice")
                known[st.target] = 1
            elif isinstance(st, (EvalKeyCheck, Recompute)):
                need(st.sources)
        steps.extend(ps)
    if 0 in known:
        missing = [i for i, v in enumerate(known) if not v][:5]
        raise UsageError(f"plan leaves bits undetermined, e.g. {missing}")

    n_out = plan.split.original_n_bits if plan.split else plan.n_bits
    work_info = plan.info_bits
    if plan.split:
        owner = plan.split.clone_owner()
        pairs = sorted((owner.get(b, b), b) for b in work_info)
    else:
        pairs = [(b, b) for b in work_info]
    return Schedule(
        n_bits=n_out,
        n_work_bits=plan.n_bits,
        info_positions=tuple(p for p, _ in pairs),
        load_positions=tuple(w for _, w in pairs),
        steps=tuple(steps),
        xor_budget=plan.xor_budget,
        mode=mode,
        n_keys=n_keys,
        digest=digest,
    )


compile = compile_schedule  # noqa: A001


def preprocess(g: TannerGraph, mode: str = FLIP) -> tuple[Schedule, DecompositionPlan]:
    """Split, decompose and compile ``g`` in one call."""
    plan = preprocess_plan(g)
    return compile_schedule(plan, None, mode, digest=graph_digest(g)), plan


# ---------------------------------------------------------------- execution


def _as_bits(info, n: int) -> np.ndarray:
    if isinstance(info, BitWord):
        arr = info.to_array()
    else:
        arr = np.asarray(info, dtype=np.uint8)
    if arr.ndim != 1 or arr.size != n:
        raise UsageError(f"info word has {arr.size} bits, schedule expects {n}")
    return arr


def encode(s: Schedule, info, impl=None) -> EncodeReport:
    vals = _as_bits(info, s.n_info)
    pos = np.asarray(s.load_positions, dtype=np.int64)
    x, xors, flips = kernels.run_program(s.program, s.n_work_bits, s.n_keys, pos, vals, impl=impl)
    return EncodeReport(BitWord.from_array(np.asarray(x[: s.n_bits])), int(xors), int(flips))


def encode_many(s: Schedule, infos, impl=None) -> tuple[np.ndarray, int, int]:
    """Encode a batch, 64 words per machine word.

    ``infos`` is ``(N, n_info)`` of 0/1. Returns ``(codewords (N, n_bits),
    total_xors, total_flips)``.
    """
    a = np.asarray(infos, dtype=np.uint8)
    if a.ndim != 2 or a.shape[1] != s.n_info:
        raise UsageError(f"expected an (N, {s.n_info}) array of info bits")
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, s.n_bits), dtype=np.uint8), 0, 0
    W = (n + 63) // 64
    padded = np.zeros((W * 64, s.n_info), dtype=np.uint8)
    padded[:n] = a
    # lane j of word w is row 64*w + j; pack along the lane axis so the
    # transposes below only move bytes, not bits
    packed = np.packbits(padded.reshape(W, 64, s.n_info), axis=1, bitorder="little")
    words = np.ascontiguousarray(packed.transpose(2, 0, 1)).view("<u8").reshape(s.n_info, W)
    words = words.astype(np.uint64, copy=False)
    pos = np.asarray(s.load_positions, dtype=np.int64)
    state, xors, flips = kernels.run_program_sliced(s.program, s.n_work_bits, s.n_keys, pos, words, n, impl=impl)
    state = np.ascontiguousarray(state[: s.n_bits]).astype("<u8", copy=False)
    lanes = np.ascontiguousarray(state.view(np.uint8).reshape(s.n_bits, W, 8).transpose(1, 2, 0))
    bits = np.unpackbits(lanes, axis=1, bitorder="little")
    cw = bits.reshape(W * 64, s.n_bits)[:n]
    return cw, int(xors), int(flips)


def solve_correction(tag: str, c_alpha: int, c_beta: int) -> tuple[int, int]:
    """Changes to (x_gamma, x_delta) that zero both key checks."""
    c_alpha &= 1
    c_beta &= 1
    if tag == GAMMA_IN_BOTH:
        return c_alpha, c_alpha ^ c_beta
    if tag == DELTA_IN_BOTH:
        return c_alpha ^ c_beta, c_beta
    if tag == DISJOINT:
        return c_alpha, c_beta
    raise UsageError(f"unknown case tag {tag!r}")


def label_and_decide(g, info_bits: Sequence[int], values: Sequence[int]) -> list[int] | None:
    """Plain label-and-decide: repeatedly solve any check with one unknown bit.

    Returns the codeword, or None when some parity cannot be determined.
    A check whose bits are all known must already be satisfied.
    """
    n = g.n_bits
    x = [0] * n
    known = bytearray(n)
    for b, v in zip(info_bits, values):
        x[b] = v & 1
        known[b] = 1
    unknown = [sum(1 for b in row if not known[b]) for row in g.check_adj]
    queue = [c for c, u in enumerate(unknown) if u == 1]
    while queue:
        c = queue.pop()
        if unknown[c] != 1:
            continue
        row = g.check_adj[c]
        t = next(b for b in row if not known[b])
        v = 0
        for b in row:
            if b != t:
                v ^= x[b]
        x[t] = v
        known[t] = 1
        for cc in g.bit_adj[t]:
            unknown[cc] -= 1
            if unknown[cc] == 1:
                queue.append(cc)
    if 0 in known:
        return None
    return x
