"""Step vocabulary and per-piece step generation.

A piece of a decomposition plan turns into a short list of steps. The
same lists drive the compiled schedule and the linear-response analysis
used to place corrections while the plan is still being built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import StructuralError, UsageError
from .kernels import (
    OP_COMPUTE,
    OP_EVAL,
    OP_FLIP,
    OP_PAIR,
    OP_RECOMPUTE,
    OP_SINGLE,
    TAG_DELTA_BOTH,
    TAG_DISJOINT,
    TAG_GAMMA_BOTH,
)

FLIP = "flip"
RECOMPUTE = "recompute"
MODES = (FLIP, RECOMPUTE)

GAMMA_IN_BOTH = "gamma-in-both"
DELTA_IN_BOTH = "delta-in-both"
DISJOINT = "disjoint"
_TAG_CODE = {DISJOINT: TAG_DISJOINT, GAMMA_IN_BOTH: TAG_GAMMA_BOTH, DELTA_IN_BOTH: TAG_DELTA_BOTH}
_CODE_TAG = {v: k for k, v in _TAG_CODE.items()}


# ------------------------------------------------------------------ steps


@dataclass(frozen=True)
class ComputeParity:
    target: int
    sources: tuple[int, ...]


@dataclass(frozen=True)
class EvalKeyCheck:
    key: int
    sources: tuple[int, ...]


@dataclass(frozen=True)
class CorrectPair:
    tag: str
    key_alpha: int
    key_beta: int
    gamma: int
    delta: int


@dataclass(frozen=True)
class CorrectSingle:
    key: int
    target: int


@dataclass(frozen=True)
class Recompute:
    guards: tuple[int, ...]
    target: int
    sources: tuple[int, ...]


@dataclass(frozen=True)
class FlipList:
    """Flip ``bits`` when the XOR of ``condition`` bits is one."""

    condition: tuple[int, ...]
    bits: tuple[int, ...]


Step = ComputeParity | EvalKeyCheck | CorrectPair | CorrectSingle | Recompute | FlipList


def step_cost(step) -> int:
    """XORs the step executes when its guard fires."""
    if isinstance(step, (ComputeParity, EvalKeyCheck, Recompute)):
        return max(len(step.sources) - 1, 0)
    if isinstance(step, CorrectPair):
        return 0 if step.tag == DISJOINT else 1
    if isinstance(step, FlipList):
        return max(len(step.condition) - 1, 0)
    return 0


def steps_to_program(steps: Sequence) -> np.ndarray:
    out: list[int] = []
    for s in steps:
        if isinstance(s, ComputeParity):
            out += [OP_COMPUTE, s.target, len(s.sources), *s.sources]
        elif isinstance(s, EvalKeyCheck):
            out += [OP_EVAL, s.key, len(s.sources), *s.sources]
        elif isinstance(s, CorrectPair):
            out += [OP_PAIR, _TAG_CODE[s.tag], s.key_alpha, s.key_beta, s.gamma, s.delta]
        elif isinstance(s, CorrectSingle):
            out += [OP_SINGLE, s.key, s.target]
        elif isinstance(s, Recompute):
            out += [OP_RECOMPUTE, len(s.guards), *s.guards, s.target, len(s.sources), *s.sources]
        elif isinstance(s, FlipList):
            out += [OP_FLIP, len(s.condition), *s.condition, len(s.bits), *s.bits]
        else:
            raise UsageError(f"unknown step {s!r}")
    return np.asarray(out, dtype=np.int32)


def program_to_steps(prog: Sequence[int]) -> list:
    prog = [int(v) for v in prog]
    out: list = []
    i = 0
    while i < len(prog):
        op = prog[i]
        if op in (OP_COMPUTE, OP_EVAL):
            t, n = prog[i + 1], prog[i + 2]
            srcs = tuple(prog[i + 3 : i + 3 + n])
            out.append(ComputeParity(t, srcs) if op == OP_COMPUTE else EvalKeyCheck(t, srcs))
            i += 3 + n
        elif op == OP_PAIR:
            tag, a, b, g, d = prog[i + 1 : i + 6]
            out.append(CorrectPair(_CODE_TAG[tag], a, b, g, d))
            i += 6
        elif op == OP_SINGLE:
            out.append(CorrectSingle(prog[i + 1], prog[i + 2]))
            i += 3
        elif op == OP_RECOMPUTE:
            ng = prog[i + 1]
            guards = tuple(prog[i + 2 : i + 2 + ng])
            j = i + 2 + ng
            t, n = prog[j], prog[j + 1]
            out.append(Recompute(guards, t, tuple(prog[j + 2 : j + 2 + n])))
            i = j + 2 + n
        elif op == OP_FLIP:
            nc = prog[i + 1]
            cond = tuple(prog[i + 2 : i + 2 + nc])
            j = i + 2 + nc
            n = prog[j]
            out.append(FlipList(cond, tuple(prog[j + 1 : j + 1 + n])))
            i = j + 1 + n
        else:
            raise UsageError(f"bad opcode {op} at position {i}")
    return out


def _coef_propagate(steps: Iterable[ComputeParity], seeds: dict[int, int]) -> dict[int, int]:
    """GF(2) dependence of each computed bit on the seed bits, as bitmasks."""
    coef = dict(seeds)
    for s in steps:
        v = 0
        for b in s.sources:
            v ^= coef.get(b, 0)
        if v:
            coef[s.target] = v
        else:
            coef.pop(s.target, None)
    return coef


def piece_steps(piece, rows: Sequence[Sequence[int]], mode: str, next_key: int) -> tuple[list, list[int], int]:
    """Steps for one piece and its corrections.

    Returns ``(steps, held, next_key)`` where ``held`` are bits that start
    at zero inside the piece and are set later by a correction step.
    """
    steps, held, next_key = base_steps(piece, rows, mode, next_key)
    more, next_key = correction_steps(piece, rows, next_key)
    held.extend(sc.target for sc in piece.corrections)
    return steps + more, held, next_key


def base_steps(piece, rows: Sequence[Sequence[int]], mode: str, next_key: int) -> tuple[list, list[int], int]:
    """Like :func:`piece_steps` but without the attached corrections."""
    steps: list = []
    held: list[int] = []
    if piece.kind == "pseudo-tree":
        pt = piece.tree
        for c in pt.bottom_up_checks():
            p = pt.parent_of[c]
            steps.append(ComputeParity(p, tuple(b for b in rows[c] if b != p)))
    elif piece.kind == "stopping-set":
        info = piece.info
        reeval = list(info.reevaluated_bits)
        held.extend(reeval)
        pt = info.residual_pseudo_tree
        tree_steps = []
        for c in pt.bottom_up_checks():
            p = pt.parent_of[c]
            tree_steps.append(ComputeParity(p, tuple(b for b in rows[c] if b != p)))
        steps.extend(tree_steps)
        key_ids = []
        for c in info.key_checks:
            steps.append(EvalKeyCheck(next_key, tuple(rows[c])))
            key_ids.append(next_key)
            next_key += 1
        coef = _coef_propagate(tree_steps, {b: 1 << i for i, b in enumerate(reeval)})

        def key_coef(c: int) -> int:
            v = 0
            for b in rows[c]:
                v ^= coef.get(b, 0)
            return v

        if info.fold == 1:
            if key_coef(info.key_checks[0]) != 1:
                raise StructuralError(f"key check {info.key_checks[0]} does not depend on bit {reeval[0]}")
            steps.append(CorrectSingle(key_ids[0], reeval[0]))
        else:
            a, b = (key_coef(c) for c in info.key_checks)
            matrix = ((a & 1, a >> 1 & 1), (b & 1, b >> 1 & 1))
            tag = {
                ((1, 0), (0, 1)): DISJOINT,
                ((1, 0), (1, 1)): GAMMA_IN_BOTH,
                ((1, 1), (0, 1)): DELTA_IN_BOTH,
            }.get(matrix)
            if tag is None:
                raise StructuralError(f"reevaluated bits {reeval} violate the selection conditions: {matrix}")
            if info.case is not None and info.case != tag:
                raise StructuralError(f"case tag {info.case} disagrees with effective containment {tag}")
            steps.append(CorrectPair(tag, key_ids[0], key_ids[1], reeval[0], reeval[1]))
        if mode == FLIP:
            for i, r in enumerate(reeval):
                bits = tuple(s.target for s in tree_steps if coef.get(s.target, 0) >> i & 1)
                if bits:
                    steps.append(FlipList((r,), bits))
        else:
            for s in tree_steps:
                m = coef.get(s.target, 0)
                if m:
                    guards = tuple(r for i, r in enumerate(reeval) if m >> i & 1)
                    steps.append(Recompute(guards, s.target, s.sources))
    elif piece.kind != "free":
        raise UsageError(f"unknown piece kind {piece.kind!r}")
    return steps, held, next_key


def correction_steps(piece, rows: Sequence[Sequence[int]], next_key: int) -> tuple[list, int]:
    steps: list = []
    for sc in piece.corrections:
        steps.append(EvalKeyCheck(next_key, tuple(rows[sc.check_id])))
        steps.append(CorrectSingle(next_key, sc.target))
        next_key += 1
        if sc.flips:
            steps.append(FlipList((sc.target,), tuple(sc.flips)))
    return steps, next_key


def _flip_steps(piece, rows, cache: dict | None) -> list:
    if cache is None:
        return piece_steps(piece, rows, FLIP, 0)[0]
    base = cache.get(piece.key)
    if base is None:
        base = cache[piece.key] = base_steps(piece, rows, FLIP, 0)[0]
    # local key ids: every key is evaluated before use inside its piece
    return base + correction_steps(piece, rows, len(base))[0]


def forward_lanes(steps: Iterable, x: dict[int, int]) -> None:
    """Push lane masks forward through ``steps``, updating ``x`` in place.

    ``x`` maps bits to masks; bit ``i`` of a mask is the change of that bit
    when lane ``i`` is toggled.  Key ids are local to the step list.
    """
    key: dict[int, int] = {}
    for st in steps:
        if isinstance(st, (ComputeParity, EvalKeyCheck)):
            v = 0
            for b in st.sources:
                v ^= x.get(b, 0)
            if isinstance(st, ComputeParity):
                x[st.target] = v
            else:
                key[st.key] = v
        elif isinstance(st, CorrectPair):
            a, b = key[st.key_alpha], key[st.key_beta]
            dg, dd = {DISJOINT: (a, b), GAMMA_IN_BOTH: (a, a ^ b), DELTA_IN_BOTH: (a ^ b, b)}[st.tag]
            x[st.gamma], x[st.delta] = dg, dd
        elif isinstance(st, CorrectSingle):
            x[st.target] = key[st.key]
        elif isinstance(st, FlipList):
            cond = 0
            for b in st.condition:
                cond ^= x.get(b, 0)
            if cond:
                for b in st.bits:
                    x[b] = x.get(b, 0) ^ cond


def reverse_lanes(steps: Sequence, sens: dict[int, int]) -> None:
    """Adjoint of :func:`forward_lanes`.

    On entry ``sens[b]`` has bit ``i`` set when observable ``i`` is an XOR
    that includes ``b`` after the steps; on exit the same holds for the
    values before them.
    """
    ks: dict[int, int] = {}
    for st in reversed(steps):
        if isinstance(st, ComputeParity):
            v = sens.pop(st.target, 0)
            if v:
                for b in st.sources:
                    sens[b] = sens.get(b, 0) ^ v
        elif isinstance(st, EvalKeyCheck):
            v = ks.pop(st.key, 0)
            if v:
                for b in st.sources:
                    sens[b] = sens.get(b, 0) ^ v
        elif isinstance(st, CorrectSingle):
            v = sens.pop(st.target, 0)
            if v:
                ks[st.key] = ks.get(st.key, 0) ^ v
        elif isinstance(st, CorrectPair):
            sg, sd = sens.pop(st.gamma, 0), sens.pop(st.delta, 0)
            if st.tag == DISJOINT:
                sa, sb = sg, sd
            elif st.tag == GAMMA_IN_BOTH:
                sa, sb = sg ^ sd, sd
            else:
                sa, sb = sg, sg ^ sd
            ks[st.key_alpha] = ks.get(st.key_alpha, 0) ^ sa
            ks[st.key_beta] = ks.get(st.key_beta, 0) ^ sb
        elif isinstance(st, FlipList):
            hit = 0
            for b in st.bits:
                hit ^= sens.get(b, 0)
            if hit:
                for b in st.condition:
                    sens[b] = sens.get(b, 0) ^ hit


def linear_response(
    pieces: Sequence, rows: Sequence[Sequence[int]], inputs: Sequence[int], cache: dict | None = None
) -> dict[int, int]:
    """Effect of each input bit on every bit the pieces touch.

    All lanes run at once: bit ``i`` of the returned mask for bit ``b``
    says whether flipping ``inputs[i]`` (everything else zero) flips ``b``.
    ``cache`` maps piece keys to their correction-free steps.
    """
    x: dict[int, int] = {b: 1 << i for i, b in enumerate(inputs)}
    for piece in pieces:
        forward_lanes(_flip_steps(piece, rows, cache), x)
    return {b: v for b, v in x.items() if v}
