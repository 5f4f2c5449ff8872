"""Matrix and schedule file formats.

Matrices come as alist (1-indexed sparse lists) or as dense 0/1 rows;
:func:`read_matrix` sniffs which. Schedules serialize to a small
little-endian binary that is byte-for-byte deterministic.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .encoder import MODES, Schedule, graph_digest, program_to_steps
from .errors import FormatError, UsageError
from .gf2 import BitWord
from .tanner import TannerGraph


@dataclass
class AlistDocument:
    n_bits: int
    n_checks: int
    max_bit_degree: int
    max_check_degree: int
    bit_degrees: list[int]
    check_degrees: list[int]
    bit_lists: list[list[int]]  # 1-indexed check ids
    check_lists: list[list[int]]  # 1-indexed bit ids

    @classmethod
    def from_graph(cls, g: TannerGraph) -> "AlistDocument":
        bl = [[c + 1 for c in a] for a in g.bit_adj]
        cl = [[b + 1 for b in r] for r in g.check_adj]
        return cls(
            g.n_bits,
            g.n_checks,
            max((len(a) for a in bl), default=0),
            max((len(r) for r in cl), default=0),
            [len(a) for a in bl],
            [len(r) for r in cl],
            bl,
            cl,
        )

    def to_graph(self) -> TannerGraph:
        return TannerGraph.from_matrix([[b - 1 for b in r] for r in self.check_lists], self.n_bits)


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(t) for t in line.split()]
    except ValueError:
        raise FormatError(f"expected integers, got {line.strip()!r}", lineno) from None


def parse_alist_document(text: str) -> AlistDocument:
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines()) if ln.strip()]
    pos = 0

    def take(what: str) -> tuple[int, list[int]]:
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 0
            raise FormatError(f"file ends before {what}", last + 1)
        lineno, ln = lines[pos]
        pos += 1
        return lineno, _ints(ln, lineno)

    ln, head = take("the size line")
    if len(head) != 2 or min(head) < 0:
        raise FormatError("size line must be 'n_bits n_checks'", ln)
    n, m = head
    ln, head = take("the max-degree line")
    if len(head) != 2:
        raise FormatError("max-degree line must hold two integers", ln)
    max_b, max_c = head
    ln, bdeg = take("bit degrees")
    if len(bdeg) != n:
        raise FormatError(f"expected {n} bit degrees, got {len(bdeg)}", ln)
    ln, cdeg = take("check degrees")
    if len(cdeg) != m:
        raise FormatError(f"expected {m} check degrees, got {len(cdeg)}", ln)
    if max(bdeg, default=0) != max_b or max(cdeg, default=0) != max_c:
        raise FormatError("max degrees disagree with the degree lists", ln)

    def adjacency(count: int, degs: list[int], limit: int, what: str) -> tuple[list[list[int]], list[int]]:
        out, where = [], []
        for i in range(count):
            ln, vals = take(f"{what} list {i + 1}")
            # zero entries pad short lists up to the max degree
            nz = [v for v in vals if v != 0]
            if len(nz) != degs[i]:
                raise FormatError(f"{what} {i + 1} lists {len(nz)} neighbors, degree says {degs[i]}", ln)
            for v in nz:
                if not 1 <= v <= limit:
                    raise FormatError(f"index {v} outside 1..{limit}", ln)
            if len(set(nz)) != len(nz):
                raise FormatError(f"{what} {i + 1} repeats a neighbor", ln)
            out.append(nz)
            where.append(ln)
        return out, where

    bit_lists, _ = adjacency(n, bdeg, m, "bit")
    check_lists, check_lines = adjacency(m, cdeg, n, "check")
    from_bits: list[set[int]] = [set() for _ in range(m)]
    for b, a in enumerate(bit_lists):
        for c in a:
            from_bits[c - 1].add(b + 1)
    for c, r in enumerate(check_lists):
        if set(r) != from_bits[c]:
            raise FormatError(f"check {c + 1} disagrees with the bit lists", check_lines[c])
    return AlistDocument(n, m, max_b, max_c, bdeg, cdeg, bit_lists, check_lists)


def parse_alist(text: str) -> TannerGraph:
    return parse_alist_document(text).to_graph()


def write_alist(obj: TannerGraph | AlistDocument) -> str:
    doc = obj if isinstance(obj, AlistDocument) else AlistDocument.from_graph(obj)
    out = [
        f"{doc.n_bits} {doc.n_checks}",
        f"{doc.max_bit_degree} {doc.max_check_degree}",
        " ".join(map(str, doc.bit_degrees)),
        " ".join(map(str, doc.check_degrees)),
    ]
    out += [" ".join(map(str, a)) for a in doc.bit_lists]
    out += [" ".join(map(str, r)) for r in doc.check_lists]
    return "\n".join(out) + "\n"


def parse_dense(text: str) -> TannerGraph:
    rows = []
    width = None
    for i, ln in enumerate(text.splitlines(), 1):
        toks = ln.split()
        if not toks:
            continue
        if any(t not in ("0", "1") for t in toks):
            raise FormatError("dense rows may only contain 0 and 1", i)
        if width is None:
            width = len(toks)
        elif len(toks) != width:
            raise FormatError(f"row has {len(toks)} entries, expected {width}", i)
        rows.append([int(t) for t in toks])
    if not rows:
        raise FormatError("empty matrix")
    return TannerGraph.from_dense(np.array(rows, dtype=np.uint8))


def write_dense(g: TannerGraph) -> str:
    return "".join(" ".join(map(str, r)) + "\n" for r in g.to_dense())


def sniff_format(text: str) -> str:
    """'dense' when every line is the same number of 0/1 tokens, else 'alist'."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if rows and len({len(r) for r in rows}) == 1 and all(t in ("0", "1") for r in rows for t in r):
        return "dense"
    return "alist"


def read_matrix(path: str | Path) -> TannerGraph:
    text = Path(path).read_text()
    return parse_dense(text) if sniff_format(text) == "dense" else parse_alist(text)


# ------------------------------------------------------------- codewords


def read_codewords(path: str | Path, n_bits: int) -> list[BitWord]:
    out = []
    for i, ln in enumerate(Path(path).read_text().splitlines(), 1):
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        try:
            out.append(BitWord.from_hex(ln, n_bits))
        except UsageError as exc:
            raise FormatError(str(exc), i) from None
    return out


# -------------------------------------------------------------- schedules

MAGIC = b"LNCSCHED"
VERSION = 1
_HEAD = struct.Struct("<8sHB32sIIIQII")


def dump_schedule(s: Schedule) -> bytes:
    digest = s.digest.ljust(32, b"\0")[:32]
    prog = np.ascontiguousarray(s.program, dtype="<i4")
    head = _HEAD.pack(
        MAGIC,
        VERSION,
        MODES.index(s.mode),
        digest,
        s.n_bits,
        s.n_work_bits,
        s.n_keys,
        s.xor_budget,
        s.n_info,
        len(prog),
    )
    info = np.asarray(s.info_positions, dtype="<u4").tobytes()
    load = np.asarray(s.load_positions, dtype="<u4").tobytes()
    return head + info + load + prog.tobytes()


def load_schedule(data: bytes, g: TannerGraph | None = None) -> Schedule:
    """Inverse of :func:`dump_schedule`; checks the digest when ``g`` is given."""
    if len(data) < _HEAD.size:
        raise FormatError("schedule file is truncated")
    magic, ver, mode, digest, n, nw, nk, budget, ni, np_ = _HEAD.unpack_from(data)
    if magic != MAGIC:
        raise FormatError("not a schedule file")
    if ver != VERSION:
        raise FormatError(f"unsupported schedule version {ver}")
    if mode >= len(MODES):
        raise FormatError(f"bad mode byte {mode}")
    need = _HEAD.size + 8 * ni + 4 * np_
    if len(data) != need:
        raise FormatError(f"schedule file is {len(data)} bytes, expected {need}")
    off = _HEAD.size
    info = np.frombuffer(data, "<u4", ni, off)
    load = np.frombuffer(data, "<u4", ni, off + 4 * ni)
    prog = np.frombuffer(data, "<i4", np_, off + 8 * ni).astype(np.int32)
    digest = digest if any(digest) else b""
    if g is not None and digest != graph_digest(g):
        raise UsageError("schedule was compiled for a different matrix")
    return Schedule(
        n_bits=n,
        n_work_bits=nw,
        info_positions=tuple(int(v) for v in info),
        load_positions=tuple(int(v) for v in load),
        steps=tuple(program_to_steps(prog)),
        xor_budget=budget,
        mode=MODES[mode],
        n_keys=nk,
        digest=digest,
        program=prog,
    )


def save_schedule(s: Schedule, path: str | Path) -> None:
    Path(path).write_bytes(dump_schedule(s))


def read_schedule(path: str | Path, g: TannerGraph | None = None) -> Schedule:
    return load_schedule(Path(path).read_bytes(), g)
