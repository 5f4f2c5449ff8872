"""Tanner graph model, subgraph masks and generalized parity checks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError


class TannerGraph:
    """Bipartite bit/check graph of a parity-check matrix.

    Adjacency is held both ways as sorted tuples. Instances are treated as
    immutable once built.
    """

    def __init__(self, n_bits: int, check_adj: Sequence[Sequence[int]]):
        self.n_bits = int(n_bits)
        self.n_checks = len(check_adj)
        self.check_adj: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in check_adj)
        bit_adj: list[list[int]] = [[] for _ in range(self.n_bits)]
        for c, row in enumerate(self.check_adj):
            for b in row:
                bit_adj[b].append(c)
        self.bit_adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in bit_adj)

    @classmethod
    def from_matrix(cls, rows: Sequence[Iterable[int]], n_bits: int | None = None) -> "TannerGraph":
        """Build from per-row lists of column indices (0-indexed)."""
        rows = [list(r) for r in rows]
        if n_bits is None:
            n_bits = 1 + max((max(r) for r in rows if r), default=-1)
        adj = []
        for i, r in enumerate(rows):
            if not r:
                raise FormatError(f"row {i} has zero weight")
            s = sorted(r)
            for a, b in zip(s, s[1:]):
                if a == b:
                    raise FormatError(f"row {i} lists column {a} twice")
            if s[0] < 0 or s[-1] >= n_bits:
                raise FormatError(f"row {i} has a column index outside 0..{n_bits - 1}")
            adj.append(tuple(s))
        return cls(n_bits, adj)

    @classmethod
    def from_dense(cls, array) -> "TannerGraph":
        a = np.asarray(array, dtype=np.uint8)
        if a.ndim != 2:
            raise FormatError("dense matrix must be 2-D")
        return cls.from_matrix([np.flatnonzero(r).tolist() for r in a], a.shape[1])

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_checks, self.n_bits), dtype=np.uint8)
        for c, row in enumerate(self.check_adj):
            out[c, list(row)] = 1
        return out

    def check_degree(self, c: int) -> int:
        return len(self.check_adj[c])

    def bit_degree(self, b: int) -> int:
        return len(self.bit_adj[b])

    @property
    def n_edges(self) -> int:
        return sum(len(r) for r in self.check_adj)

    @property
    def max_bit_degree(self) -> int:
        return max((len(a) for a in self.bit_adj), default=0)

    @property
    def isolated_bits(self) -> list[int]:
        """All-zero columns; these are always information bits."""
        return [b for b, a in enumerate(self.bit_adj) if not a]

    def mean_check_degree(self, checks: Iterable[int] | None = None) -> float:
        cs = range(self.n_checks) if checks is None else list(checks)
        cs = list(cs)
        if not cs:
            return 0.0
        return sum(len(self.check_adj[c]) for c in cs) / len(cs)

    def subgraph_rows(self, checks: Iterable[int]) -> "TannerGraph":
        return TannerGraph(self.n_bits, [self.check_adj[c] for c in checks])

    def digest_payload(self) -> bytes:
        parts = [f"{self.n_bits} {self.n_checks}"]
        parts.extend(" ".join(map(str, r)) for r in self.check_adj)
        return "\n".join(parts).encode()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TannerGraph):
            return NotImplemented
        return self.n_bits == other.n_bits and self.check_adj == other.check_adj

    def __repr__(self) -> str:
        return f"TannerGraph(n_bits={self.n_bits}, n_checks={self.n_checks}, edges={self.n_edges})"


def from_matrix(rows: Sequence[Iterable[int]], n_bits: int | None = None) -> TannerGraph:
    return TannerGraph.from_matrix(rows, n_bits)


def _ones(flags: bytearray) -> list[int]:
    if flags.count(1) * 16 > len(flags):
        return np.flatnonzero(np.frombuffer(flags, dtype=np.uint8)).tolist()
    out = []
    i = flags.find(1)
    while i >= 0:
        out.append(i)
        i = flags.find(1, i + 1)
    return out


@dataclass
class SubgraphMask:
    """Membership flags for bits and checks of one graph.

    The relative complement G\\S is plain negation, see :meth:`complement`.
    """

    bit_in: bytearray
    check_in: bytearray

    @classmethod
    def empty(cls, n_bits: int, n_checks: int) -> "SubgraphMask":
        return cls(bytearray(n_bits), bytearray(n_checks))

    @classmethod
    def full(cls, g) -> "SubgraphMask":
        return cls(bytearray(b"\x01") * g.n_bits, bytearray(b"\x01") * g.n_checks)

    @classmethod
    def from_sets(cls, g, bits: Iterable[int] = (), checks: Iterable[int] = ()) -> "SubgraphMask":
        m = cls.empty(g.n_bits, g.n_checks)
        for b in bits:
            m.bit_in[b] = 1
        for c in checks:
            m.check_in[c] = 1
        return m

    @classmethod
    def closed(cls, g, checks: Iterable[int], pool: "SubgraphMask | None" = None) -> "SubgraphMask":
        """Checks plus every neighbor bit (restricted to ``pool`` if given)."""
        m = cls.empty(g.n_bits, g.n_checks)
        for c in checks:
            m.check_in[c] = 1
            for b in g.check_adj[c]:
                if pool is None or pool.bit_in[b]:
                    m.bit_in[b] = 1
        return m

    def copy(self) -> "SubgraphMask":
        return SubgraphMask(bytearray(self.bit_in), bytearray(self.check_in))

    def bits(self) -> list[int]:
        return _ones(self.bit_in)

    def checks(self) -> list[int]:
        return _ones(self.check_in)

    def n_bits_in(self) -> int:
        return self.bit_in.count(1)

    def n_checks_in(self) -> int:
        return self.check_in.count(1)

    def is_empty(self) -> bool:
        return 1 not in self.bit_in and 1 not in self.check_in

    def complement(self, within: "SubgraphMask | None" = None) -> "SubgraphMask":
        out = SubgraphMask(
            bytearray(1 - v for v in self.bit_in),
            bytearray(1 - v for v in self.check_in),
        )
        if within is not None:
            out = out.intersect(within)
        return out

    def intersect(self, other: "SubgraphMask") -> "SubgraphMask":
        return SubgraphMask(
            bytearray(a & b for a, b in zip(self.bit_in, other.bit_in)),
            bytearray(a & b for a, b in zip(self.check_in, other.check_in)),
        )

    def union(self, other: "SubgraphMask") -> "SubgraphMask":
        return SubgraphMask(
            bytearray(a | b for a, b in zip(self.bit_in, other.bit_in)),
            bytearray(a | b for a, b in zip(self.check_in, other.check_in)),
        )

    def without_checks(self, checks: Iterable[int]) -> "SubgraphMask":
        out = self.copy()
        for c in checks:
            out.check_in[c] = 0
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgraphMask):
            return NotImplemented
        return self.bit_in == other.bit_in and self.check_in == other.check_in

    def __repr__(self) -> str:
        return f"SubgraphMask(bits={self.bits()}, checks={self.checks()})"


def outsider_count(g, s: SubgraphMask, check: int) -> int:
    """Neighbors of ``check`` that are not inside ``s``."""
    inside = s.bit_in
    return sum(1 for b in g.check_adj[check] if not inside[b])


def connected_components(g, s: SubgraphMask) -> list[SubgraphMask]:
    """Split the masked nodes into maximal connected pieces.

    Components are ordered by their lowest check index; check-free
    components (lone bits) follow, ordered by bit index.
    """
    bit_in, check_in = s.bit_in, s.check_in
    seen_b = bytearray(len(bit_in))
    seen_c = bytearray(len(check_in))
    out: list[SubgraphMask] = []

    def sweep(start_check: int | None, start_bit: int | None) -> SubgraphMask:
        comp = SubgraphMask.empty(len(bit_in), len(check_in))
        q: deque = deque()
        if start_check is not None:
            seen_c[start_check] = 1
            q.append((1, start_check))
        else:
            seen_b[start_bit] = 1
            q.append((0, start_bit))
        while q:
            kind, v = q.popleft()
            if kind:
                comp.check_in[v] = 1
                for b in g.check_adj[v]:
                    if bit_in[b] and not seen_b[b]:
                        seen_b[b] = 1
                        q.append((0, b))
            else:
                comp.bit_in[v] = 1
                for c in g.bit_adj[v]:
                    if check_in[c] and not seen_c[c]:
                        seen_c[c] = 1
                        q.append((1, c))
        return comp

    for c in range(len(check_in)):
        if check_in[c] and not seen_c[c]:
            out.append(sweep(c, None))
    for b in range(len(bit_in)):
        if bit_in[b] and not seen_b[b]:
            out.append(sweep(None, b))
    return out


@dataclass
class GeneralizedCheck:
    """A parity check with its known bits moved to the right-hand side."""

    check_id: int
    live_bits: list[int]
    rhs_sources: list[int]
    rhs_value: int | None = field(default=None)


def generalize(g, piece: SubgraphMask, known_bits) -> list[GeneralizedCheck]:
    """Split each check of ``piece`` into unknown and known neighbors.

    ``known_bits`` is anything supporting ``in`` or a 0/1 sequence indexed
    by bit.
    """
    if isinstance(known_bits, (bytearray, bytes, np.ndarray, list)):
        is_known = lambda b: bool(known_bits[b])  # noqa: E731
    else:
        ks = set(known_bits)
        is_known = ks.__contains__
    out = []
    for c in piece.checks():
        live, rhs = [], []
        for b in g.check_adj[c]:
            (rhs if is_known(b) else live).append(b)
        out.append(GeneralizedCheck(c, live, rhs))
    return out
