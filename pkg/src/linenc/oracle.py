"""Reference encoder by dense Gaussian elimination.

Deliberately slow and separate from the fast path: it shares only
:class:`BitWord` with the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .errors import UsageError
from .gf2 import BitWord


def _dense(rows: Sequence[Sequence[int]], n_bits: int) -> np.ndarray:
    h = np.zeros((len(rows), n_bits), dtype=np.uint8)
    for i, r in enumerate(rows):
        for j in r:
            h[i, j] ^= 1
    return h


@dataclass(frozen=True)
class SystematicForm:
    """Reduced row echelon form of H.

    ``reduced[i]`` has a one at ``pivots[i]`` and zeros in every other
    pivot column; ``free`` are the information columns, ascending.
    """

    n_bits: int
    reduced: np.ndarray
    pivots: tuple[int, ...]
    free: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def systematic_form(rows: Sequence[Sequence[int]], n_bits: int) -> SystematicForm:
    h = _dense(rows, n_bits)
    r = 0
    pivots = []
    for col in range(n_bits):
        hits = np.flatnonzero(h[r:, col]) if r < h.shape[0] else []
        if len(hits) == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            h[[r, p]] = h[[p, r]]
        others = np.flatnonzero(h[:, col])
        others = others[others != r]
        h[others] ^= h[r]
        pivots.append(col)
        r += 1
        if r == h.shape[0]:
            break
    pset = set(pivots)
    free = tuple(c for c in range(n_bits) if c not in pset)
    return SystematicForm(n_bits, h[:r].copy(), tuple(pivots), free)


def systematic_encode(sf: SystematicForm, info) -> BitWord:
    vals = info.to_array() if isinstance(info, BitWord) else np.asarray(info, dtype=np.uint8)
    if vals.size != len(sf.free):
        raise UsageError(f"info word has {vals.size} bits, code has {len(sf.free)} free columns")
    x = np.zeros(sf.n_bits, dtype=np.uint8)
    free = list(sf.free)
    x[free] = vals & 1
    if sf.rank:
        par = (sf.reduced[:, free].astype(np.int64) @ x[free].astype(np.int64)) & 1
        x[list(sf.pivots)] = par
    return BitWord.from_array(x)


def verify(rows: Sequence[Sequence[int]], x) -> bool:
    """True iff every row has even parity on ``x``."""
    bits = x.to_array() if isinstance(x, BitWord) else np.asarray(x, dtype=np.uint8)
    for r in rows:
        if r and int(bits[list(r)].sum()) & 1:
            return False
    return True


def codeword_census(rows: Sequence[Sequence[int]], n_bits: int, limit: int = 20) -> int:
    """Count valid codewords by trying every word."""
    if n_bits > limit:
        raise UsageError(f"{n_bits} bits exceeds census limit {limit}")
    return len(enumerate_codewords(rows, n_bits, limit))


def enumerate_codewords(rows: Sequence[Sequence[int]], n_bits: int, limit: int = 20) -> set[tuple[int, ...]]:
    if n_bits > limit:
        raise UsageError(f"{n_bits} bits exceeds census limit {limit}")
    h = _dense(rows, n_bits).astype(np.int64)
    words = np.array(list(product((0, 1), repeat=n_bits)), dtype=np.int64).reshape(-1, n_bits)
    ok = ~((words @ h.T) & 1).any(axis=1) if h.size else np.ones(len(words), dtype=bool)
    return {tuple(w) for w in words[ok].tolist()}
