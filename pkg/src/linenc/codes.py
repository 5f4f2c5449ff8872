"""Random parity-check matrix generators for tests, benchmarks and the CLI."""

from __future__ import annotations

import numpy as np

from .tanner import TannerGraph


def random_ldpc(n: int, col_weight=3, row_weight: float = 6.0, seed=None) -> TannerGraph:
    """Socket-matched random code.

    ``col_weight`` is an int or a sequence of per-bit degrees to sample
    from. Rows end up with weights near ``row_weight``; duplicate edges
    are dropped and empty rows removed.
    """
    rng = np.random.default_rng(seed)
    if np.isscalar(col_weight):
        degs = np.full(n, int(col_weight))
    else:
        degs = rng.choice(np.asarray(col_weight, dtype=int), size=n)
    m = max(1, int(round(degs.sum() / row_weight)))
    sockets = np.repeat(np.arange(n), degs)
    checks = rng.permutation(np.arange(sockets.size) % m)
    rows: list[set[int]] = [set() for _ in range(m)]
    for b, c in zip(sockets.tolist(), checks.tolist()):
        if b in rows[c]:
            # retry on a random other check that lacks the bit
            for _ in range(8):
                c2 = int(rng.integers(m))
                if b not in rows[c2]:
                    c = c2
                    break
        rows[c].add(b)
    return TannerGraph.from_matrix([sorted(r) for r in rows if r], n)


def random_tree(n_checks: int, check_degree=(2, 5), seed=None) -> TannerGraph:
    """Cycle-free code grown one check at a time."""
    rng = np.random.default_rng(seed)
    rows: list[list[int]] = []
    n = 0
    for c in range(n_checks):
        k = int(rng.integers(check_degree[0], check_degree[1] + 1))
        if c == 0:
            row = list(range(k))
            n = k
        else:
            anchor = int(rng.integers(n))
            row = [anchor] + list(range(n, n + k - 1))
            n += k - 1
        rows.append(sorted(row))
    return TannerGraph.from_matrix(rows, n)


def random_cycle_code(n: int, m: int, seed=None) -> TannerGraph:
    """Every bit in exactly two distinct checks."""
    rng = np.random.default_rng(seed)
    rows: list[set[int]] = [set() for _ in range(m)]
    for b in range(n):
        a, c = rng.choice(m, size=2, replace=False).tolist()
        rows[a].add(b)
        rows[c].add(b)
    return TannerGraph.from_matrix([sorted(r) for r in rows if r], n)


def random_upper_triangular(m: int, n: int, density: float = 0.2, seed=None) -> TannerGraph:
    """Row/column-permuted H = [U | A] with U upper triangular, unit diagonal."""
    if n < m:
        raise ValueError("need n >= m")
    rng = np.random.default_rng(seed)
    h = np.zeros((m, n), dtype=np.uint8)
    for i in range(m):
        h[i, i] = 1
        h[i, i + 1 : m] = rng.random(m - i - 1) < density
        h[i, m:] = rng.random(n - m) < density
    h = h[rng.permutation(m)][:, rng.permutation(n)]
    return TannerGraph.from_dense(h)
