"""Small hand-checked codes shared by the tests.

Indices here are 1-based as written in the reference example; use
:func:`rows0` to convert.
"""

from linenc.tanner import TannerGraph

# (13, 26) example code, column weight 3
CODE_13_26 = [
    [1, 9, 13, 21, 22, 23],
    [4, 8, 12, 16, 18, 23],
    [3, 11, 15, 20, 25, 26],
    [7, 8, 10, 14, 21, 24],
    [6, 15, 19, 20, 25, 26],
    [5, 7, 12, 13, 17, 23],
    [5, 9, 13, 14, 16, 18],
    [3, 6, 11, 19, 24, 25, 26],
    [2, 4, 7, 16, 22, 24],
    [2, 9, 10, 12, 14, 18],
    [3, 6, 11, 15, 19, 20],
    [1, 2, 8, 17, 21],
    [1, 4, 5, 10, 17, 22],
]

# three-check tree: x4 = x1+x2+x3, x7 = x4+x5+x6, x10 = x4+x8+x9
TREE_10 = [[1, 2, 3, 4], [4, 5, 6, 7], [4, 8, 9, 10]]

# seven-tier pseudo-tree over 16 bits
PSEUDO_TREE_16 = [
    [1, 5, 7, 10],
    [2, 5, 6, 9, 12],
    [3, 5, 7, 8, 11, 14],
    [4, 6, 8, 9, 10, 13],
    [6, 10, 11, 13, 15],
    [9, 11, 12, 13, 16],
    [11, 14, 15, 16],
]
PSEUDO_TREE_16_PARENTS = {1: 1, 2: 2, 3: 3, 4: 4, 5: 6, 6: 9, 7: 11}

# the pseudo-tree plus two key checks: a 2-fold encoding stopping set
TWO_FOLD_16 = PSEUDO_TREE_16 + [[1, 2, 3, 4], [1, 2, 8, 16]]

# hand decomposition of CODE_13_26 into two stopping sets (1-based ids);
# parents map each non-key check to the bit it solves
CODE_13_26_PIECES = [
    {
        "checks": [1, 2, 4, 6, 7, 9, 10, 12, 13],
        "keys": [10, 12],
        "reevaluated": [1, 18],
        "parents": {1: 21, 7: 14, 2: 8, 6: 7, 13: 10, 4: 24, 9: 2},
    },
    {
        "checks": [3, 5, 8, 11],
        "keys": [3, 5],
        "reevaluated": [3, 6],
        "parents": {11: 20, 8: 26},
    },
]

# info bits in the order they are filled, then the expected codeword in
# the same listing order
GOLDEN_INFO = dict(zip(
    [9, 13, 22, 23, 5, 16, 4, 12, 17, 11, 15, 19, 25],
    [0, 1, 1, 1, 0, 1, 1, 0, 0, 1, 0, 1, 1],
))
GOLDEN_CODEWORD = dict(zip(
    [9, 13, 22, 23, 5, 16, 4, 12, 17, 1, 18, 21, 14, 8, 7, 10, 24, 2, 11, 15, 19, 25, 3, 6, 20, 26],
    [0, 1, 1, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1],
))


def pieces0(pieces):
    """1-based piece specs to the 0-based form taken by ``pinned_plan``."""
    out = []
    for p in pieces:
        q = {k: [v - 1 for v in p[k]] for k in ("checks", "keys", "reevaluated") if k in p}
        q["parents"] = {c - 1: b - 1 for c, b in p["parents"].items()}
        out.append(q)
    return out


def rows0(rows):
    return [[b - 1 for b in r] for r in rows]


def graph(rows):
    return TannerGraph.from_matrix(rows0(rows), max(max(r) for r in rows))
