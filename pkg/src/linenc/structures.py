"""Pseudo-trees and encoding stopping sets.

All routines take a graph-like object exposing ``n_bits``, ``n_checks``,
``check_adj`` and ``bit_adj`` and a :class:`SubgraphMask`. A check's
neighbors are always read through the mask: bits outside it are treated
as already known (right-hand-side constants), never as part of the
structure.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .errors import StructuralError, UsageError
from .tanner import SubgraphMask

PSEUDO = "pseudo"
GENUINE = "genuine"


@dataclass
class PseudoTree:
    """Tiered layout; ``tiers[0]`` is tier 1.

    Even list positions hold bit indices, odd positions check indices.
    Several disconnected pseudo-trees may share one layout.
    """

    tiers: list[list[int]]
    parent_of: dict[int, int]

    @property
    def checks(self) -> list[int]:
        return [c for t in self.tiers[1::2] for c in t]

    @property
    def bits(self) -> list[int]:
        return [b for t in self.tiers[0::2] for b in t]

    @property
    def parity_bits(self) -> list[int]:
        return sorted(self.parent_of.values())

    def info_bits(self) -> list[int]:
        parents = set(self.parent_of.values())
        return sorted(b for b in self.bits if b not in parents)

    def bottom_up_checks(self) -> list[int]:
        """Checks in evaluation order: lowest tier first."""
        out: list[int] = []
        for t in reversed(self.tiers[1::2]):
            out.extend(sorted(t))
        return out


@dataclass
class FoundSet:
    """Result of one greedy search round.

    ``tail`` lists the zero-outsider checks added after the last check
    that brought new bits, in growth order; the key checks come from it.
    ``growth`` is every check added during this round.
    """

    mask: SubgraphMask
    kind: str
    tail: list[int]
    growth: list[int] = field(default_factory=list)


@dataclass
class StoppingSetInfo:
    mask: SubgraphMask
    fold: int
    key_checks: list[int]
    reevaluated_bits: list[int]
    residual_pseudo_tree: PseudoTree
    case: str | None = None
    key_info_sets: list[list[int]] = field(default_factory=list)


# ---------------------------------------------------------------- peeling


def peel(g, s: SubgraphMask) -> SubgraphMask:
    """Strip bits of in-mask degree <= 1 (with their check) until none remain."""
    bit_in = bytearray(s.bit_in)
    check_in = bytearray(s.check_in)
    kernels.peel_inplace(g, bit_in, check_in, None)
    return SubgraphMask(bit_in, check_in)


def peel_order(g, s: SubgraphMask) -> tuple[list[tuple[int, int]], SubgraphMask]:
    """Peel and also report ``(check, private_bit)`` in removal order."""
    bit_in = bytearray(s.bit_in)
    check_in = bytearray(s.check_in)
    order: list[tuple[int, int]] = []
    kernels.peel_inplace(g, bit_in, check_in, order)
    return order, SubgraphMask(bit_in, check_in)


def _max_pool_degree(g, pool: SubgraphMask) -> int:
    ci = pool.check_in
    best = 0
    for b, v in enumerate(pool.bit_in):
        if v:
            d = sum(1 for c in g.bit_adj[b] if ci[c])
            if d > best:
                best = d
    return best


# ------------------------------------------------------------ greedy search


class StoppingSetSearch:
    """Greedy subgraph growth that surfaces stopping sets one at a time.

    The growing set S persists between rounds: after a found set is
    removed with :meth:`remove`, what is left of S is still peelable and
    the growth simply continues. With an empty S the fewest-outsider rule
    reduces to picking a minimum-degree check.
    """

    def __init__(self, g, pool: SubgraphMask, strict: bool = True):
        if strict and _max_pool_degree(g, pool) > 3:
            raise UsageError("stopping-set search needs max bit degree <= 3 inside the pool")
        self.g = g
        self.pool = pool.copy()
        self.s = SubgraphMask.empty(len(pool.bit_in), len(pool.check_in))
        pb = self.pool.bit_in
        self.outs: dict[int, int] = {}
        heap = []
        for c, v in enumerate(self.pool.check_in):
            if v:
                o = sum(1 for b in g.check_adj[c] if pb[b])
                self.outs[c] = o
                heap.append((o, c))
        heapq.heapify(heap)
        self.heap = heap
        self.growth: list[tuple[int, int]] = []
        self._round = 0

    def _pop(self, zero_only: bool = False) -> int | None:
        heap, outs = self.heap, self.outs
        while heap:
            o, c = heap[0]
            if outs.get(c) != o:
                heapq.heappop(heap)
                continue
            if zero_only and o:
                return None
            heapq.heappop(heap)
            return c
        return None

    def _add(self, c: int) -> int:
        g, outs = self.g, self.outs
        pb, sb = self.pool.bit_in, self.s.bit_in
        pc = self.pool.check_in
        del outs[c]
        self.s.check_in[c] = 1
        new = 0
        for b in g.check_adj[c]:
            if pb[b] and not sb[b]:
                sb[b] = 1
                new += 1
                for cc in g.bit_adj[b]:
                    if pc[cc] and cc in outs:
                        o = outs[cc] - 1
                        outs[cc] = o
                        heapq.heappush(self.heap, (o, cc))
        self.growth.append((c, new))
        return new

    def next(self) -> FoundSet | None:
        while True:
            c = self._pop()
            if c is None:
                return None
            if self._add(c):
                continue
            residue = peel(self.g, self.s)
            if residue.is_empty():
                continue
            while True:
                z = self._pop(zero_only=True)
                if z is None:
                    break
                self._add(z)
            residue = peel(self.g, self.s)
            tail = []
            for cc, new in reversed(self.growth):
                if new:
                    break
                tail.append(cc)
            tail.reverse()
            kind = PSEUDO if is_dependent(self.g, residue, [t for t in tail if residue.check_in[t]]) else GENUINE
            round_checks = [cc for cc, _ in self.growth[self._round :]]
            self._round = len(self.growth)
            return FoundSet(residue, kind, tail, round_checks)

    def remove(self, mask: SubgraphMask) -> None:
        """Drop a found set (or any closed subgraph of S) from pool and S."""
        for b in mask.bits():
            self.pool.bit_in[b] = 0
            self.s.bit_in[b] = 0
        for c in mask.checks():
            self.pool.check_in[c] = 0
            self.s.check_in[c] = 0
            self.outs.pop(c, None)


def find_stopping_set(g, start_pool: SubgraphMask, strict: bool = True) -> FoundSet | None:
    """First pseudo or genuine encoding stopping set found by greedy growth."""
    return StoppingSetSearch(g, start_pool, strict=strict).next()


# ------------------------------------------------------- pseudo-tree layout


def build_pseudo_tree(g, s: SubgraphMask, check: bool = True) -> PseudoTree:
    """Lay out a stopping-set-free subgraph as a tiered pseudo-tree.

    Bits whose remaining degree is at most one form the next odd tier and
    their checks the even tier below. A check reached by several bits keeps
    the lowest-index one as its parent; the others drop two tiers.
    ``check=False`` skips the post-hoc validation for trusted callers.
    """
    bit_in = bytearray(s.bit_in)
    check_in = bytearray(s.check_in)
    deg: dict[int, int] = {}
    for b in s.bits():
        deg[b] = sum(1 for c in g.bit_adj[b] if check_in[c])
    isolated = sorted(b for b, d in deg.items() if d == 0)
    for b in isolated:
        bit_in[b] = 0
        del deg[b]
    bit_rounds: list[list[int]] = []
    check_rounds: list[dict[int, list[int]]] = []
    frontier = sorted(b for b, d in deg.items() if d <= 1)
    remaining_checks = check_in.count(1)
    while deg:
        if not frontier:
            raise StructuralError("subgraph contains an encoding stopping set; it cannot be laid out as a pseudo-tree")
        by_check: dict[int, list[int]] = {}
        for b in frontier:
            for c in g.bit_adj[b]:
                if check_in[c]:
                    by_check.setdefault(c, []).append(b)
                    break
        for b in frontier:
            bit_in[b] = 0
            del deg[b]
        nxt = set()
        for c in by_check:
            check_in[c] = 0
            remaining_checks -= 1
            for b in g.check_adj[c]:
                if bit_in[b]:
                    deg[b] -= 1
                    if deg[b] <= 1:
                        nxt.add(b)
        bit_rounds.append(list(frontier))
        check_rounds.append(by_check)
        frontier = sorted(b for b in nxt if bit_in[b] and deg[b] <= 1)
    if remaining_checks:
        raise StructuralError("checks left without any bits after layout; rows are dependent")

    # a last round of check-free bits belongs in the bottom tier
    if check_rounds and not check_rounds[-1]:
        check_rounds.pop()
        isolated = isolated + bit_rounds.pop()
    tiers: list[list[int]] = []
    parent_of: dict[int, int] = {}
    carry: list[int] = []
    for bits, by_check in zip(bit_rounds, check_rounds):
        dragged: list[int] = []
        for c, ups in by_check.items():
            ups = sorted(ups)
            parent_of[c] = ups[0]
            dragged.extend(ups[1:])
        drop = set(dragged)
        tiers.append(sorted([b for b in bits if b not in drop] + carry))
        tiers.append(sorted(by_check))
        carry = dragged
    tail_bits = sorted(carry + isolated)
    if tiers:
        tiers.append(tail_bits)
    else:
        tiers = [tail_bits]
    pt = PseudoTree(tiers, parent_of)
    if check:
        problems = validate_pseudo_tree(g, s, pt)
        if problems:
            raise StructuralError("pseudo-tree layout failed validation: " + "; ".join(problems[:5]))
    return pt


def pseudo_tree_from_parents(g, s: SubgraphMask, parent_of: dict[int, int]) -> PseudoTree:
    """Derive a tier layout from an explicit check -> parent-bit choice.

    Non-parent bits all sit in the bottom tier; a check's level is one
    above the highest-level check whose parent it reads.
    """
    checks = s.checks()
    if sorted(parent_of) != checks:
        raise StructuralError("parent map must cover exactly the checks of the subgraph")
    if len(set(parent_of.values())) != len(parent_of):
        raise StructuralError("two checks share a parent bit")
    child_of = {p: c for c, p in parent_of.items()}
    level: dict[int, int] = {}
    visiting: set[int] = set()

    def lvl(c: int) -> int:
        if c in level:
            return level[c]
        if c in visiting:
            raise StructuralError(f"parent assignment is cyclic at check {c}")
        visiting.add(c)
        best = 0
        for b in g.check_adj[c]:
            if s.bit_in[b] and b != parent_of[c] and b in child_of:
                best = max(best, lvl(child_of[b]) + 1)
        visiting.discard(c)
        level[c] = best
        return best

    for c in checks:
        lvl(c)
    top = max(level.values(), default=-1)
    n_levels = top + 1
    tiers: list[list[int]] = [[] for _ in range(2 * n_levels + 1)]
    for c, L in level.items():
        t = 2 * (n_levels - 1 - L) + 1
        tiers[t].append(c)
        tiers[t - 1].append(parent_of[c])
    parents = set(parent_of.values())
    tiers[-1].extend(b for b in s.bits() if b not in parents)
    tiers = [sorted(t) for t in tiers]
    pt = PseudoTree(tiers, dict(parent_of))
    problems = validate_pseudo_tree(g, s, pt)
    if problems:
        raise StructuralError("parent assignment is not a pseudo-tree: " + "; ".join(problems[:5]))
    return pt


def validate_pseudo_tree(g, s: SubgraphMask, pt: PseudoTree) -> list[str]:
    """List every tier-condition violation; empty means valid."""
    problems: list[str] = []
    tier_of_bit: dict[int, int] = {}
    tier_of_check: dict[int, int] = {}
    for i, t in enumerate(pt.tiers, start=1):
        target = tier_of_bit if i % 2 else tier_of_check
        for v in t:
            if v in target:
                problems.append(f"node {v} placed twice")
            target[v] = i
    n_tiers = len(pt.tiers)
    if tier_of_check:
        if n_tiers < 3 or n_tiers % 2 == 0:
            problems.append(f"{n_tiers} tiers is not of the form 2P+1 with P >= 1")
    elif n_tiers != 1:
        problems.append("check-free layout must be a single bit tier")
    if sorted(tier_of_bit) != s.bits():
        problems.append("bit tiers do not cover the subgraph's bits exactly")
    if sorted(tier_of_check) != s.checks():
        problems.append("check tiers do not cover the subgraph's checks exactly")
    if sorted(pt.parent_of) != sorted(tier_of_check):
        problems.append("parent map does not cover every check")
    if len(set(pt.parent_of.values())) != len(pt.parent_of):
        problems.append("parent map is not injective")
    bit_in, check_in = s.bit_in, s.check_in
    if tier_of_check:
        for b in pt.tiers[0]:
            nbrs = [c for c in g.bit_adj[b] if check_in[c]]
            if len(nbrs) != 1 or tier_of_check.get(nbrs[0]) != 2:
                problems.append(f"tier-1 bit {b} must have exactly one check, in tier 2")
    for c, tc in tier_of_check.items():
        ups = [b for b in g.check_adj[c] if bit_in[b] and tier_of_bit.get(b, n_tiers + 1) < tc]
        if len(ups) != 1 or tier_of_bit[ups[0]] != tc - 1:
            problems.append(f"check {c} in tier {tc} has upper bits {ups}")
        elif pt.parent_of.get(c) != ups[0]:
            problems.append(f"check {c} parent mismatch")
    for b, tb in tier_of_bit.items():
        if tb == 1:
            continue
        downs = [c for c in g.bit_adj[b] if check_in[c] and tier_of_check.get(c, 0) > tb]
        if len(downs) > 1 or (downs and tier_of_check[downs[0]] != tb + 1):
            problems.append(f"bit {b} in tier {tb} has lower checks {downs}")
    return problems


# ------------------------------------------------ key-check linear algebra


def effective_support(g, pool_bits, pt: PseudoTree, check: int) -> tuple[set[int], list[int]]:
    """Express ``check`` over the free bits of ``pt``.

    Returns the set of non-parent bits the check depends on after every
    parity of the pseudo-tree is substituted, plus the pseudo-tree checks
    that were folded in. Bits outside ``pool_bits`` are constants and are
    dropped.
    """
    v: set[int] = set()
    for b in g.check_adj[check]:
        if pool_bits[b]:
            v ^= {b}
    child_of = {p: c for c, p in pt.parent_of.items()}
    used: list[int] = []
    for tier in pt.tiers[1::2]:
        for c in tier:
            p = pt.parent_of[c]
            if p in v:
                used.append(c)
                for b in g.check_adj[c]:
                    if pool_bits[b]:
                        v ^= {b}
    for p in child_of:
        if p in v:
            raise StructuralError("parity left in effective support; tier order broken")
    return v, used


def key_dependency(g, mask: SubgraphMask, keys: Sequence[int]) -> list[int] | None:
    """Checks of ``mask`` whose rows sum to zero over the mask's bits, if any.

    ``mask`` minus ``keys`` must be peelable. The residual rows are
    triangular, so dependence can only come from the key rows.
    """
    residual = mask.without_checks(keys)
    order, rest = peel_order(g, residual)
    if 1 in rest.check_in:
        raise StructuralError("removing the key checks does not leave a peelable set")
    pool = mask.bit_in
    supports = []
    for k in keys:
        # peel order is top-down: a check never holds an earlier check's parent
        v = {b for b in g.check_adj[k] if pool[b]}
        used = []
        for c, p in order:
            if p in v:
                used.append(c)
                v.symmetric_difference_update(b for b in g.check_adj[c] if pool[b])
        supports.append((v, used))
        if not v:
            return [k] + used
    if len(keys) == 2 and supports[0][0] == supports[1][0]:
        combo = set(supports[0][1]) ^ set(supports[1][1])
        return sorted(combo) + list(keys)
    return None


def is_dependent(g, mask: SubgraphMask, keys: Sequence[int]) -> bool:
    if not keys:
        return False
    return key_dependency(g, mask, keys) is not None


# ------------------------------------------------------ fold and reeval bits


def _peels_empty(g, mask: SubgraphMask) -> bool:
    r = peel(g, mask)
    return 1 not in r.check_in


def fold_keys(g, found: FoundSet | SubgraphMask) -> list[int]:
    """Key checks whose removal leaves a peelable set, fewest first."""
    if isinstance(found, FoundSet):
        mask, tail = found.mask, [t for t in found.tail if found.mask.check_in[t]]
    else:
        mask, tail = found, None
    if tail is not None:
        if len(tail) > 2:
            raise StructuralError(f"{len(tail)} key checks needed; growth guarantees at most two")
        if len(tail) == 2:
            for k in (tail[1], tail[0]):
                if _peels_empty(g, mask.without_checks([k])):
                    return [k]
        if not _peels_empty(g, mask.without_checks(tail)):
            raise StructuralError("removing the tail checks does not leave a peelable set")
        return list(tail)
    checks = mask.checks()
    for k in reversed(checks):
        if _peels_empty(g, mask.without_checks([k])):
            return [k]
    for i in range(len(checks) - 1, -1, -1):
        for j in range(i - 1, -1, -1):
            pair = [checks[j], checks[i]]
            if _peels_empty(g, mask.without_checks(pair)):
                return pair
    raise StructuralError("stopping set needs more than two key checks")


def find_reevaluated_bits(key_info_sets: Sequence[Sequence[int]]) -> list[int]:
    """Pick reevaluated bits from the keys' information-bit supports.

    ``key_info_sets[i]`` lists, ascending, the information bits that key
    check ``i`` depends on once parities are substituted. One key: its
    first bit. Two keys: the appendix selection rule.
    """
    if len(key_info_sets) == 1:
        (a,) = key_info_sets
        if not a:
            raise StructuralError("key check does not depend on any information bit")
        return [a[0]]
    if len(key_info_sets) != 2:
        raise UsageError("expected one or two key checks")
    a, b = key_info_sets
    bset, aset = set(b), set(a)
    if not a or not b:
        raise StructuralError("a key check has no information bits")
    for x in a:
        if x not in bset:
            return [x, b[-1]]
    gamma = a[-1]
    for x in b:
        if x not in aset:
            return [gamma, x]
    raise StructuralError("key checks have identical supports; no valid reevaluated pair")


def containment_case(key_info_sets: Sequence[Sequence[int]], gamma: int, delta: int) -> str:
    a, b = (set(s) for s in key_info_sets)
    if gamma in a and gamma in b and delta in b and delta not in a:
        return "gamma-in-both"
    if delta in a and delta in b and gamma in a and gamma not in b:
        return "delta-in-both"
    if gamma in a and gamma not in b and delta in b and delta not in a:
        return "disjoint"
    raise StructuralError(f"bits {gamma},{delta} violate the reevaluation conditions")


def classify_fold(
    g,
    found: FoundSet | SubgraphMask,
    keys: Sequence[int] | None = None,
    residual_tree: PseudoTree | None = None,
) -> StoppingSetInfo:
    """Fold, key checks, reevaluated bits and residual layout of a genuine set.

    ``keys`` and ``residual_tree`` pin choices that are otherwise derived.
    """
    mask = found.mask if isinstance(found, FoundSet) else found
    if keys is None:
        keys = fold_keys(g, found)
    keys = list(keys)
    residual = mask.without_checks(keys)
    if residual_tree is None:
        pt = build_pseudo_tree(g, residual)
    else:
        problems = validate_pseudo_tree(g, residual, residual_tree)
        if problems:
            raise StructuralError("pinned residual layout is invalid: " + "; ".join(problems[:5]))
        pt = residual_tree
    sets = []
    for k in keys:
        v, _ = effective_support(g, mask.bit_in, pt, k)
        sets.append(sorted(v))
    if any(not s for s in sets) or (len(sets) == 2 and sets[0] == sets[1]):
        raise StructuralError("key check rows are dependent; this is a pseudo set")
    reeval = find_reevaluated_bits(sets)
    case = containment_case(sets, *reeval) if len(keys) == 2 else None
    return StoppingSetInfo(mask, len(keys), keys, reeval, pt, case, sets)


def stopping_set_conditions(g, mask: SubgraphMask, pool: SubgraphMask | None = None) -> dict[str, bool]:
    """Closure and minimum-degree conditions of ``mask``, read directly.

    With a ``pool``, bits outside it count as known and are ignored.
    """
    inside = (lambda b: True) if pool is None else (lambda b: bool(pool.bit_in[b]))
    closed = all(mask.bit_in[b] for c in mask.checks() for b in g.check_adj[c] if inside(b))
    deg_ok = all(sum(1 for c in g.bit_adj[b] if mask.check_in[c]) >= 2 for b in mask.bits())
    return {"closed": closed, "min_degree_2": deg_ok}
