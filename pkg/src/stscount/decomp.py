"""Decomposition counting: triangle covers and matching multiset covers.

Two counts attach to a graph G arising from a defining-set split. N_D is
the number of triangle decompositions of the complement of G (candidate
inner block sets). N_F is the number of ways to partition the edges of G
into w matchings, one per pattern position p, where the matching for p
saturates exactly the vertices outside the value W_p; positions sharing a
value form a collection from which that many pairwise disjoint matchings
are drawn, unordered.

The full mode enumerates everything. The auto mode defers work that two
counting identities make redundant: with two deferrable single-use
collections the largest is never enumerated at all and the other is only
counted at the bottom of the search (the leftover edges force it); a
final twice-used collection contributes M/2 because its compatible
matchings pair off into complementary halves. The cover mode recasts the
whole count as one exact cover instance with slot tokens and divides out
the per-collection orderings; it exists as an independent cross-check.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from . import fastcover, graph_gen
from .exact_cover import CoverInstance, enumerate_covers
from .model import DefiningSet, DenseGraph, bits

__all__ = [
    "MatchingCollection",
    "MultisetCount",
    "DecompCounts",
    "count_triangle_decompositions",
    "build_collections",
    "count_matching_decompositions",
    "enumerate_matching_decompositions",
    "compatible_counts",
    "decomp_counts",
]


def count_triangle_decompositions(g: DenseGraph) -> int:
    """Number of partitions of the complement of g into triangles."""
    cg = g.complement()
    if cg.m == 0:
        return 1
    if cg.m % 3 or any(d % 2 for d in cg.degrees()):
        return 0
    index = cg.edge_index
    candidates = tuple(
        (index[(a, b)], index[(a, c)], index[(b, c)])
        for a, b, c in cg.triangles()
    )
    return fastcover.count_covers_fast(CoverInstance(cg.m, candidates))


@dataclass(frozen=True)
class MatchingCollection:
    """The matchings available to the positions sharing one W value.

    saturated_mask covers the vertices every matching must saturate (the
    complement of the value); matchings lists them as edge bitmaps in
    increasing order, or None when enumeration was deliberately skipped
    for a deferred collection. A collection with nothing to saturate has
    the single empty matching.
    """

    value: frozenset
    multiplicity: int
    saturated_mask: int
    matchings: tuple[int, ...] | None


def _perfect_matchings(g: DenseGraph, mask: int) -> tuple[int, ...]:
    """Edge bitmaps of the perfect matchings on the masked vertices."""
    verts = list(bits(mask))
    if not verts:
        return (0,)
    if len(verts) % 2:
        return ()
    pos = {u: i for i, u in enumerate(verts)}
    inner = [
        (i, j) for i, j in g.edges if mask >> i & 1 and mask >> j & 1
    ]
    if not inner:
        return ()
    candidates = tuple((pos[i], pos[j]) for i, j in inner)
    index = g.edge_index
    found: list[int] = []

    def keep(cover):
        bitmap = 0
        for c in cover:
            bitmap |= 1 << index[inner[c]]
        found.append(bitmap)
        return True

    enumerate_covers(CoverInstance(len(verts), candidates), keep)
    return tuple(sorted(found))


def _grouped(multiset):
    """Distinct values with multiplicities, in a fixed order."""
    groups: dict[frozenset, int] = {}
    for value in multiset:
        groups[value] = groups.get(value, 0) + 1
    return sorted(
        groups.items(), key=lambda item: (len(item[0]), sorted(item[0]))
    )


def build_collections(
    g: DenseGraph, multiset, skip_values=()
) -> tuple[MatchingCollection, ...]:
    """One MatchingCollection per distinct value of the multiset.

    Values in skip_values get matchings=None instead of an enumeration;
    the deferred counting rules never look at them.
    """
    full = (1 << g.n) - 1
    skip = set(skip_values)
    out = []
    for value, mult in _grouped(multiset):
        value_mask = 0
        for u in value:
            value_mask |= 1 << u
        mask = full ^ value_mask
        matchings = None if value in skip else _perfect_matchings(g, mask)
        out.append(
            MatchingCollection(
                value=value,
                multiplicity=mult,
                saturated_mask=mask,
                matchings=matchings,
            )
        )
    return tuple(out)


def _dfs(cols, bottom) -> int:
    """Sum bottom(used) over all disjoint picks from the collections.

    cols is a list of (multiplicity, matchings); each collection
    contributes that many pairwise disjoint matchings, chosen as an
    increasing sequence so every unordered selection is seen once.
    """

    def go(i: int, used: int) -> int:
        if i == len(cols):
            return bottom(used)
        mult, matchings = cols[i]
        avail = [q for q in matchings if not q & used]
        if len(avail) < mult:
            return 0
        total = 0

        def pick(start: int, left: int, acc: int):
            nonlocal total
            if left == 0:
                total += go(i + 1, used | acc)
                return
            for j in range(start, len(avail) - left + 1):
                q = avail[j]
                if not q & acc:
                    pick(j + 1, left - 1, acc | q)

        pick(0, mult, 0)
        return total

    return go(0, 0)


def _sizes_consistent(g: DenseGraph, collections) -> bool:
    total = 0
    for col in collections:
        size = col.saturated_mask.bit_count()
        if size % 2:
            return False
        total += col.multiplicity * (size // 2)
    return total == g.m


def count_matching_decompositions(
    g: DenseGraph, multiset, mode: str = "auto"
) -> int:
    """Number of matching decompositions of g for the value multiset.

    multiset is a length-w tuple of frozensets of vertices (repeats
    meaning shared values) as produced by enumerate_w_multisets. All
    modes return the same number; they differ in how much they enumerate.
    """
    if mode not in ("auto", "full", "cover"):
        raise ValueError(f"unknown mode {mode!r}")
    groups = [
        (value, mult)
        for value, mult in _grouped(multiset)
        if len(value) != g.n
    ]
    for value, mult in groups:
        if (g.n - len(value)) % 2:
            return 0
    # every vertex must be saturated by exactly degree-many matchings;
    # this is necessary for any decomposition and is what licenses the
    # deferred counting rules below
    for u in range(g.n):
        need = sum(mult for value, mult in groups if u not in value)
        if need != g.degree(u):
            return 0
    if not groups:
        return 1

    if mode == "cover":
        return _count_cover_mode(g, groups)

    if mode == "full":
        collections = build_collections(g, _expand(groups))
        if any(not col.matchings for col in collections):
            return 0
        cols = [(c.multiplicity, c.matchings) for c in collections]
        target = (1 << g.m) - 1
        return _dfs(cols, lambda used: 1 if used == target else 0)

    # auto: pick the deferral plan from the multiplicities alone
    by_sat = sorted(
        groups, key=lambda item: (-(g.n - len(item[0])), sorted(item[0]))
    )
    mult1 = [value for value, mult in by_sat if mult == 1]
    mult2 = [value for value, mult in by_sat if mult == 2]
    higher = [value for value, mult in by_sat if mult >= 3]

    skip = None
    count_last = None
    halve_last = None
    if len(mult1) >= 2:
        skip, count_last = mult1[0], mult1[1]
    elif len(mult1) == 1:
        if mult2 and not higher:
            halve_last = mult2[0]
        else:
            skip = mult1[0]
    elif mult2:
        halve_last = mult2[0]

    skip_values = [v for v in (skip,) if v is not None]
    collections = build_collections(g, _expand(groups), skip_values=skip_values)
    built = [c for c in collections if c.matchings is not None]
    if any(not c.matchings for c in built):
        return 0
    deferred = count_last if count_last is not None else halve_last
    cols = [
        (c.multiplicity, c.matchings)
        for c in built
        if c.value != deferred
    ]
    if deferred is None:
        if skip is None:
            target = (1 << g.m) - 1
            return _dfs(cols, lambda used: 1 if used == target else 0)
        return _dfs(cols, lambda used: 1)
    (last,) = [c for c in built if c.value == deferred]

    if count_last is not None:
        def bottom(used: int) -> int:
            return sum(1 for q in last.matchings if not q & used)
    else:
        def bottom(used: int) -> int:
            m_compat = sum(1 for q in last.matchings if not q & used)
            if m_compat % 2:
                raise AssertionError(
                    "compatible matchings of the final paired collection "
                    "did not split into complementary halves"
                )
            return m_compat // 2

    return _dfs(cols, bottom)


def _expand(groups):
    return [v for v, m in groups for _ in range(m)]


def _count_cover_mode(g: DenseGraph, groups) -> int:
    """Ordered exact cover over edges plus slot tokens, then divide."""
    collections = build_collections(g, _expand(groups))
    if any(not col.matchings for col in collections):
        return 0
    n_elements = g.m
    offsets = []
    for col in collections:
        offsets.append(n_elements)
        n_elements += col.multiplicity
    candidates = []
    for col, base in zip(collections, offsets):
        for q in col.matchings:
            edge_ids = list(bits(q))
            for slot in range(col.multiplicity):
                candidates.append(tuple(edge_ids + [base + slot]))
    ordered = fastcover.count_covers_fast(
        CoverInstance(n_elements, tuple(candidates))
    )
    divisor = 1
    for col in collections:
        for i in range(2, col.multiplicity + 1):
            divisor *= i
    if ordered % divisor:
        raise AssertionError(
            f"ordered cover count {ordered} not divisible by {divisor}"
        )
    return ordered // divisor


def enumerate_matching_decompositions(g: DenseGraph, multiset):
    """Yield every decomposition as ((value, chosen bitmaps), ...).

    Collections appear in the build_collections order; the chosen bitmaps
    within a collection are increasing. Trivial collections (nothing to
    saturate) carry their multiplicity of empty matchings.
    """
    collections = build_collections(g, multiset)
    if not _sizes_consistent(g, collections):
        return
    if any(not col.matchings for col in collections):
        return
    target = (1 << g.m) - 1
    chosen: list[tuple[int, ...]] = []

    def go(i: int, used: int):
        if i == len(collections):
            if used == target:
                yield tuple(
                    (col.value, picks)
                    for col, picks in zip(collections, chosen)
                )
            return
        col = collections[i]
        avail = [q for q in col.matchings if not q & used]

        def pick(start: int, left: int, acc: int, taken: tuple[int, ...]):
            if left == 0:
                chosen.append(taken)
                yield from go(i + 1, used | acc)
                chosen.pop()
                return
            for j in range(start, len(avail) - left + 1):
                q = avail[j]
                if not q & acc:
                    yield from pick(j + 1, left - 1, acc | q, taken + (q,))

        yield from pick(0, col.multiplicity, 0, ())

    yield from go(0, 0)


def compatible_counts(g: DenseGraph, multiset, value_a, value_b):
    """(M_a, M_b) at every bottom of the search over the other collections.

    Both named collections are held back; for each complete disjoint pick
    from the rest, the pair counts how many of each held-back collection's
    matchings avoid the used edges. Supports checking that the two counts
    agree whenever both values are used once.
    """
    groups = [
        (value, mult)
        for value, mult in _grouped(multiset)
        if len(value) != g.n
    ]
    collections = build_collections(g, _expand(groups))
    hold = {value_a, value_b}
    (col_a,) = [c for c in collections if c.value == value_a]
    (col_b,) = [c for c in collections if c.value == value_b]
    cols = [
        (c.multiplicity, c.matchings)
        for c in collections
        if c.value not in hold
    ]
    if any(not matchings for _, matchings in cols):
        return []
    out: list[tuple[int, int]] = []

    def bottom(used: int) -> int:
        m_a = sum(1 for q in col_a.matchings if not q & used)
        m_b = sum(1 for q in col_b.matchings if not q & used)
        out.append((m_a, m_b))
        return 0

    _dfs(cols, bottom)
    return out


@dataclass(frozen=True)
class MultisetCount:
    multiset: tuple[frozenset, ...]
    n_f: int
    t_f_ms: float


@dataclass(frozen=True)
class DecompCounts:
    """Both counts for one graph: N_D once, N_F per value multiset."""

    n_d: int
    t_d_ms: float
    per_multiset: tuple[MultisetCount, ...]

    @property
    def n_f_total(self) -> int:
        return sum(mc.n_f for mc in self.per_multiset)


def decomp_counts(
    g: DenseGraph, pattern: DefiningSet, mode: str = "auto"
) -> DecompCounts:
    """N_D and the per-multiset N_F values for one graph."""
    t0 = time.perf_counter()
    n_d = count_triangle_decompositions(g)
    t_d_ms = (time.perf_counter() - t0) * 1000.0
    per = []
    for multiset in graph_gen.enumerate_w_multisets(g, pattern):
        t1 = time.perf_counter()
        n_f = count_matching_decompositions(g, multiset, mode=mode)
        per.append(
            MultisetCount(
                multiset=multiset,
                n_f=n_f,
                t_f_ms=(time.perf_counter() - t1) * 1000.0,
            )
        )
    return DecompCounts(n_d=n_d, t_d_ms=t_d_ms, per_multiset=tuple(per))
