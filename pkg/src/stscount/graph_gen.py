"""Isomorph-free graph generation and per-graph bookkeeping.

Generation walks a canonical construction tree: each graph is grown one
vertex at a time, a child is kept only when the vertex a canonical labeling
would delete last is in the same orbit as the vertex just added, and child
extensions are deduplicated up to the parent's automorphisms. Feasibility
prunes keep every intermediate graph completable to the requested order,
edge count, and degree window, so each isomorphism class of final graphs is
visited exactly once.

The module also derives the pendant reductions of a degree sequence (strip
degree zero and one vertices, generate the smaller graphs, reattach), the
W_p value multisets a graph admits under a defining-set pattern, and random
graphs with a fixed degree sequence via edge switching.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass
from functools import cached_property

from . import canon
from .canon import orbit_roots
from .model import (
    AutClassifiedGraph,
    DefiningSet,
    DegreeSequence,
    DenseGraph,
    bits,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenSpec:
    """What to generate: order, edge count, degree window, optional filter.

    part = (res, mod) restricts a run to one slice of the construction
    tree; the slices for res = 0..mod-1 partition the full output.
    """

    n: int
    e: int
    min_degree: int = 0
    max_degree: int | None = None
    exact_sequence: DegreeSequence | None = None
    part: tuple[int, int] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.max_degree is None:
            object.__setattr__(self, "max_degree", self.n - 1)
        if not 0 <= self.min_degree <= self.max_degree <= max(self.n - 1, 0):
            raise ValueError("need 0 <= d <= D <= n-1")
        if self.e < 0 or 2 * self.e > self.n * (self.n - 1):
            raise ValueError("edge count out of range")
        if self.exact_sequence is not None:
            seq = self.exact_sequence
            if seq.n != self.n or seq.edge_count != self.e:
                raise ValueError("exact_sequence disagrees with n or e")
            degs = seq.degrees()
            if degs[0] < self.min_degree or degs[-1] > self.max_degree:
                raise ValueError("exact_sequence outside the degree window")
        if self.part is not None:
            res, mod = self.part
            if not 0 <= res < mod:
                raise ValueError("part needs 0 <= res < mod")

    @classmethod
    def for_sequence(
        cls, seq: DegreeSequence, part: tuple[int, int] | None = None
    ) -> "GenSpec":
        degs = seq.degrees()
        if not degs:
            raise ValueError("empty degree sequence")
        return cls(
            n=seq.n,
            e=seq.edge_count,
            min_degree=degs[0],
            max_degree=degs[-1],
            exact_sequence=seq,
            part=part,
        )

    def feasible(self) -> bool:
        if self.exact_sequence is not None:
            return self.exact_sequence.is_graphical()
        # the window is feasible iff the most balanced sequence with the
        # right total fits it and is graphical
        total = 2 * self.e
        if not self.n * self.min_degree <= total <= self.n * self.max_degree:
            return False
        base, extra = divmod(total, self.n)
        degs = [base + 1] * extra + [base] * (self.n - extra)
        if degs[-1] < self.min_degree or degs[0] > self.max_degree:
            return False
        return DegreeSequence.from_degrees(degs).is_graphical()


def canonical_form(g: DenseGraph) -> tuple[DenseGraph, int]:
    """Canonical copy of g and the exact automorphism group order."""
    cg, result = canon.canonical_graph(g)
    return cg, result.group_order


def classified(g: DenseGraph) -> AutClassifiedGraph:
    cg, aut = canonical_form(g)
    return AutClassifiedGraph(cg, aut, cg.degree_sequence())


def _interval_assignment(current, targets, r, largest=False):
    """Greedy injective map of current degrees into target degrees.

    Every current degree c must land on an unused target in [c, c+r]; the
    intervals all have width r, so the greedy sweep is exact. Returns the
    assigned target sum (smallest possible, or largest with largest=True),
    or None when no assignment exists.
    """
    pool = sorted(targets)
    used = [False] * len(pool)
    total = 0
    for c in sorted(current, reverse=largest):
        scan = range(len(pool) - 1, -1, -1) if largest else range(len(pool))
        pick = -1
        for i in scan:
            if not used[i] and c <= pool[i] <= c + r:
                pick = i
                break
        if pick < 0:
            return None
        used[pick] = True
        total += pool[pick]
    return total


def _completable(g: DenseGraph, spec: GenSpec) -> bool:
    """Can g grow into a spec graph by adding r more vertices?

    Every test depends only on the isomorphism class of g and never
    rejects a completable graph, so pruning on it keeps the construction
    tree exact.
    """
    r = spec.n - g.n
    degs = g.degrees()
    d, D = spec.min_degree, spec.max_degree
    if any(deg > D or d - deg > r for deg in degs):
        return False
    e_add = spec.e - g.m
    if e_add < 0:
        return False
    # new edges only touch new vertices: degree gains are capped by r
    need = sum(max(0, d - deg) for deg in degs)
    if 2 * e_add < r * d + need:
        return False
    cap_cur = sum(min(D - deg, r) for deg in degs)
    if 2 * e_add > cap_cur + r * min(D, spec.n - 1):
        return False
    if e_add > r * (r - 1) // 2 + cap_cur:
        return False
    seq = spec.exact_sequence
    if seq is not None:
        targets = seq.degrees()
        lo = _interval_assignment(degs, targets, r)
        if lo is None:
            return False
        hi = _interval_assignment(degs, targets, r, largest=True)
        if hi is None:
            return False
        # current-to-new edge count is the total current degree gain
        if lo - sum(degs) > e_add:
            return False
        if e_add > r * (r - 1) // 2 + (hi - sum(degs)):
            return False
    return True


def _mask_orbit_min(mask: int, gens) -> int:
    """Smallest image of a vertex mask under the generated group."""
    if not gens:
        return mask
    best = mask
    seen = {mask}
    frontier = [mask]
    while frontier:
        grow = []
        for m in frontier:
            for perm in gens:
                img = 0
                for u in bits(m):
                    img |= 1 << perm[u]
                if img not in seen:
                    seen.add(img)
                    grow.append(img)
                    if img < best:
                        best = img
        frontier = grow
    return best


def _accepted(child: DenseGraph, result) -> bool:
    """Canonical-deletion test: is the new vertex the one to delete?

    The canonical labeling places some vertex last; the child survives
    exactly when that vertex and the just-added vertex n-1 lie in one
    automorphism orbit.
    """
    last = child.n - 1
    target = result.labeling.index(last)
    if target == last:
        return True
    roots = orbit_roots(child.n, result.generators)
    return roots[target] == roots[last]


def generate(spec: GenSpec, visitor=None) -> int:
    """Visit one AutClassifiedGraph per isomorphism class matching spec.

    Returns the number of classes emitted. An infeasible spec emits
    nothing and logs a warning. With spec.part set, only the matching
    slice of the construction tree is expanded.
    """
    if not spec.feasible():
        log.warning("infeasible generation spec %s", spec)
        return 0
    n = spec.n
    k_split = min(max(2, n - 2), n)
    state = {"emitted": 0, "split_index": 0}

    def emit(g: DenseGraph):
        if g.m != spec.e:
            return
        degs = g.degrees()
        if min(degs) < spec.min_degree:
            return
        seq = spec.exact_sequence
        if seq is not None and DegreeSequence.from_degrees(degs) != seq:
            return
        state["emitted"] += 1
        if visitor is not None:
            visitor(classified(g))

    def recurse(g: DenseGraph, result):
        k = g.n
        if k == k_split and spec.part is not None:
            idx = state["split_index"]
            state["split_index"] += 1
            if idx % spec.part[1] != spec.part[0]:
                return
        if k == n:
            emit(g)
            return
        gens = result.generators
        seen_masks = set()
        for mask in range(1 << k):
            if mask.bit_count() > spec.max_degree:
                continue
            if mask in seen_masks:
                continue
            rep = _mask_orbit_min(mask, gens)
            seen_masks.add(mask)
            if rep != mask:
                if rep in seen_masks:
                    continue
                seen_masks.add(rep)
            child = g.with_vertex(mask)
            if any(child.rows[u].bit_count() > spec.max_degree for u in bits(mask)):
                continue
            if not _completable(child, spec):
                continue
            child_result = canon.canonical_labeling(child.n, child.rows)
            if not _accepted(child, child_result):
                continue
            recurse(child, child_result)

    root = DenseGraph.empty(1)
    if _completable(root, spec):
        recurse(root, canon.canonical_labeling(1, root.rows))
    return state["emitted"]


def generate_all(spec: GenSpec) -> list[AutClassifiedGraph]:
    """Eager list variant of generate, for tests and small specs."""
    out: list[AutClassifiedGraph] = []
    generate(spec, out.append)
    return out


@dataclass(frozen=True)
class ReductionRow:
    """One way the degree zero and one vertices of s1 can attach.

    s2 is the degree sequence left after one stripping pass. k2_pairs
    counts degree-one vertices joined to each other (K2 components),
    isolated counts degree-zero vertices, and pendant_sites lists
    (t, k, c): c target vertices, each carrying k pendants and left at
    degree t. aut_factor is the exact ratio |Aut(G)| / |Aut(G')| between
    a graph with sequence s1 and its stripped core G'.

    skippable marks rows whose graphs never carry a full matching
    collection (some target keeps two or more pendants, and those pendants
    share their only neighbor). ambiguous marks rows where the core does
    not determine the extension (some untouched vertex already has a
    target's reduced degree); such rows do not arise for the sequences
    used here.
    """

    s1: DegreeSequence
    s2: DegreeSequence
    k2_pairs: int
    isolated: int
    pendant_sites: tuple[tuple[int, int, int], ...]
    aut_factor: int
    skippable: bool
    ambiguous: bool

    @cached_property
    def spec(self) -> GenSpec:
        return GenSpec.for_sequence(self.s2)


def reduction_rows(s1: DegreeSequence) -> tuple[ReductionRow, ...]:
    """All ways graphs with sequence s1 strip to a min-degree-2 core.

    Every graph with sequence s1 whose one stripping pass leaves a core of
    minimum degree at least two reduces to exactly one row, and every core
    graph of an unambiguous row extends back to exactly one s1 class, with
    |Aut| scaled by the row's aut_factor. Attachments that would drop a
    target below degree two are not one-pass reductions and are omitted.
    """
    counts = dict(s1.terms)
    isolated = counts.pop(0, 0)
    n_pendants = counts.pop(1, 0)
    heavy = sorted(counts)

    rows: list[ReductionRow] = []

    def plans(rest: int, floor: tuple[int, int]):
        """Multisets of (target degree d, pendant count k) absorbing rest."""
        if rest == 0:
            yield ()
            return
        for d in heavy:
            for k in range(1, rest + 1):
                if (d, k) < floor or d - k < 2:
                    continue
                for tail in plans(rest - k, (d, k)):
                    yield ((d, k),) + tail

    for pairs in range(n_pendants // 2 + 1):
        for plan in plans(n_pendants - 2 * pairs, (0, 0)):
            used: dict[int, int] = {}
            for d, _ in plan:
                used[d] = used.get(d, 0) + 1
            if any(used[d] > counts[d] for d in used):
                continue
            degrees = [
                d for d, c in counts.items() for _ in range(c - used.get(d, 0))
            ]
            sites: dict[tuple[int, int], int] = {}
            for d, k in plan:
                degrees.append(d - k)
                site = (d - k, k)
                sites[site] = sites.get(site, 0) + 1
            ts = [t for t, _ in sites]
            ambiguous = len(set(ts)) < len(ts) or any(
                counts.get(t, 0) > used.get(t, 0) for t in ts
            )
            factor = (
                math.factorial(isolated)
                * 2**pairs
                * math.factorial(pairs)
                * math.prod(math.factorial(k) ** c for (_, k), c in sites.items())
            )
            rows.append(
                ReductionRow(
                    s1=s1,
                    s2=DegreeSequence.from_degrees(degrees),
                    k2_pairs=pairs,
                    isolated=isolated,
                    pendant_sites=tuple(
                        (t, k, c) for (t, k), c in sorted(sites.items())
                    ),
                    aut_factor=factor,
                    skippable=any(k >= 2 for _, k in plan),
                    ambiguous=ambiguous,
                )
            )
    return tuple(rows)


def extend_with_pendants(
    g_prime: AutClassifiedGraph, target: DegreeSequence
) -> AutClassifiedGraph:
    """Reattach the stripped vertices of target to the core g_prime.

    The (core sequence, target) pair must select a unique unambiguous
    reduction row; the extension that row forces is returned in canonical
    form, and the recomputed automorphism order is checked against the
    row's exact aut_factor.
    """
    if g_prime.degree_sequence == target:
        return g_prime
    rows = [
        row
        for row in reduction_rows(target)
        if row.s2 == g_prime.degree_sequence and not row.ambiguous
    ]
    if len(rows) != 1:
        raise ValueError(
            f"no unique extension from {g_prime.degree_sequence.text} "
            f"to {target.text}"
        )
    row = rows[0]
    core = g_prime.graph
    g = core
    for t, k, c in row.pendant_sites:
        anchors = [u for u in range(core.n) if core.degree(u) == t]
        if len(anchors) != c:
            raise ValueError(
                f"core has {len(anchors)} vertices of degree {t}, row needs {c}"
            )
        for u in anchors:
            for _ in range(k):
                g = g.with_vertex(1 << u)
    for _ in range(row.k2_pairs):
        mate = g.n
        g = g.with_vertex(0)
        g = g.with_vertex(1 << mate)
    for _ in range(row.isolated):
        g = g.with_vertex(0)
    acg = classified(g)
    if acg.degree_sequence != target:
        raise AssertionError(
            f"extension of {g_prime.degree_sequence.text} gave "
            f"{acg.degree_sequence.text}, wanted {target.text}"
        )
    expected = g_prime.aut_order * row.aut_factor
    if acg.aut_order != expected:
        raise AssertionError(
            f"extension automorphism order {acg.aut_order} != "
            f"{g_prime.aut_order} * {row.aut_factor}"
        )
    return acg


def enumerate_w_multisets(
    g: DenseGraph, pattern: DefiningSet
) -> list[tuple[frozenset, ...]]:
    """All W_p value multisets consistent with pattern and g.

    Each result is the sorted tuple of the pattern's w values; the value
    for position p is the set of graph vertices absorbing an uncovered
    pair through p, and a vertex of degree d absorbs (w - d) / 2 pairs.
    Multisets are dropped when some value excludes two degree-one vertices
    with a common neighbor: the matching that value calls for would have
    to saturate both pendants through that single neighbor.
    """
    w = pattern.w
    quotas: dict[int, int] = {}
    for u in range(g.n):
        deficit = w - g.degree(u)
        if deficit == 0:
            continue
        if deficit < 0 or deficit % 2:
            log.info(
                "degree sequence %s inadmissible for pattern %s",
                g.degree_sequence().text,
                pattern.text,
            )
            return []
        quotas[u] = deficit // 2
    if sum(quotas.values()) != len(pattern.uncovered_pairs):
        log.info(
            "degree sequence %s absorbs %d pairs, pattern %s has %d",
            g.degree_sequence().text,
            sum(quotas.values()),
            pattern.text,
            len(pattern.uncovered_pairs),
        )
        return []

    pendants = [u for u in range(g.n) if g.degree(u) == 1]
    blocked = [
        (u, v)
        for u, v in itertools.combinations(pendants, 2)
        if g.rows[u] == g.rows[v]
    ]

    out = []
    for ms in pattern.value_multisets(quotas):
        dead = any(
            u not in value and v not in value
            for value in ms
            for u, v in blocked
        )
        if not dead:
            out.append(ms)
    return out


def sample_random(seq: DegreeSequence, switches: int, rng_seed) -> DenseGraph:
    """A random graph with the exact degree sequence seq.

    Starts from the Havel-Hakimi realization and attempts the requested
    number of double-edge switches: random edges {a,b} and {c,d} become
    {a,c} and {b,d} when all four endpoints are distinct and neither new
    edge exists. Deterministic for a fixed seed.
    """
    if not seq.is_graphical():
        raise ValueError(f"degree sequence {seq.text} is not graphical")
    n = seq.n
    rows = [0] * n
    remaining = [[d, u] for u, d in enumerate(seq.degrees())]
    while remaining:
        remaining.sort(key=lambda x: -x[0])
        d, u = remaining.pop(0)
        if d == 0:
            break
        for entry in remaining[:d]:
            entry[0] -= 1
            rows[u] |= 1 << entry[1]
            rows[entry[1]] |= 1 << u

    g = DenseGraph(n, tuple(rows))
    if g.degree_sequence() != seq:
        raise AssertionError("realization does not match the sequence")
    rng = random.Random(rng_seed)
    edges = list(g.edges)
    rows = list(g.rows)
    for _ in range(switches):
        if len(edges) < 2:
            break
        i = rng.randrange(len(edges))
        j = rng.randrange(len(edges))
        if i == j:
            continue
        a, b = edges[i]
        c, d = edges[j]
        if rng.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4:
            continue
        if rows[a] >> c & 1 or rows[b] >> d & 1:
            continue
        rows[a] ^= (1 << b) | (1 << c)
        rows[b] ^= (1 << a) | (1 << d)
        rows[c] ^= (1 << d) | (1 << a)
        rows[d] ^= (1 << c) | (1 << b)
        edges[i] = (min(a, c), max(a, c))
        edges[j] = (min(b, d), max(b, d))
    out = DenseGraph(n, tuple(rows))
    if out.degrees() != g.degrees():
        raise AssertionError("edge switching changed the degree sequence")
    return out
