"""Core data model: triple systems, dense bitmask graphs, and the block split.

A triple system on points 0..v-1 is a set of 3-element blocks covering every
pair of points exactly once. Splitting a system over a point subset W sorts
its blocks into three layers: blocks meeting W in at least two points (these
induce a pattern of pairs and triples inside W), blocks meeting W in exactly
one point (each projects to an edge on the remaining points, giving a graph
G), and blocks disjoint from W (these form a triangle decomposition of the
complement of G). The projected edges through a fixed point p of W form a
matching that misses exactly the vertices already paired with p by the first
layer; those excluded-vertex sets are the W-sets of the split.

Graphs are stored as tuples of adjacency bitmasks, capped at 32 vertices,
which keeps edge-set operations single machine-word ANDs.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

MAX_GRAPH_VERTICES = 32

Block = tuple[int, int, int]

# An edge subset of a DenseGraph packed as an int over its edge order.
MatchingBitmap = int


def bits(mask: int):
    """Yield the indices of the set bits of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def normalize_block(block) -> Block:
    a, b, c = sorted(block)
    if a == b or b == c:
        raise ValueError(f"block {block!r} has a repeated point")
    return (a, b, c)


@dataclass(frozen=True)
class TripleSystem:
    """A Steiner triple system: every pair of points in exactly one block."""

    v: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(sorted(normalize_block(b) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        seen = set()
        for block in blocks:
            for pair in itertools.combinations(block, 2):
                if pair in seen:
                    raise ValueError(f"pair {pair} covered twice")
                seen.add(pair)
            if block[2] >= self.v or block[0] < 0:
                raise ValueError(f"block {block} out of range for v={self.v}")
        if len(seen) != self.v * (self.v - 1) // 2:
            raise ValueError(
                f"{len(self.blocks)} blocks cover {len(seen)} pairs, "
                f"not all {self.v * (self.v - 1) // 2}"
            )

    @cached_property
    def pair_to_block(self) -> dict[tuple[int, int], Block]:
        out = {}
        for block in self.blocks:
            for pair in itertools.combinations(block, 2):
                out[pair] = block
        return out

    def block_through(self, p: int, q: int) -> Block:
        return self.pair_to_block[(p, q) if p < q else (q, p)]

    def blocks_through(self, p: int) -> tuple[Block, ...]:
        return tuple(b for b in self.blocks if p in b)

    def relabel(self, perm) -> "TripleSystem":
        """Apply a point relabeling; perm[i] is the new name of point i."""
        return TripleSystem(
            self.v, tuple(tuple(perm[p] for p in b) for b in self.blocks)
        )


def block_count(v: int) -> int:
    """Number of blocks in any triple system of order v."""
    return v * (v - 1) // 6


def admissible_orders(limit: int) -> list[int]:
    """Orders up to limit that admit a triple system (1 or 3 mod 6)."""
    return [v for v in range(1, limit + 1) if v % 6 in (1, 3)]


_TERM_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


@dataclass(frozen=True)
class DegreeSequence:
    """A degree multiset in exponent form, e.g. 1^2 5^14.

    terms is a tuple of (degree, multiplicity) pairs with strictly
    increasing degrees and positive multiplicities.
    """

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last = -1
        for degree, count in self.terms:
            if degree <= last:
                raise ValueError("degrees must be strictly increasing")
            if count <= 0 or degree < 0:
                raise ValueError("bad degree sequence term")
            last = degree

    @classmethod
    def from_degrees(cls, degrees) -> "DegreeSequence":
        counts: dict[int, int] = {}
        for d in degrees:
            counts[d] = counts.get(d, 0) + 1
        return cls(tuple(sorted(counts.items())))

    @classmethod
    def from_text(cls, text: str) -> "DegreeSequence":
        """Parse exponent notation: "1^2 5^14" or "3^4 5^10" or "2"."""
        terms = []
        for token in text.split():
            m = _TERM_RE.match(token)
            if not m:
                raise ValueError(f"bad degree sequence token {token!r}")
            terms.append((int(m.group(1)), int(m.group(2) or 1)))
        return cls(tuple(sorted(terms)))

    @property
    def text(self) -> str:
        return " ".join(
            f"{d}^{c}" if c > 1 else str(d) for d, c in self.terms
        )

    @property
    def n(self) -> int:
        return sum(c for _, c in self.terms)

    @property
    def edge_count(self) -> int:
        total = sum(d * c for d, c in self.terms)
        if total % 2:
            raise ValueError(f"odd degree total in {self.text}")
        return total // 2

    def degrees(self) -> tuple[int, ...]:
        """The full degree list, ascending."""
        return tuple(
            d for d, c in self.terms for _ in range(c)
        )

    def is_graphical(self) -> bool:
        """Erdos-Gallai test: some simple graph realizes this sequence."""
        degs = sorted(self.degrees(), reverse=True)
        n = len(degs)
        if n == 0:
            return True
        if sum(degs) % 2 or degs[0] >= n:
            return False
        prefix = 0
        for k in range(1, n + 1):
            prefix += degs[k - 1]
            tail = sum(min(d, k) for d in degs[k:])
            if prefix > k * (k - 1) + tail:
                return False
        return True


@dataclass(frozen=True)
class DenseGraph:
    """Simple undirected graph on vertices 0..n-1 as adjacency bitmasks."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_GRAPH_VERTICES:
            raise ValueError(f"n={self.n} outside 0..{MAX_GRAPH_VERTICES}")
        if len(self.rows) != self.n:
            raise ValueError("rows length must equal n")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.rows):
            if row & ~full or row >> i & 1:
                raise ValueError(f"row {i} has a loop or out-of-range bit")
            for j in bits(row):
                if not self.rows[j] >> i & 1:
                    raise ValueError(f"edge ({i},{j}) not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges) -> "DenseGraph":
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError("loops not allowed")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "DenseGraph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "DenseGraph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << i) for i in range(n)))

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All edges (i, j) with i < j in lexicographic order."""
        return tuple(
            (i, j)
            for i in range(self.n)
            for j in bits(self.rows[i] >> (i + 1) << (i + 1))
        )

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: k for k, e in enumerate(self.edges)}

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.rows)

    def degree_sequence(self) -> DegreeSequence:
        return DegreeSequence.from_degrees(self.degrees())

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def with_edge(self, i: int, j: int) -> "DenseGraph":
        rows = list(self.rows)
        rows[i] |= 1 << j
        rows[j] |= 1 << i
        return DenseGraph(self.n, tuple(rows))

    def with_vertex(self, neighbors_mask: int = 0) -> "DenseGraph":
        """Append vertex n joined to the vertices in neighbors_mask."""
        rows = [
            row | (1 << self.n) if neighbors_mask >> i & 1 else row
            for i, row in enumerate(self.rows)
        ]
        rows.append(neighbors_mask)
        return DenseGraph(self.n + 1, tuple(rows))

    def relabel(self, perm) -> "DenseGraph":
        """Apply a vertex relabeling; perm[i] is the new name of vertex i."""
        rows = [0] * self.n
        for i in range(self.n):
            acc = 0
            for j in bits(self.rows[i]):
                acc |= 1 << perm[j]
            rows[perm[i]] = acc
        return DenseGraph(self.n, tuple(rows))

    def complement(self) -> "DenseGraph":
        full = (1 << self.n) - 1
        return DenseGraph(
            self.n, tuple(full ^ row ^ (1 << i) for i, row in enumerate(self.rows))
        )

    def masked(self, vertex_mask: int) -> "DenseGraph":
        """Induced subgraph on the masked vertices, labels kept in place."""
        return DenseGraph(
            self.n,
            tuple(
                self.rows[i] & vertex_mask if vertex_mask >> i & 1 else 0
                for i in range(self.n)
            ),
        )

    def triangles(self) -> list[tuple[int, int, int]]:
        """All triangles (i, j, k) with i < j < k."""
        out = []
        for i, j in self.edges:
            common = self.rows[i] & self.rows[j]
            out.extend((i, j, k) for k in bits(common >> (j + 1) << (j + 1)))
        return out

    def connected_components(self) -> list[int]:
        """Vertex masks of the connected components."""
        seen = 0
        comps = []
        for start in range(self.n):
            if seen >> start & 1:
                continue
            comp = 1 << start
            frontier = 1 << start
            while frontier:
                grow = 0
                for u in bits(frontier):
                    grow |= self.rows[u]
                frontier = grow & ~comp
                comp |= grow
            seen |= comp
            comps.append(comp)
        return comps


def edge_bitmap(graph: DenseGraph, edges) -> int:
    """Pack an edge set into a bitmap over the graph's edge order."""
    index = graph.edge_index
    out = 0
    for i, j in edges:
        out |= 1 << index[(i, j) if i < j else (j, i)]
    return out


def bitmap_edges(graph: DenseGraph, bitmap: int) -> tuple[tuple[int, int], ...]:
    all_edges = graph.edges
    return tuple(all_edges[k] for k in bits(bitmap))


def bitmap_vertex_mask(graph: DenseGraph, bitmap: int) -> int:
    mask = 0
    for i, j in bitmap_edges(graph, bitmap):
        mask |= (1 << i) | (1 << j)
    return mask


def is_matching_bitmap(graph: DenseGraph, bitmap: int) -> bool:
    """True when no two edges of the bitmap share a vertex."""
    seen = 0
    for i, j in bitmap_edges(graph, bitmap):
        pair = (1 << i) | (1 << j)
        if seen & pair:
            return False
        seen |= pair
    return True


def complement(g: DenseGraph) -> DenseGraph:
    return g.complement()


def induced_pbd(sts: TripleSystem, subset) -> tuple[tuple[int, ...], ...]:
    """Intersections of size >= 2 between blocks and the subset.

    The result is a pairwise balanced design on the subset: every pair of
    subset points appears in exactly one returned pair or triple.
    """
    wset = frozenset(subset)
    out = []
    for block in sts.blocks:
        inter = tuple(p for p in block if p in wset)
        if len(inter) >= 2:
            out.append(inter)
    return tuple(sorted(out))


@dataclass(frozen=True)
class AutClassifiedGraph:
    """A canonically labeled graph together with its group order."""

    graph: DenseGraph
    aut_order: int
    degree_sequence: DegreeSequence


@dataclass(frozen=True)
class DefiningSet:
    """A PBD(w,{2,3}) pattern on positions 0..w-1, given by its triples.

    The triples are the size-3 blocks; every position pair not inside a
    triple is implicitly a size-2 block. Occurrences of the pattern inside
    a triple system anchor the counting decomposition: each uncovered pair
    {p,q} must be completed by a block {p,q,u} reaching an outside vertex
    u, and the multiset of completion roles drives the degree sequences
    and W_p value multisets below.
    """

    w: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(sorted(normalize_block(b) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        seen = set()
        for block in blocks:
            if block[0] < 0 or block[2] >= self.w:
                raise ValueError(f"block {block} outside positions 0..{self.w - 1}")
            for pair in itertools.combinations(block, 2):
                if pair in seen:
                    raise ValueError(f"pattern pair {pair} covered twice")
                seen.add(pair)

    @classmethod
    def from_text(cls, w: int, text: str) -> "DefiningSet":
        """Parse "012,034" style block lists (single digit positions)."""
        blocks = []
        for token in text.split(","):
            token = token.strip()
            if token:
                blocks.append(tuple(int(ch) for ch in token))
        return cls(w, tuple(blocks))

    @property
    def text(self) -> str:
        return ",".join("".join(str(p) for p in b) for b in self.blocks)

    @cached_property
    def uncovered_pairs(self) -> tuple[tuple[int, int], ...]:
        """Position pairs not inside any triple: the implied size-2 blocks."""
        covered = {
            pair
            for block in self.blocks
            for pair in itertools.combinations(block, 2)
        }
        return tuple(
            pair
            for pair in itertools.combinations(range(self.w), 2)
            if pair not in covered
        )

    @cached_property
    def stabilizer_order(self) -> int:
        """Number of position permutations preserving the triple set."""
        target = set(self.blocks)
        count = 0
        for perm in itertools.permutations(range(self.w)):
            if all(tuple(sorted(perm[p] for p in b)) in target for b in target):
                count += 1
        return count

    def deficiency_profiles(self) -> tuple[tuple[int, ...], ...]:
        """Realizable multisets of uncovered-pair group sizes.

        A profile lists, in descending order, how many uncovered pairs each
        outside completion vertex absorbs. Pairs absorbed by one vertex must
        be pairwise disjoint (two shared-position pairs through the same
        vertex would cover a position pair twice).
        """
        pairs = self.uncovered_pairs
        profiles = set()

        def extend(remaining: tuple[tuple[int, int], ...], sizes: tuple[int, ...]):
            if not remaining:
                profiles.add(tuple(sorted(sizes, reverse=True)))
                return
            first = remaining[0]
            rest = remaining[1:]
            # groups that can be pairwise disjoint, always containing first
            candidates = [g for g in _disjoint_groups(first, rest)]
            for group in candidates:
                left = tuple(p for p in rest if p not in group)
                extend(left, sizes + (len(group),))

        extend(pairs, ())
        return tuple(sorted(profiles))

    def degree_sequences(self, v: int) -> tuple[DegreeSequence, ...]:
        """Admissible degree sequences of G for this pattern at order v."""
        n = v - self.w
        out = []
        for profile in self.deficiency_profiles():
            if len(profile) > n:
                continue
            degrees = [self.w - 2 * size for size in profile]
            if degrees and min(degrees) < 0:
                continue
            degrees.extend([self.w] * (n - len(profile)))
            out.append(DegreeSequence.from_degrees(degrees))
        return tuple(sorted(out, key=lambda s: s.terms))

    def value_multisets(self, quotas) -> tuple[tuple[frozenset, ...], ...]:
        """Distinct multisets {W_p} for the given completion quotas.

        quotas maps an abstract outside vertex to the number of uncovered
        pairs it absorbs. Each assignment sends every uncovered pair to a
        vertex with remaining quota so that pairs sharing a vertex are
        position-disjoint; W_p collects the vertices absorbing the pairs
        through position p. Assignments are deduplicated by the multiset of
        W_p values, which is the only data the downstream counts use.
        """
        return tuple(
            sorted(
                self.assignment_counts(quotas),
                key=lambda ms: [(len(s), sorted(s)) for s in ms],
            )
        )

    def assignment_counts(self, quotas) -> dict[tuple[frozenset, ...], int]:
        """Map each distinct value multiset to its number of assignments."""
        pairs = self.uncovered_pairs
        quota = dict(quotas)
        if sum(quota.values()) != len(pairs) or any(q <= 0 for q in quota.values()):
            raise ValueError("quotas do not match the uncovered pairs")
        vertices = sorted(quota)
        taken = {u: [] for u in vertices}
        found: dict[tuple[frozenset, ...], int] = {}

        def place(idx: int):
            if idx == len(pairs):
                values = [
                    frozenset(
                        u for u in vertices for p2 in taken[u] if p in p2
                    )
                    for p in range(self.w)
                ]
                key = tuple(sorted(values, key=lambda s: (len(s), sorted(s))))
                found[key] = found.get(key, 0) + 1
                return
            pair = pairs[idx]
            for u in vertices:
                if quota[u] == 0:
                    continue
                if any(set(pair) & set(prev) for prev in taken[u]):
                    continue
                quota[u] -= 1
                taken[u].append(pair)
                place(idx + 1)
                taken[u].pop()
                quota[u] += 1

        place(0)
        return found

    def quotas_for(self, seq: DegreeSequence) -> dict[int, int]:
        """Abstract completion quotas for a degree sequence of G.

        Vertices are numbered 0.. with one entry per deficient vertex; a
        vertex of degree d absorbs (w - d)/2 uncovered pairs.
        """
        quotas = {}
        idx = 0
        for degree, count in seq.terms:
            deficit = self.w - degree
            if deficit < 0 or deficit % 2:
                raise ValueError(
                    f"degree sequence {seq.text} inadmissible for pattern {self.text}"
                )
            for _ in range(count):
                if deficit:
                    quotas[idx] = deficit // 2
                    idx += 1
        if sum(quotas.values()) != len(self.uncovered_pairs):
            raise ValueError(
                f"degree sequence {seq.text} inadmissible for pattern {self.text}"
            )
        return quotas


def _disjoint_groups(first, rest):
    """Yield all groups containing first whose pairs are pairwise disjoint."""
    pool = [p for p in rest if not set(p) & set(first)]

    def grow(group, candidates):
        yield tuple(group)
        for i, cand in enumerate(candidates):
            if all(not set(cand) & set(g) for g in group):
                yield from grow(group + [cand], candidates[i + 1 :])

    yield from grow([first], pool)


BUILTIN_PATTERNS = {
    "w3": DefiningSet(3, ((0, 1, 2),)),
    "w4": DefiningSet(4, ((0, 1, 2),)),
    "w5": DefiningSet(5, ((0, 1, 2), (0, 3, 4))),
    "w6_quadrilateral": DefiningSet(
        6, ((0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5))
    ),
}


def pattern_for(w: int, text: str | None = None) -> DefiningSet:
    """Look up or parse a defining-set pattern for the given w."""
    if text:
        return DefiningSet.from_text(w, text)
    for pat in BUILTIN_PATTERNS.values():
        if pat.w == w:
            return pat
    raise ValueError(f"no builtin pattern with w={w}")


def split_blocks(sts: TripleSystem, w_points):
    """Sort blocks by the size of their intersection with w_points.

    Returns (heavy, crossing, inner): blocks meeting the subset in at least
    two points, in exactly one point, and not at all.
    """
    wset = frozenset(w_points)
    heavy, crossing, inner = [], [], []
    for block in sts.blocks:
        k = len(wset.intersection(block))
        if k >= 2:
            heavy.append(block)
        elif k == 1:
            crossing.append(block)
        else:
            inner.append(block)
    return tuple(heavy), tuple(crossing), tuple(inner)


@dataclass(frozen=True)
class SplitView:
    """The decomposition of a triple system over a point subset.

    Graph vertices are the non-subset points relabeled to 0..n-1 following
    rest; subset points are relabeled to 0..w-1 following w_points.

    wsets[t] holds the graph vertices already paired with subset point t by
    a heavy block, so the matching color class of t covers exactly the other
    graph vertices. pattern holds the subset-side intersections (pairs and
    triples) of the heavy blocks; inner_triangles are the subset-free blocks
    on graph labels, a triangle decomposition of the complement of graph.
    """

    sts: TripleSystem
    w_points: tuple[int, ...]
    rest: tuple[int, ...]
    graph: DenseGraph
    wsets: tuple[frozenset[int], ...]
    color_classes: tuple[int, ...]
    pattern: tuple[tuple[int, ...], ...]
    inner_triangles: tuple[tuple[int, int, int], ...]

    def validate(self):
        """Check every structural identity of the split; raises on failure."""
        g = self.graph
        w = len(self.w_points)
        n = g.n
        full = (1 << n) - 1
        union = 0
        for t in range(w):
            cls = self.color_classes[t]
            if union & cls:
                raise AssertionError("color classes overlap")
            union |= cls
            if not is_matching_bitmap(g, cls):
                raise AssertionError("color class is not a matching")
            blocked = 0
            for u in self.wsets[t]:
                blocked |= 1 << u
            if bitmap_vertex_mask(g, cls) != full ^ blocked:
                raise AssertionError("color class misses its saturation set")
        if union != (1 << g.m) - 1:
            raise AssertionError("color classes do not cover the graph")
        for u in range(n):
            hits = sum(1 for ws in self.wsets if u in ws)
            if g.degree(u) != w - hits:
                raise AssertionError("degree identity fails")
        cover = set()
        cg = g.complement()
        for a, b, c in self.inner_triangles:
            for i, j in ((a, b), (a, c), (b, c)):
                if not cg.has_edge(i, j):
                    raise AssertionError("inner block is not a complement edge")
                if (i, j) in cover:
                    raise AssertionError("inner blocks overlap")
                cover.add((i, j))
        if len(cover) != cg.m:
            raise AssertionError("inner blocks do not decompose the complement")


def split_view(sts: TripleSystem, w_points) -> SplitView:
    """Decompose sts over the point subset w_points."""
    w_points = tuple(sorted(w_points))
    wset = frozenset(w_points)
    rest = tuple(p for p in range(sts.v) if p not in wset)
    to_graph = {p: i for i, p in enumerate(rest)}
    to_w = {p: t for t, p in enumerate(w_points)}

    heavy, crossing, inner = split_blocks(sts, wset)

    pattern = []
    wsets = [set() for _ in w_points]
    for block in heavy:
        inside = tuple(sorted(to_w[p] for p in block if p in wset))
        pattern.append(inside)
        outside = [p for p in block if p not in wset]
        for p in outside:
            for t in inside:
                wsets[t].add(to_graph[p])

    edges = []
    per_point = [[] for _ in w_points]
    for block in crossing:
        (p,) = (q for q in block if q in wset)
        u, v = sorted(to_graph[q] for q in block if q not in wset)
        edges.append((u, v))
        per_point[to_w[p]].append((u, v))

    graph = DenseGraph.from_edges(len(rest), edges)
    color_classes = tuple(edge_bitmap(graph, cls) for cls in per_point)
    inner_triangles = tuple(
        tuple(sorted(to_graph[p] for p in block)) for block in inner
    )

    return SplitView(
        sts=sts,
        w_points=w_points,
        rest=rest,
        graph=graph,
        wsets=tuple(frozenset(ws) for ws in wsets),
        color_classes=color_classes,
        pattern=tuple(sorted(pattern)),
        inner_triangles=inner_triangles,
    )
