"""Naive reference implementations used only by the tests.

Everything here recomputes what the package computes by the most direct
route available: full enumeration, raw backtracking, no shortcuts, no
canonical forms, no shared code with the production modules. Slow on
purpose. The production paths must agree with these on small inputs.
"""

from __future__ import annotations

import itertools
import random

from stscount.model import DenseGraph


# --- labeled graph enumeration ---


def all_graph_rows(n):
    """Every labeled graph on n vertices as an adjacency row tuple."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        for k, (i, j) in enumerate(pairs):
            if mask >> k & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        yield tuple(rows)


def labeled_with_degrees(degs):
    """All labeled graphs where vertex i has degree exactly degs[i].

    Row-by-row backtracking: vertex i chooses its neighbors among the
    later vertices that still have capacity.
    """
    n = len(degs)
    rows = [0] * n
    out = []

    def rec(i):
        if i == n:
            out.append(tuple(rows))
            return
        need = degs[i] - rows[i].bit_count()
        if need < 0:
            return
        free = [j for j in range(i + 1, n) if rows[j].bit_count() < degs[j]]
        if need > len(free):
            return
        for pick in itertools.combinations(free, need):
            for j in pick:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            rec(i + 1)
            for j in pick:
                rows[i] &= ~(1 << j)
                rows[j] &= ~(1 << i)

    rec(0)
    return out


# --- isomorphism and automorphisms by permutation search ---


def _invariant(rows):
    """Cheap isomorphism invariant used to bucket before pairwise tests."""
    n = len(rows)
    degs = [r.bit_count() for r in rows]
    per = []
    for i in range(n):
        nbr = tuple(sorted(degs[j] for j in range(n) if rows[i] >> j & 1))
        tri = sum(
            1
            for j in range(n)
            for k in range(j + 1, n)
            if rows[i] >> j & 1 and rows[i] >> k & 1 and rows[j] >> k & 1
        )
        per.append((degs[i], tri, nbr))
    return tuple(sorted(per))


def is_isomorphic(a, b):
    """Backtracking vertex-map search with degree pruning."""
    n = len(a)
    if len(b) != n:
        return False
    da = [r.bit_count() for r in a]
    db = [r.bit_count() for r in b]
    if sorted(da) != sorted(db):
        return False
    img = [-1] * n
    used = [False] * n

    def go(i):
        if i == n:
            return True
        for t in range(n):
            if used[t] or da[i] != db[t]:
                continue
            ok = True
            for j in range(i):
                if (a[i] >> j & 1) != (b[t] >> img[j] & 1):
                    ok = False
                    break
            if ok:
                img[i] = t
                used[t] = True
                if go(i + 1):
                    return True
                used[t] = False
                img[i] = -1
        return False

    return go(0)


def iso_class_reps(graphs):
    """One representative per isomorphism class among the given row tuples."""
    buckets = {}
    for rows in graphs:
        buckets.setdefault(_invariant(rows), []).append(rows)
    reps = []
    for group in buckets.values():
        local = []
        for rows in group:
            if not any(is_isomorphic(rows, r) for r in local):
                local.append(rows)
        reps.extend(local)
    return reps


def aut_order(rows):
    """Automorphism group order by raw backtracking over vertex images."""
    n = len(rows)
    degs = [r.bit_count() for r in rows]
    img = [-1] * n
    used = [False] * n
    count = 0

    def go(i):
        nonlocal count
        if i == n:
            count += 1
            return
        for t in range(n):
            if used[t] or degs[i] != degs[t]:
                continue
            ok = True
            for j in range(i):
                if (rows[i] >> j & 1) != (rows[t] >> img[j] & 1):
                    ok = False
                    break
            if ok:
                img[i] = t
                used[t] = True
                go(i + 1)
                used[t] = False
                img[i] = -1

    go(0)
    return count


def window_class_count(n, e, dmin, dmax):
    """Isomorphism classes with e edges and all degrees inside [dmin, dmax].

    Every class has a labeling whose positional degrees are sorted, so
    enumerating labeled graphs per sorted degree list hits every class.
    """
    reps = []
    for degs in itertools.combinations_with_replacement(range(dmin, dmax + 1), n):
        if sum(degs) == 2 * e:
            reps.extend(iso_class_reps(labeled_with_degrees(list(degs))))
    return len(iso_class_reps(reps))


# --- exact cover by subset enumeration ---


def naive_count_covers(n_elements, candidates):
    """Count exact covers by trying every subset of the candidate list."""
    full = (1 << n_elements) - 1
    masks = []
    for cand in candidates:
        m = 0
        for el in cand:
            m |= 1 << el
        masks.append(m)
    count = 0
    for pick in range(1 << len(masks)):
        acc = 0
        ok = True
        k = pick
        idx = 0
        while k:
            if k & 1:
                if acc & masks[idx]:
                    ok = False
                    break
                acc |= masks[idx]
            k >>= 1
            idx += 1
        if ok and acc == full:
            count += 1
    return count


# --- triangle decompositions by edge backtracking ---


def naive_triangle_decompositions(g: DenseGraph) -> int:
    """Partitions of the complement of g into triangles, by backtracking."""
    cg = g.complement()
    if cg.m == 0:
        return 1
    rows = list(cg.rows)
    count = 0

    def first_edge():
        for i, row in enumerate(rows):
            if row:
                return i, (row & -row).bit_length() - 1
        return None

    def go():
        nonlocal count
        edge = first_edge()
        if edge is None:
            count += 1
            return
        a, b = edge
        common = rows[a] & rows[b]
        c = common
        while c:
            u = (c & -c).bit_length() - 1
            c &= c - 1
            for x, y in ((a, b), (a, u), (b, u)):
                rows[x] &= ~(1 << y)
                rows[y] &= ~(1 << x)
            go()
            for x, y in ((a, b), (a, u), (b, u)):
                rows[x] |= 1 << y
                rows[y] |= 1 << x

    go()
    return count


# --- matching decompositions by direct enumeration ---


def _matchings_on(g: DenseGraph, verts):
    """Perfect matchings on the given vertices as frozensets of edges."""
    out = []

    def rec(remaining, acc):
        if not remaining:
            out.append(frozenset(acc))
            return
        u = min(remaining)
        for v in sorted(remaining - {u}):
            if g.has_edge(u, v):
                rec(remaining - {u, v}, acc + [(u, v)])

    if len(verts) % 2:
        return out
    rec(frozenset(verts), [])
    return out


def naive_matching_decompositions(g: DenseGraph, multiset) -> int:
    """Count decompositions by enumerating every combination directly.

    Same external semantics as the production counter: one matching per
    position, saturating the complement of that position's value; equal
    values draw unordered distinct matchings; values covering all of g
    are inert.
    """
    groups: dict[frozenset, int] = {}
    for value in multiset:
        groups[value] = groups.get(value, 0) + 1
    items = sorted(
        ((v, m) for v, m in groups.items() if len(v) != g.n),
        key=lambda kv: (len(kv[0]), sorted(kv[0])),
    )
    per = []
    for value, mult in items:
        verts = [u for u in range(g.n) if u not in value]
        per.append((mult, _matchings_on(g, verts)))
    all_edges = frozenset(g.edges)
    count = 0

    def rec(i, used):
        nonlocal count
        if i == len(per):
            if used == all_edges:
                count += 1
            return
        mult, matchings = per[i]
        for combo in itertools.combinations(matchings, mult):
            acc = set()
            total = 0
            for m in combo:
                acc |= m
                total += len(m)
            if len(acc) == total and not acc & used:
                rec(i + 1, used | acc)

    rec(0, frozenset())
    return count


def random_decomposable(rng: random.Random, n, mults, max_tries=200):
    """A graph built as a union of disjoint random matchings, plus values.

    mults lists the multiplicity of each distinct value. Returns (graph,
    multiset) where the multiset admits at least one decomposition by
    construction, or None when the random construction keeps colliding.
    """
    for _ in range(max_tries):
        values = set()
        while len(values) < len(mults):
            size = rng.choice([k for k in range(n - 1) if (n - k) % 2 == 0])
            values.add(frozenset(rng.sample(range(n), size)))
        used = set()
        ok = True
        picked = sorted(values, key=lambda v: (len(v), sorted(v)))
        for value, mult in zip(picked, mults):
            for _ in range(mult):
                verts = [u for u in range(n) if u not in value]
                match = None
                for _ in range(40):
                    order = verts[:]
                    rng.shuffle(order)
                    cand = {
                        (min(a, b), max(a, b))
                        for a, b in zip(order[::2], order[1::2])
                    }
                    if not cand & used:
                        match = cand
                        break
                if match is None:
                    ok = False
                    break
                used |= match
            if not ok:
                break
        if not ok:
            continue
        multiset = []
        for value, mult in zip(picked, mults):
            multiset.extend([value] * mult)
        return DenseGraph.from_edges(n, sorted(used)), tuple(multiset)
    return None
