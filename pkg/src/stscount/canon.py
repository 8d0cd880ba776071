"""Canonical labeling and automorphism groups via individualization-refinement.

Works on adjacency bitmask rows directly (any vertex count that fits in
Python ints, in particular above the DenseGraph cap; block-point incidence
graphs of order-15 systems need 50 vertices). An optional initial ordered
partition supports vertex-colored graphs: automorphisms and the canonical
labeling respect cell membership and cell order.

The search refines an ordered partition to equitability, individualizes one
vertex of the first smallest non-singleton cell, and recurses. Each path
records an isomorphism-invariant trace of its split events; the canonical
leaf maximizes (trace, certificate). Subtrees are pruned when their trace
already compares below the best leaf and has left the first leaf's trace
(paths matching the first trace are kept alive to harvest automorphisms).
Discovered automorphisms prune sibling branches through orbit merging and
feed a stabilizer chain that yields the exact group order.

Certificates are comparable only between graphs with the same vertex count
and the same initial partition shape.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import bits


def identity_perm(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def compose(a, b) -> tuple[int, ...]:
    """The permutation applying b first, then a."""
    return tuple(a[x] for x in b)


def invert(p) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def is_automorphism(n: int, rows, perm) -> bool:
    for u in range(n):
        image = 0
        for x in bits(rows[u]):
            image |= 1 << perm[x]
        if image != rows[perm[u]]:
            return False
    return True


def orbit_roots(n: int, gens) -> list[int]:
    """Vertex orbit representatives under the given permutations.

    Returns one root per vertex; roots are the minimum of each orbit.
    """
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i in range(n):
            a, b = find(i), find(g[i])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(i) for i in range(n)]


class PermGroup:
    """Permutation group from generators, with a stabilizer chain.

    The chain is completed lazily (deterministic Schreier-Sims), so adding
    generators is cheap and order() pays the verification cost once.
    """

    def __init__(self, n: int, gens=()):
        self.n = n
        self.e = tuple(range(n))
        self.base: list[int] = []
        self._level_gens: list[list[tuple[int, ...]]] = []
        self._orbits: list[dict[int, tuple[int, ...]] | None] = []
        self._verified = False
        for g in gens:
            self.add(g)

    def _gens_at(self, i: int) -> list[tuple[int, ...]]:
        # generators fixing base[:i] pointwise: those filed at levels >= i
        return [g for lvl in range(i, len(self.base)) for g in self._level_gens[lvl]]

    def _orbit(self, i: int) -> dict[int, tuple[int, ...]]:
        if self._orbits[i] is None:
            b = self.base[i]
            orb = {b: self.e}
            queue = [b]
            gens = self._gens_at(i)
            while queue:
                x = queue.pop()
                t = orb[x]
                for g in gens:
                    y = g[x]
                    if y not in orb:
                        orb[y] = compose(g, t)
                        queue.append(y)
            self._orbits[i] = orb
        return self._orbits[i]

    def _strip(self, g, start: int = 0):
        for i in range(start, len(self.base)):
            t = self._orbit(i).get(g[self.base[i]])
            if t is None:
                return g, i
            g = compose(invert(t), g)
        return g, len(self.base)

    def _add_strong(self, res, lvl: int):
        if lvl == len(self.base):
            self.base.append(min(k for k in range(self.n) if res[k] != k))
            self._level_gens.append([])
            self._orbits.append(None)
        self._level_gens[lvl].append(res)
        for i in range(lvl + 1):
            self._orbits[i] = None
        self._verified = False

    def add(self, g):
        g = tuple(g)
        if len(g) != self.n or sorted(g) != list(range(self.n)):
            raise ValueError("not a permutation of 0..n-1")
        res, lvl = self._strip(g)
        if res != self.e:
            self._add_strong(res, lvl)

    def _ensure_verified(self):
        # Schreier condition at every level; restart from the deepest level
        # whenever a new strong generator appears. Each addition strictly
        # grows the chain order, so this terminates.
        if self._verified:
            return
        i = len(self.base) - 1
        while i >= 0:
            grown = False
            orb = self._orbit(i)
            gens = self._gens_at(i)
            for x in list(orb):
                tx = orb[x]
                for g in gens:
                    s = compose(invert(orb[g[x]]), compose(g, tx))
                    if s == self.e:
                        continue
                    res, lvl = self._strip(s, i + 1)
                    if res != self.e:
                        self._add_strong(res, lvl)
                        grown = True
                        break
                if grown:
                    break
            i = len(self.base) - 1 if grown else i - 1
        self._verified = True

    def order(self) -> int:
        self._ensure_verified()
        out = 1
        for i in range(len(self.base)):
            out *= len(self._orbit(i))
        return out

    def contains(self, g) -> bool:
        self._ensure_verified()
        res, _ = self._strip(tuple(g))
        return res == self.e


@dataclass(frozen=True)
class CanonResult:
    """Outcome of a canonical labeling search.

    labeling[u] is the canonical position of vertex u. The certificate packs
    the relabeled upper-triangle adjacency bits; equal certificates mean
    isomorphic (same-shape) inputs. generators span the full automorphism
    group and group_order is its exact order.
    """

    n: int
    labeling: tuple[int, ...]
    certificate: int
    generators: tuple[tuple[int, ...], ...]
    group_order: int

    def canonical_rows(self, rows) -> tuple[int, ...]:
        inv = invert(self.labeling)
        out = [0] * self.n
        for i in range(self.n):
            acc = 0
            for x in bits(rows[inv[i]]):
                acc |= 1 << self.labeling[x]
            out[i] = acc
        return tuple(out)


def _pack_certificate(n, rows, labeling):
    inv = invert(labeling)
    cert = 0
    k = 0
    for i in range(n):
        ri = rows[inv[i]]
        for j in range(i + 1, n):
            if ri >> inv[j] & 1:
                cert |= 1 << k
            k += 1
    return cert


def _refine(rows, part, alpha, trace):
    """Refine part to equitability in place, logging split tokens."""
    while alpha:
        splitter = alpha.pop()
        ci = 0
        while ci < len(part):
            cell = part[ci]
            if cell & (cell - 1):
                by_count: dict[int, int] = {}
                for u in bits(cell):
                    key = (rows[u] & splitter).bit_count()
                    by_count[key] = by_count.get(key, 0) | 1 << u
                if len(by_count) > 1:
                    token = [1, ci]
                    frags = []
                    for key in sorted(by_count):
                        mask = by_count[key]
                        frags.append(mask)
                        token.append(key)
                        token.append(mask.bit_count())
                    part[ci : ci + 1] = frags
                    alpha.extend(frags)
                    trace.append(tuple(token))
                    ci += len(frags)
                    continue
            ci += 1
    trace.append((0, len(part)))


def canonical_labeling(n: int, rows, cells=None) -> CanonResult:
    """Canonical labeling, certificate, and automorphism group.

    rows are adjacency bitmasks (rows[u] bit x set iff edge u~x). cells, if
    given, is an ordered partition of 0..n-1; the search then only considers
    labelings and automorphisms preserving each cell.
    """
    rows = tuple(rows)
    if n == 0:
        return CanonResult(0, (), 0, (), 1)

    full = (1 << n) - 1
    if cells is None:
        part0 = [full]
    else:
        part0 = []
        seen = 0
        for cell in cells:
            mask = 0
            for u in cell:
                if not 0 <= u < n or seen >> u & 1:
                    raise ValueError("cells must partition 0..n-1")
                mask |= 1 << u
                seen |= 1 << u
            if mask:
                part0.append(mask)
        if seen != full:
            raise ValueError("cells must cover all vertices")

    trace: list[tuple[int, ...]] = []
    part = list(part0)
    _refine(rows, part, list(part), trace)

    first: tuple | None = None  # (trace tuple, labeling, certificate)
    best: tuple | None = None
    gens: list[tuple[int, ...]] = []
    gen_set: set[tuple[int, ...]] = set()
    ident = identity_perm(n)

    def harvest(lab, cert):
        for ref in (first, best):
            if ref is not None and cert == ref[2]:
                inv_ref = invert(ref[1])
                perm = tuple(inv_ref[lab[u]] for u in range(n))
                if perm != ident and perm not in gen_set:
                    gen_set.add(perm)
                    gens.append(perm)

    def handle_leaf(leaf_part):
        nonlocal first, best
        lab = [0] * n
        for pos, cell in enumerate(leaf_part):
            lab[cell.bit_length() - 1] = pos
        lab = tuple(lab)
        cert = _pack_certificate(n, rows, lab)
        tt = tuple(trace)
        if first is None:
            first = (tt, lab, cert)
            best = first
            return
        harvest(lab, cert)
        if (tt, cert) > (best[0], best[2]):
            best = (tt, lab, cert)

    def search(cur_part, prefix):
        target, tsize = -1, n + 1
        for i, cell in enumerate(cur_part):
            c = cell.bit_count()
            if 1 < c < tsize:
                target, tsize = i, c
        if target < 0:
            handle_leaf(cur_part)
            return
        if first is not None:
            # prune unless this path still matches the first trace (needed
            # for automorphism harvest) or can still reach a new best
            ft, bt = first[0], best[0]
            eq_first = len(trace) <= len(ft) and all(
                trace[k] == ft[k] for k in range(len(trace))
            )
            cmp_best = 0
            for k in range(min(len(trace), len(bt))):
                if trace[k] != bt[k]:
                    cmp_best = 1 if trace[k] > bt[k] else -1
                    break
            if not eq_first and cmp_best < 0:
                return
        cell = cur_part[target]
        tried: list[int] = []
        for v in bits(cell):
            if tried:
                usable = [g for g in gens if all(g[p] == p for p in prefix)]
                if usable:
                    roots = orbit_roots(n, usable)
                    if any(roots[v] == roots[u] for u in tried):
                        tried.append(v)
                        continue
            mark = len(trace)
            trace.append((2, target))
            child = (
                cur_part[:target]
                + [1 << v, cell ^ (1 << v)]
                + cur_part[target + 1 :]
            )
            _refine(rows, child, [1 << v], trace)
            prefix.append(v)
            search(child, prefix)
            prefix.pop()
            del trace[mark:]
            tried.append(v)

    search(part, [])

    order = PermGroup(n, gens).order()
    return CanonResult(
        n=n,
        labeling=best[1],
        certificate=best[2],
        generators=tuple(gens),
        group_order=order,
    )


def canonical_graph(graph, cells=None):
    """Canonical copy of a DenseGraph plus the full CanonResult."""
    result = canonical_labeling(graph.n, graph.rows, cells)
    return graph.relabel(result.labeling), result
