"""Isomorphism classification of small triple systems.

The classifier fixes the star of blocks through point 0 and enumerates
completions of that star with the exact cover solver.  Sampling every
k-th completion keeps the canonical-form work bounded, and a closed
completeness certificate (each class X contributes v!/|Aut(X)| labeled
systems, spread evenly over the (v-2)!! possible stars) verifies that
no isomorphism class was missed.  Classes whose systems are too rare to
show up in a thinned sample all have large automorphism groups, so a
separate seeding pass enumerates the systems invariant under odd
prime-order point permutations and feeds them through the same
classifier.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from . import canon, fastcover
from .exact_cover import CoverInstance
from .model import TripleSystem, block_count

log = logging.getLogger(__name__)

MAX_ORDER = 15

DEFAULT_STRIDE = {3: 1, 7: 1, 9: 1, 13: 400, 15: 1500}

SAMPLE_CAP = 1 << 18


class ClassificationError(RuntimeError):
    """The completeness certificate failed after all retries."""


def star_blocks(v: int) -> tuple[tuple[int, int, int], ...]:
    """The fixed star: blocks {0, 2i-1, 2i} through point 0."""
    return tuple((0, 2 * i - 1, 2 * i) for i in range(1, (v - 1) // 2 + 1))


def star_count(v: int) -> int:
    """Number of possible stars through one point: (v-2)!! pairings."""
    out = 1
    for x in range(v - 2, 0, -2):
        out *= x
    return out


def residual_instance(v: int) -> tuple[CoverInstance, list[tuple[int, int, int]]]:
    """Exact cover instance whose solutions complete the fixed star.

    Elements are the pairs not covered by the star; candidates are the
    triangles on points 1..v-1 avoiding the star pairs.  Returns the
    instance and the triple list aligned with candidate indices.
    """
    matched = {(2 * i - 1, 2 * i) for i in range(1, (v - 1) // 2 + 1)}
    pairs = [p for p in itertools.combinations(range(1, v), 2) if p not in matched]
    index = {p: i for i, p in enumerate(pairs)}
    triples = []
    cands = []
    for t in itertools.combinations(range(1, v), 3):
        cover = list(itertools.combinations(t, 2))
        if any(p in matched for p in cover):
            continue
        triples.append(t)
        cands.append(tuple(index[p] for p in cover))
    return CoverInstance(len(pairs), tuple(cands)), triples


def _system_from_pick(v, triples, pick) -> TripleSystem:
    blocks = list(star_blocks(v))
    blocks.extend(triples[i] for i in pick)
    return TripleSystem(v, tuple(blocks))


def cycle_profile(sts: TripleSystem):
    """Isomorphism invariant from pair cycle structures.

    For a pair {x, y} with third point z, the blocks through x and
    through y each induce a perfect matching on the remaining points;
    their union is a disjoint set of even cycles.  The profile combines
    the multiset of cycle types over all pairs with the per-point
    distribution of the types of pairs through each point.
    """
    v = sts.v
    pair_block = sts.pair_to_block
    type_counts: dict[tuple, int] = {}
    per_point: list[dict[tuple, int]] = [{} for _ in range(v)]
    for x in range(v):
        for y in range(x + 1, v):
            blk = pair_block[(x, y)]
            z = blk[0] + blk[1] + blk[2] - x - y
            skip = (x, y, z)
            hop = {}
            for u in range(v):
                if u in skip:
                    continue
                bx = pair_block[(x, u) if x < u else (u, x)]
                mid = bx[0] + bx[1] + bx[2] - x - u
                by = pair_block[(y, mid) if y < mid else (mid, y)]
                hop[u] = by[0] + by[1] + by[2] - y - mid
            lens = []
            seen = set()
            for u in hop:
                if u in seen:
                    continue
                size = 0
                w = u
                while w not in seen:
                    seen.add(w)
                    w = hop[w]
                    size += 1
                lens.append(2 * size)
            ctype = tuple(sorted(lens))
            type_counts[ctype] = type_counts.get(ctype, 0) + 1
            for p in (x, y):
                per_point[p][ctype] = per_point[p].get(ctype, 0) + 1
    global_part = tuple(sorted(type_counts.items()))
    local_part = tuple(sorted(tuple(sorted(d.items())) for d in per_point))
    return (global_part, local_part)


def canonical_system(sts: TripleSystem) -> tuple[TripleSystem, int]:
    """Canonical relabeling and automorphism group order.

    Works through the colored block-point incidence graph, so orders
    beyond the dense-graph vertex limit are fine.  Isomorphic systems
    map to identical canonical block lists.
    """
    v = sts.v
    b = len(sts.blocks)
    n = v + b
    rows = [0] * n
    for bi, blk in enumerate(sts.blocks):
        for p in blk:
            rows[p] |= 1 << (v + bi)
            rows[v + bi] |= 1 << p
    cells = [list(range(v)), list(range(v, n))]
    result = canon.canonical_labeling(n, rows, cells)
    point_pos = [result.labeling[p] for p in range(v)]
    assert sorted(point_pos) == list(range(v)), "labeling mixed the color classes"
    relabeled = sts.relabel(point_pos)
    return relabeled, result.group_order


def prime_seed_perms(v: int) -> list[tuple[int, ...]]:
    """One point permutation per admissible odd prime-order cycle type.

    The fixed points of an odd prime-order automorphism form a proper
    subsystem, so the fixed count must be 0, 1, or an admissible order
    at most (v - 1) / 2.  Systems invariant under any conjugate
    permutation are isomorphic to systems invariant under these
    representatives.
    """
    perms = []
    for p in range(3, v + 1, 2):
        if any(p % q == 0 for q in range(3, p) if q * q <= p):
            continue
        for k in range(1, v // p + 1):
            f = v - k * p
            if f not in (0, 1) and (f % 6 not in (1, 3) or f > (v - 1) // 2):
                continue
            perm = list(range(v))
            for c in range(k):
                for j in range(p):
                    perm[c * p + j] = c * p + (j + 1) % p
            perms.append(tuple(perm))
    return perms


def _orbit(item: tuple[int, ...], perm: tuple[int, ...]) -> list[tuple[int, ...]]:
    out = []
    cur = item
    while True:
        out.append(cur)
        cur = tuple(sorted(perm[x] for x in cur))
        if cur == item:
            return out


def invariant_systems(v: int, perm: tuple[int, ...]) -> list[TripleSystem]:
    """All triple systems of order v fixed setwise by a point permutation.

    Collapses pairs and triples into orbits under the permutation and
    solves the exact cover problem over orbits.  A triple orbit is a
    valid candidate only when its blocks repeat no pair.
    """
    pair_orbit: dict[tuple[int, int], int] = {}
    n_orbits = 0
    for pair in itertools.combinations(range(v), 2):
        if pair in pair_orbit:
            continue
        for q in _orbit(pair, perm):
            pair_orbit[q] = n_orbits
        n_orbits += 1
    cands = []
    cand_blocks = []
    seen = set()
    for t in itertools.combinations(range(v), 3):
        if t in seen:
            continue
        orbit = _orbit(t, perm)
        seen.update(orbit)
        covered = [p for blk in orbit for p in itertools.combinations(blk, 2)]
        if len(set(covered)) != len(covered):
            continue
        cands.append(tuple(sorted({pair_orbit[p] for p in covered})))
        cand_blocks.append(orbit)
    inst = CoverInstance(n_orbits, tuple(cands))
    out = []

    def visit(pick):
        blocks = [blk for i in pick for blk in cand_blocks[i]]
        out.append(TripleSystem(v, tuple(blocks)))
        return True

    from .exact_cover import enumerate_covers

    enumerate_covers(inst, visit)
    return out


@dataclass(frozen=True)
class SystemClass:
    """One isomorphism class: canonical representative and group order."""

    rep: TripleSystem
    aut_order: int


@dataclass(frozen=True)
class ClassifiedCatalogue:
    """Complete set of isomorphism classes of order v."""

    v: int
    stride: int
    total_completions: int
    classes: tuple[SystemClass, ...]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def spectrum(self) -> dict[int, int]:
        """Map from automorphism group order to number of classes."""
        out: dict[int, int] = {}
        for cls in self.classes:
            out[cls.aut_order] = out.get(cls.aut_order, 0) + 1
        return dict(sorted(out.items()))

    @property
    def labeled_total(self) -> int:
        total = Fraction(0)
        for cls in self.classes:
            total += Fraction(math.factorial(self.v), cls.aut_order)
        assert total.denominator == 1
        return total.numerator

    def save(self, path) -> None:
        payload = {
            "v": self.v,
            "stride": self.stride,
            "total_completions": self.total_completions,
            "classes": [
                {"aut_order": c.aut_order, "blocks": [list(b) for b in c.rep.blocks]}
                for c in self.classes
            ],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ClassifiedCatalogue":
        with open(path) as fh:
            payload = json.load(fh)
        classes = tuple(
            SystemClass(
                TripleSystem(payload["v"], tuple(tuple(b) for b in c["blocks"])),
                c["aut_order"],
            )
            for c in payload["classes"]
        )
        return cls(
            payload["v"], payload["stride"], payload["total_completions"], classes
        )


class _Collector:
    """Buckets systems by invariant, canonicalizing once per new class."""

    def __init__(self):
        self.classes: list[SystemClass] = []
        self.by_blocks: dict[tuple, int] = {}
        self.buckets: dict[tuple, list[int]] = {}

    def add(self, sts: TripleSystem) -> int:
        inv = cycle_profile(sts)
        bucket = self.buckets.get(inv)
        if bucket is not None and len(bucket) == 1:
            return bucket[0]
        if bucket is None:
            bucket = self.buckets.setdefault(inv, [])
        rep, aut = canonical_system(sts)
        idx = self.by_blocks.get(rep.blocks)
        if idx is None:
            idx = len(self.classes)
            self.classes.append(SystemClass(rep, aut))
            self.by_blocks[rep.blocks] = idx
            bucket.append(idx)
        return idx


def classify_all(v: int, stride: int | None = None, retries: int = 2) -> ClassifiedCatalogue:
    """Classify every triple system of order v up to isomorphism.

    Raises ClassificationError if the completeness certificate still
    fails after retrying with smaller sampling strides.
    """
    if v % 6 not in (1, 3):
        raise ValueError(f"no triple system of order {v}")
    if v > MAX_ORDER:
        raise ValueError(f"order {v} exceeds the classification limit {MAX_ORDER}")
    if stride is None:
        stride = DEFAULT_STRIDE.get(v, 1)
    inst, triples = residual_instance(v)
    seeds = []
    for perm in prime_seed_perms(v):
        found = invariant_systems(v, perm)
        log.info("seed search %s: %d invariant systems", _cycle_type(perm), len(found))
        seeds.extend(found)
    last = None
    cap = SAMPLE_CAP
    for attempt in range(retries + 1):
        collector = _Collector()
        for sts in seeds:
            collector.add(sts)
        total, eff_stride, picks = fastcover.sample_covers_adaptive(inst, stride, cap)
        for pick in picks:
            collector.add(_system_from_pick(v, triples, pick))
        classes = tuple(
            sorted(collector.classes, key=lambda c: (-c.aut_order, c.rep.blocks))
        )
        need = Fraction(total)
        have = sum(
            Fraction(math.factorial(v), c.aut_order * star_count(v)) for c in classes
        )
        if have == need:
            return ClassifiedCatalogue(v, eff_stride, total, classes)
        last = (have, need, len(classes))
        log.warning(
            "certificate mismatch at stride %d: %s classes give %s of %s completions",
            eff_stride,
            len(classes),
            have,
            need,
        )
        stride = max(1, stride // 4)
        cap *= 4
    raise ClassificationError(
        f"incomplete classification of order {v}: "
        f"{last[2]} classes account for {last[0]} of {last[1]} completions"
    )


def _cycle_type(perm: tuple[int, ...]) -> str:
    seen = set()
    sizes = []
    for x in range(len(perm)):
        if x in seen:
            continue
        size = 0
        cur = x
        while cur not in seen:
            seen.add(cur)
            cur = perm[cur]
            size += 1
        sizes.append(size)
    sizes.sort(reverse=True)
    return " ".join(f"{s}^{c}" for s, c in sorted(
        ((s, sizes.count(s)) for s in set(sizes)), reverse=True
    ))


def labeled_count_direct(v: int) -> int:
    """Labeled system count by raw exact cover, with no classification.

    Independent of the classifier: counts solutions directly for v at
    most 9, and star completions times the star count for v = 13.
    """
    if v % 6 not in (1, 3):
        raise ValueError(f"no triple system of order {v}")
    if v <= 9:
        pairs = list(itertools.combinations(range(v), 2))
        index = {p: i for i, p in enumerate(pairs)}
        cands = tuple(
            tuple(index[p] for p in itertools.combinations(t, 2))
            for t in itertools.combinations(range(v), 3)
        )
        return fastcover.count_covers_fast(CoverInstance(len(pairs), cands))
    if v == 13:
        inst, _ = residual_instance(v)
        return fastcover.count_covers_fast(inst) * star_count(v)
    raise ValueError(f"direct labeled count supported only up to 13, got {v}")
