"""Classification by fixed-star completion: invariants, canon, catalogues."""

import itertools
import math
import random

import pytest

from conftest import long_gate
from stscount import census, classify, exact_cover
from stscount.model import BUILTIN_PATTERNS, TripleSystem

FANO = census.cyclic_system(7)

# frozen order-15 results, reproduced by the long suite and consumed by
# the fast resolve cross-checks below
V15_LABELED = 60281712691200
V15_COMPLETIONS = 446085120
V15_SPECTRUM = {
    1: 36, 2: 6, 3: 12, 4: 8, 5: 1, 6: 1, 8: 2, 12: 3, 21: 1, 24: 2,
    32: 1, 36: 1, 60: 1, 96: 1, 168: 1, 192: 1, 288: 1, 20160: 1,
}


def brute_fixed_systems(systems, perm):
    """How many of the given systems a point permutation fixes setwise."""
    hits = 0
    for sts in systems:
        mapped = {tuple(sorted(perm[x] for x in b)) for b in sts.blocks}
        if mapped == set(sts.blocks):
            hits += 1
    return hits


def all_labeled_systems(v):
    pairs = list(itertools.combinations(range(v), 2))
    index = {p: i for i, p in enumerate(pairs)}
    triples = list(itertools.combinations(range(v), 3))
    cands = tuple(
        tuple(index[p] for p in itertools.combinations(t, 2)) for t in triples
    )
    inst = exact_cover.CoverInstance(len(pairs), cands)
    out = []
    exact_cover.enumerate_covers(
        inst, lambda pick: out.append(
            TripleSystem(v, tuple(triples[i] for i in pick))
        )
    )
    return out


def perfect_matchings(points):
    if not points:
        return 1
    first, rest = points[0], points[1:]
    total = 0
    for i, other in enumerate(rest):
        total += perfect_matchings(rest[:i] + rest[i + 1:])
    return total


class TestStar:
    def test_star_blocks_cover_point_zero(self):
        blocks = classify.star_blocks(13)
        assert len(blocks) == 6
        used = sorted(p for b in blocks for p in b if p)
        assert used == list(range(1, 13))

    def test_star_count_is_matching_count(self):
        for v in (3, 5, 7, 9, 11, 13):
            assert classify.star_count(v) == perfect_matchings(tuple(range(v - 1)))
        assert classify.star_count(13) == 10395
        assert classify.star_count(15) == 135135

    def test_residual_shape(self):
        inst, triples = classify.residual_instance(9)
        # 28 pairs on points 1..8 minus the 4 star pairs
        assert inst.n_elements == 24
        assert len(triples) == len(inst.candidates)
        assert all(len(c) == 3 for c in inst.candidates)

    def test_residual_solutions_times_stars(self):
        for v, labeled in ((7, 30), (9, 840)):
            inst, _ = classify.residual_instance(v)
            completions = exact_cover.count_covers(inst)
            assert completions * classify.star_count(v) == labeled

    def test_residual_completion_is_valid_system(self):
        inst, triples = classify.residual_instance(9)
        done = []
        exact_cover.enumerate_covers(
            inst, lambda pick: (done.append(pick), False)[1]
        )
        sts = classify._system_from_pick(9, triples, done[0])
        assert sts.v == 9 and len(sts.blocks) == 12


class TestCycleProfile:
    def test_relabel_invariance(self):
        rng = random.Random(11)
        cat = classify.classify_all(13)
        for cls in cat.classes:
            base = classify.cycle_profile(cls.rep)
            for _ in range(3):
                perm = list(range(13))
                rng.shuffle(perm)
                assert classify.cycle_profile(cls.rep.relabel(perm)) == base

    def test_separates_order_13_classes(self):
        cat = classify.classify_all(13)
        profiles = {classify.cycle_profile(c.rep) for c in cat.classes}
        assert len(profiles) == 2

    def test_cycle_lengths_are_even_and_cover(self):
        global_part, local_part = classify.cycle_profile(FANO)
        for ctype, count in global_part:
            # each hop is a two-block step, so lengths add to 2(v - 3)
            assert sum(ctype) == 8
            assert all(length % 2 == 0 for length in ctype)
        assert sum(n for _, n in global_part) == 21
        assert len(local_part) == 7


class TestCanonicalSystem:
    def test_fano_group_order(self):
        rep, aut = classify.canonical_system(FANO)
        assert aut == 168

    def test_order_9_group_order(self):
        sts = all_labeled_systems(9)[0]
        rep, aut = classify.canonical_system(sts)
        assert aut == 432

    def test_idempotent(self):
        rep, aut = classify.canonical_system(FANO)
        again, aut2 = classify.canonical_system(rep)
        assert again.blocks == rep.blocks
        assert aut2 == aut

    def test_isomorphic_systems_collide(self):
        rng = random.Random(5)
        cat = classify.classify_all(13)
        for cls in cat.classes:
            base, _ = classify.canonical_system(cls.rep)
            perm = list(range(13))
            rng.shuffle(perm)
            moved, aut = classify.canonical_system(cls.rep.relabel(perm))
            assert moved.blocks == base.blocks
            assert aut == cls.aut_order

    def test_distinct_classes_do_not_collide(self):
        cat = classify.classify_all(13)
        a, _ = classify.canonical_system(cat.classes[0].rep)
        b, _ = classify.canonical_system(cat.classes[1].rep)
        assert a.blocks != b.blocks


class TestSeeds:
    def test_prime_seed_cycle_types_13(self):
        types = [classify._cycle_type(p) for p in classify.prime_seed_perms(13)]
        assert types == ["3^4 1^1", "5^2 1^3", "13^1"]

    def test_invariant_systems_against_brute_force(self):
        for v in (7, 9):
            systems = all_labeled_systems(v)
            for perm in classify.prime_seed_perms(v):
                got = classify.invariant_systems(v, perm)
                assert len(got) == brute_fixed_systems(systems, perm)
                for sts in got:
                    assert brute_fixed_systems([sts], perm) == 1

    def test_invariant_system_counts_13(self):
        counts = {
            classify._cycle_type(perm): len(classify.invariant_systems(13, perm))
            for perm in classify.prime_seed_perms(13)
        }
        assert counts == {"3^4 1^1": 1944, "5^2 1^3": 0, "13^1": 4}


class TestClassifyAll:
    def test_tiny_orders(self):
        for v, spectrum, labeled in (
            (3, {6: 1}, 1),
            (7, {168: 1}, 30),
            (9, {432: 1}, 840),
        ):
            cat = classify.classify_all(v)
            assert cat.class_count == len(spectrum)
            assert cat.spectrum == spectrum
            assert cat.labeled_total == labeled

    def test_order_13(self):
        cat = classify.classify_all(13)
        assert cat.class_count == 2
        assert cat.spectrum == {6: 1, 39: 1}
        assert cat.labeled_total == 1197504000
        assert cat.total_completions == 115200
        assert cat.labeled_total == cat.total_completions * classify.star_count(13)

    def test_stride_override_same_catalogue(self):
        coarse = classify.classify_all(13, stride=800)
        fine = classify.classify_all(13)
        assert coarse.spectrum == fine.spectrum
        reps = lambda cat: sorted(c.rep.blocks for c in cat.classes)
        assert reps(coarse) == reps(fine)

    def test_inadmissible_orders_rejected(self):
        with pytest.raises(ValueError, match="no triple system"):
            classify.classify_all(11)
        with pytest.raises(ValueError, match="classification limit"):
            classify.classify_all(19)

    def test_incomplete_sampling_raises(self, monkeypatch):
        # with seeds disabled and an absurd stride only one completion is
        # inspected, so the certificate cannot balance
        monkeypatch.setattr(classify, "prime_seed_perms", lambda v: [])
        with pytest.raises(classify.ClassificationError, match="incomplete"):
            classify.classify_all(13, stride=10**9, retries=0)

    def test_pasch_configurations_separate_13(self):
        cat = classify.classify_all(13)
        w6 = BUILTIN_PATTERNS["w6_quadrilateral"]
        assert sorted(census.pattern_count_in(c.rep, w6) for c in cat.classes) == [8, 13]


class TestCatalogueStore:
    def test_save_load_roundtrip(self, tmp_path):
        cat = classify.classify_all(13)
        path = tmp_path / "cat13.json"
        cat.save(path)
        back = classify.ClassifiedCatalogue.load(path)
        assert back.v == cat.v
        assert back.stride == cat.stride
        assert back.total_completions == cat.total_completions
        assert [c.aut_order for c in back.classes] == [c.aut_order for c in cat.classes]
        assert [c.rep.blocks for c in back.classes] == [c.rep.blocks for c in cat.classes]


class TestDirectCounts:
    def test_small_orders(self):
        assert classify.labeled_count_direct(3) == 1
        assert classify.labeled_count_direct(7) == 30
        assert classify.labeled_count_direct(9) == 840

    def test_order_13_via_star(self):
        assert classify.labeled_count_direct(13) == 115200 * 10395

    def test_unsupported_orders(self):
        with pytest.raises(ValueError, match="no triple system"):
            classify.labeled_count_direct(11)
        with pytest.raises(ValueError, match="only up to 13"):
            classify.labeled_count_direct(15)


class TestOrder15Constants:
    def test_spectrum_is_consistent(self):
        # the frozen order-15 numbers must satisfy the counting identities
        # even in the fast suite
        assert sum(V15_SPECTRUM.values()) == 80
        total = sum(
            math.factorial(15) * n // order for order, n in V15_SPECTRUM.items()
        )
        assert total == V15_LABELED
        assert V15_LABELED == V15_COMPLETIONS * classify.star_count(15)

    def test_resolve_recovers_rigid_classes(self):
        nontrivial = {o: n for o, n in V15_SPECTRUM.items() if o > 1}
        got = census.resolve_trivial_classes(15, V15_LABELED, nontrivial)
        assert got.as_dict() == V15_SPECTRUM
        assert got.total_classes == 80


@long_gate
class TestOrder15Long:
    def test_full_classification(self, catalogue15):
        assert catalogue15.class_count == 80
        assert catalogue15.spectrum == V15_SPECTRUM
        assert catalogue15.labeled_total == V15_LABELED
        assert catalogue15.total_completions == V15_COMPLETIONS
