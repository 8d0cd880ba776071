"""Triangle and matching decomposition counts against naive enumeration."""

import itertools
import random

import pytest

import oracles
from stscount import decomp
from stscount.graph_gen import GenSpec, enumerate_w_multisets, generate_all
from stscount.model import BUILTIN_PATTERNS, DegreeSequence, DenseGraph


def random_graph(rng, n, p):
    edges = [
        (i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < p
    ]
    return DenseGraph.from_edges(n, edges)


class TestTriangleCount:
    def test_complement_of_k3(self):
        g = DenseGraph.complete(3).complement()
        assert decomp.count_triangle_decompositions(g) == 1

    def test_complement_of_k5_is_zero(self):
        g = DenseGraph.complete(5).complement()
        # 10 edges, not divisible by 3
        assert decomp.count_triangle_decompositions(g) == 0

    def test_empty_graph_on_7(self):
        assert decomp.count_triangle_decompositions(DenseGraph.empty(7)) == 30

    def test_nothing_to_cover(self):
        assert decomp.count_triangle_decompositions(DenseGraph.complete(5)) == 1

    def test_matches_backtracking_oracle(self):
        rng = random.Random(3)
        checked = 0
        while checked < 250:
            n = rng.randint(3, 9)
            g = random_graph(rng, n, rng.choice([0.3, 0.5, 0.7]))
            if g.complement().m > 18:
                continue
            want = oracles.naive_triangle_decompositions(g)
            assert decomp.count_triangle_decompositions(g) == want
            checked += 1


class TestCollections:
    def test_saturate_nothing_gives_empty_matching(self):
        g = DenseGraph.from_edges(2, [(0, 1)])
        cols = decomp.build_collections(g, (frozenset({0, 1}),))
        assert cols[0].matchings == (0,)

    def test_perfect_matching_graph_single_matching(self):
        g = DenseGraph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
        cols = decomp.build_collections(g, (frozenset(),))
        assert len(cols) == 1
        assert cols[0].multiplicity == 1
        assert len(cols[0].matchings) == 1

    def test_pendant_case_collection_shape(self):
        # one empty value and one pair value used four times
        spec = GenSpec.for_sequence(DegreeSequence.from_text("1^2 5^6"))
        pat = BUILTIN_PATTERNS["w5"]
        done = False
        for core in generate_all(spec):
            multisets = enumerate_w_multisets(core.graph, pat)
            if not multisets:
                continue
            (multiset,) = multisets
            cols = decomp.build_collections(core.graph, multiset)
            mults = sorted(c.multiplicity for c in cols)
            assert mults == [1, 4]
            done = True
        assert done

    def test_mixed_case_collection_shape(self):
        # values {}, {a,b} twice, {a,c} twice
        spec = GenSpec.for_sequence(DegreeSequence.from_text("1 3^2 5^5"))
        pat = BUILTIN_PATTERNS["w5"]
        done = False
        for core in generate_all(spec):
            for multiset in enumerate_w_multisets(core.graph, pat):
                cols = decomp.build_collections(core.graph, multiset)
                mults = sorted(c.multiplicity for c in cols)
                assert mults == [1, 2, 2]
                done = True
        assert done

    def test_skip_values_left_unenumerated(self):
        g = DenseGraph.from_edges(4, [(0, 1), (2, 3), (0, 2), (1, 3)])
        multiset = (frozenset(), frozenset())
        cols = decomp.build_collections(g, multiset, skip_values=[frozenset()])
        assert cols[0].matchings is None


class TestMatchingCount:
    def test_two_disjoint_singletons(self):
        # each value leaves one matching, the two partition the graph
        g = DenseGraph.from_edges(4, [(0, 1), (2, 3)])
        multiset = (frozenset({2, 3}), frozenset({0, 1}))
        assert decomp.count_matching_decompositions(g, multiset) == 1

    def test_cycle_with_paired_empty_values(self):
        # C4 has two perfect matchings; one unordered disjoint pair
        g = DenseGraph.from_edges(4, [(0, 1), (2, 3), (0, 2), (1, 3)])
        multiset = (frozenset(), frozenset())
        assert decomp.count_matching_decompositions(g, multiset) == 1

    def test_unknown_mode_rejected(self):
        g = DenseGraph.from_edges(2, [(0, 1)])
        with pytest.raises(ValueError, match="mode"):
            decomp.count_matching_decompositions(g, (frozenset(),), mode="zen")

    def test_size_mismatch_is_zero(self):
        g = DenseGraph.from_edges(4, [(0, 1), (1, 2)])
        assert decomp.count_matching_decompositions(g, (frozenset(),)) == 0

    def test_modes_agree_on_synthetic_instances(self):
        rng = random.Random(11)
        shapes = [(1, 1), (1, 2), (2, 2), (1, 1, 2), (1, 1, 1), (1, 2, 2), (3,)]
        built = 0
        while built < 120:
            n = rng.choice([4, 6, 8])
            made = oracles.random_decomposable(rng, n, rng.choice(shapes))
            if made is None:
                continue
            g, multiset = made
            full = decomp.count_matching_decompositions(g, multiset, mode="full")
            auto = decomp.count_matching_decompositions(g, multiset, mode="auto")
            cover = decomp.count_matching_decompositions(g, multiset, mode="cover")
            naive = oracles.naive_matching_decompositions(g, multiset)
            assert full == auto == cover == naive
            assert full >= 1
            built += 1

    def test_zero_instances_agree(self):
        rng = random.Random(13)
        zeros = 0
        while zeros < 40:
            n = rng.choice([4, 6])
            g = random_graph(rng, n, 0.5)
            sizes = [s for s in range(n) if (n - s) % 2 == 0]
            multiset = tuple(
                frozenset(rng.sample(range(n), rng.choice(sizes)))
                for _ in range(rng.randint(1, 3))
            )
            naive = oracles.naive_matching_decompositions(g, multiset)
            got = decomp.count_matching_decompositions(g, multiset)
            assert got == naive
            if naive == 0:
                zeros += 1

    def test_enumeration_matches_count_and_is_valid(self):
        rng = random.Random(17)
        shapes = [(1, 1), (1, 2), (1, 1, 2)]
        built = 0
        while built < 30:
            made = oracles.random_decomposable(rng, 6, rng.choice(shapes))
            if made is None:
                continue
            g, multiset = made
            want = decomp.count_matching_decompositions(g, multiset, mode="full")
            seen = 0
            for picks in decomp.enumerate_matching_decompositions(g, multiset):
                seen += 1
                union = 0
                for col_value, bitmaps in picks:
                    for q in bitmaps:
                        assert not union & q
                        union |= q
                assert union == (1 << g.m) - 1
            assert seen == want
            built += 1


class TestDeferredRules:
    def test_held_back_pairs_agree(self):
        # with two single-use values held back, their compatible counts
        # agree at every bottom of the remaining search
        rng = random.Random(19)
        built = 0
        while built < 60:
            made = oracles.random_decomposable(rng, 6, (1, 1, 2))
            if made is None:
                continue
            g, multiset = made
            singles = sorted(
                {v for v in multiset if multiset.count(v) == 1},
                key=lambda v: (len(v), sorted(v)),
            )
            if len(singles) != 2:
                continue
            pairs = decomp.compatible_counts(g, multiset, singles[0], singles[1])
            assert pairs
            for m_a, m_b in pairs:
                assert m_a == m_b
            built += 1

    def test_final_paired_collection_halves(self):
        # shapes ending in a multiplicity-2 collection exercise the /2 rule
        rng = random.Random(23)
        built = 0
        while built < 60:
            made = oracles.random_decomposable(rng, 6, (1, 2))
            if made is None:
                continue
            g, multiset = made
            auto = decomp.count_matching_decompositions(g, multiset, mode="auto")
            full = decomp.count_matching_decompositions(g, multiset, mode="full")
            assert auto == full
            built += 1


class TestDecompCounts:
    def test_pipeline_bundle(self):
        spec = GenSpec.for_sequence(DegreeSequence.from_text("3^4 5^4"))
        pat = BUILTIN_PATTERNS["w5"]
        cores = generate_all(spec)
        assert cores
        bundle = decomp.decomp_counts(cores[0].graph, pat)
        assert bundle.n_d == decomp.count_triangle_decompositions(cores[0].graph)
        assert len(bundle.per_multiset) == 3
        assert bundle.n_f_total == sum(mc.n_f for mc in bundle.per_multiset)
        for mc in bundle.per_multiset:
            want = decomp.count_matching_decompositions(
                cores[0].graph, mc.multiset, mode="full"
            )
            assert mc.n_f == want

    def test_modes_agree_end_to_end(self):
        spec = GenSpec.for_sequence(DegreeSequence.from_text("1 3^2 5^5"))
        pat = BUILTIN_PATTERNS["w5"]
        for core in generate_all(spec)[:10]:
            a = decomp.decomp_counts(core.graph, pat, mode="auto")
            b = decomp.decomp_counts(core.graph, pat, mode="full")
            c = decomp.decomp_counts(core.graph, pat, mode="cover")
            fa = [(mc.multiset, mc.n_f) for mc in a.per_multiset]
            fb = [(mc.multiset, mc.n_f) for mc in b.per_multiset]
            fc = [(mc.multiset, mc.n_f) for mc in c.per_multiset]
            assert fa == fb == fc
