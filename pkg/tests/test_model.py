"""Core object model: triple systems, graphs, patterns, the block split."""

import itertools
import random

import pytest

from stscount import census
from stscount.model import (
    BUILTIN_PATTERNS,
    DefiningSet,
    DegreeSequence,
    DenseGraph,
    TripleSystem,
    admissible_orders,
    block_count,
    pattern_for,
    split_blocks,
    split_view,
)
from stscount.graph_gen import sample_random

FANO = TripleSystem(
    7, ((0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (0, 4, 5), (1, 5, 6), (0, 2, 6))
)


class TestTripleSystem:
    def test_fano_valid(self):
        assert FANO.v == 7
        assert len(FANO.blocks) == block_count(7)

    def test_pair_covered_twice_rejected(self):
        with pytest.raises(ValueError, match="covered twice"):
            TripleSystem(7, FANO.blocks[:6] + ((0, 1, 2),))

    def test_missing_pairs_rejected(self):
        with pytest.raises(ValueError, match="not all"):
            TripleSystem(7, FANO.blocks[:6])

    def test_block_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            TripleSystem(5, ((0, 1, 2), (0, 3, 5), (1, 3, 4), (2, 3, 6)))

    def test_block_through_every_pair(self):
        for p, q in itertools.combinations(range(7), 2):
            block = FANO.block_through(p, q)
            assert p in block and q in block

    def test_blocks_through_point(self):
        for p in range(7):
            assert len(FANO.blocks_through(p)) == 3

    def test_relabel_is_still_a_system(self):
        perm = (3, 1, 4, 0, 5, 2, 6)
        other = FANO.relabel(perm)
        assert other.v == 7
        assert len(other.blocks) == 7

    def test_admissible_orders(self):
        assert admissible_orders(21) == [1, 3, 7, 9, 13, 15, 19, 21]


class TestDegreeSequence:
    def test_text_roundtrip(self):
        for text in ("1^2 5^14", "3^4 5^12", "2 3 5^13", "5^14", "3"):
            assert DegreeSequence.from_text(text).text == text

    def test_multiplicity_one_renders_bare(self):
        seq = DegreeSequence.from_degrees([2, 3, 5, 5])
        assert seq.text == "2 3 5^2"

    def test_counts(self):
        seq = DegreeSequence.from_text("1^2 5^14")
        assert seq.n == 16
        assert seq.edge_count == 36
        assert seq.degrees() == (1, 1) + (5,) * 14

    def test_odd_total_has_no_edge_count(self):
        with pytest.raises(ValueError, match="odd degree total"):
            DegreeSequence.from_text("3^3").edge_count

    def test_erdos_gallai_accepts_main_sequence(self):
        # direct inequality evaluation for the lopsided pendant case
        degs = sorted((1, 1) + (5,) * 14, reverse=True)
        ok = True
        for k in range(1, 17):
            lhs = sum(degs[:k])
            rhs = k * (k - 1) + sum(min(d, k) for d in degs[k:])
            if lhs > rhs:
                ok = False
        assert ok
        assert DegreeSequence.from_text("1^2 5^14").is_graphical()

    def test_erdos_gallai_rejects(self):
        assert not DegreeSequence.from_text("3 1^2").is_graphical()
        assert not DegreeSequence.from_text("5^3").is_graphical()

    def test_sequences_sort_by_terms(self):
        a = DegreeSequence.from_text("1^2 5^14")
        b = DegreeSequence.from_text("3^4 5^12")
        assert a.terms < b.terms


class TestDenseGraph:
    def test_complement_of_empty_is_complete(self):
        g = DenseGraph.empty(4)
        assert g.complement().rows == DenseGraph.complete(4).rows

    def test_complement_involution(self):
        rng = random.Random(7)
        for _ in range(20):
            edges = [
                (i, j)
                for i, j in itertools.combinations(range(10), 2)
                if rng.random() < 0.4
            ]
            g = DenseGraph.from_edges(10, edges)
            assert g.complement().complement().rows == g.rows

    def test_complement_of_5_regular_14_vertex_is_8_regular(self):
        g = sample_random(DegreeSequence.from_text("5^14"), 2000, rng_seed=3)
        assert set(g.complement().degrees()) == {8}

    def test_asymmetric_rows_rejected(self):
        with pytest.raises(ValueError, match="not symmetric"):
            DenseGraph(3, (2, 0, 0))

    def test_loop_rejected(self):
        with pytest.raises(ValueError, match="loop"):
            DenseGraph(2, (1, 1))

    def test_edges_and_index(self):
        g = DenseGraph.from_edges(4, [(0, 1), (2, 3), (0, 3)])
        assert g.m == 3
        assert g.edges == ((0, 1), (0, 3), (2, 3))
        assert g.edge_index[(0, 3)] == 1

    def test_masked_and_components(self):
        g = DenseGraph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
        sub = g.masked(0b00111)
        assert sub.n == 5 and sub.m == 2
        assert sub.degree(3) == 0 and sub.degree(4) == 0
        assert sorted(g.connected_components()) == [0b00111, 0b11000]


class TestDefiningSet:
    def test_builtin_patterns(self):
        assert sorted(BUILTIN_PATTERNS) == ["w3", "w4", "w5", "w6_quadrilateral"]
        w5 = BUILTIN_PATTERNS["w5"]
        assert w5.w == 5
        assert w5.blocks == ((0, 1, 2), (0, 3, 4))

    def test_from_text_roundtrip(self):
        pat = DefiningSet.from_text(5, "012,034")
        assert pat.text == "012,034"
        assert pat == BUILTIN_PATTERNS["w5"]

    def test_pair_covered_twice_rejected(self):
        with pytest.raises(ValueError, match="covered twice"):
            DefiningSet.from_text(5, "012,013")

    def test_uncovered_pairs_w5(self):
        pat = BUILTIN_PATTERNS["w5"]
        assert pat.uncovered_pairs == ((1, 3), (1, 4), (2, 3), (2, 4))

    def test_stabilizer_orders(self):
        # brute force over position permutations is the definition here;
        # frozen values double-checked by hand
        assert BUILTIN_PATTERNS["w3"].stabilizer_order == 6
        assert BUILTIN_PATTERNS["w4"].stabilizer_order == 6
        assert BUILTIN_PATTERNS["w5"].stabilizer_order == 8
        assert BUILTIN_PATTERNS["w6_quadrilateral"].stabilizer_order == 24

    def test_degree_sequences_w5(self):
        pat = BUILTIN_PATTERNS["w5"]
        texts = [seq.text for seq in pat.degree_sequences(21)]
        assert texts == ["1 3^2 5^13", "1^2 5^14", "3^4 5^12"]

    def test_degree_sequences_small_order(self):
        pat = BUILTIN_PATTERNS["w5"]
        texts = [seq.text for seq in pat.degree_sequences(7)]
        assert texts == ["1^2"]

    def test_quotas_match_deficits(self):
        pat = BUILTIN_PATTERNS["w5"]
        seq = DegreeSequence.from_text("3^4 5^12")
        assert pat.quotas_for(seq) == {0: 1, 1: 1, 2: 1, 3: 1}
        with pytest.raises(ValueError, match="inadmissible"):
            pat.quotas_for(DegreeSequence.from_text("2^2 5^14"))

    def test_value_multisets_counts(self):
        # the three pairings for the 4-deficient-vertex case, one for the
        # pendant case, two shapes for the mixed case
        pat = BUILTIN_PATTERNS["w5"]
        ms_3454 = pat.value_multisets({0: 1, 1: 1, 2: 1, 3: 1})
        assert len(ms_3454) == 3
        ms_pendant = pat.value_multisets({0: 2, 1: 2})
        assert len(ms_pendant) == 1
        sizes = sorted(len(v) for v in ms_pendant[0])
        assert sizes == [0, 2, 2, 2, 2]

    def test_assignment_counts_uniform(self):
        pat = BUILTIN_PATTERNS["w5"]
        counts = pat.assignment_counts({0: 1, 1: 1, 2: 1, 3: 1})
        assert len(counts) == 3
        assert set(counts.values()) == {8}


class TestSplit:
    def test_empty_subset(self):
        heavy, crossing, inner = split_blocks(FANO, ())
        assert heavy == () and crossing == ()
        assert inner == FANO.blocks

    def test_full_subset(self):
        heavy, crossing, inner = split_blocks(FANO, range(7))
        assert heavy == FANO.blocks
        assert crossing == () and inner == ()

    def test_block_subset_induces_itself(self):
        block = FANO.blocks[0]
        view = split_view(FANO, block)
        assert view.pattern == ((0, 1, 2),)
        view.validate()

    def test_pair_subset_induces_one_pair(self):
        view = split_view(FANO, (0, 1))
        assert view.pattern == ((0, 1),)
        view.validate()

    def test_fano_5_subsets_with_two_meeting_blocks(self):
        # every 5-subset inducing two triples gives the {012,034} pattern
        pat = BUILTIN_PATTERNS["w5"]
        found = 0
        for subset in itertools.combinations(range(7), 5):
            heavy, _, _ = split_blocks(FANO, subset)
            triples = [b for b in heavy if len(set(b) & set(subset)) == 3]
            if len(triples) == 2:
                view = split_view(FANO, subset)
                inside = tuple(b for b in view.pattern if len(b) == 3)
                if inside:
                    stab = DefiningSet(5, inside)
                    assert stab.blocks == pat.blocks or _relabels_to(
                        stab, pat
                    )
                    found += 1
        assert found > 0

    def test_sts13_split_structure(self):
        sts = census.cyclic_system(13)
        pat = BUILTIN_PATTERNS["w5"]
        heavy_sizes = set()
        inner_sizes = set()
        for subset in itertools.combinations(range(13), 5):
            heavy, crossing, inner = split_blocks(sts, subset)
            view = split_view(sts, subset)
            triples = tuple(b for b in view.pattern if len(b) == 3)
            if len(triples) != 2 or not _relabels_to(DefiningSet(5, triples), pat):
                continue
            view.validate()
            heavy_sizes.add(len(heavy))
            inner_sizes.add(len(inner))
            # degree identity, stated directly
            for u in range(view.graph.n):
                hits = sum(1 for ws in view.wsets if u in ws)
                assert view.graph.degree(u) == 5 - hits
        # blocks meeting W in >= 2 points: the 2 pattern triples plus one
        # completion block per uncovered pair; the inner count follows as
        # 26 - 6 heavy - 16 crossing
        assert heavy_sizes == {6}
        assert inner_sizes == {4}

    def test_validate_catches_damage(self):
        view = split_view(FANO, (0, 1))
        assert len(view.inner_triangles) >= 1
        broken = type(view)(
            sts=view.sts,
            w_points=view.w_points,
            rest=view.rest,
            graph=view.graph,
            wsets=view.wsets,
            color_classes=view.color_classes,
            pattern=view.pattern,
            inner_triangles=view.inner_triangles[1:],
        )
        with pytest.raises(AssertionError):
            broken.validate()


def _relabels_to(pat: DefiningSet, target: DefiningSet) -> bool:
    if pat.w != target.w:
        return False
    want = set(target.blocks)
    for perm in itertools.permutations(range(pat.w)):
        if {tuple(sorted(perm[p] for p in b)) for b in pat.blocks} == want:
            return True
    return False


class TestPatternFor:
    def test_lookup_by_w(self):
        assert pattern_for(5) == BUILTIN_PATTERNS["w5"]
        assert pattern_for(4) == BUILTIN_PATTERNS["w4"]

    def test_explicit_text_wins(self):
        pat = pattern_for(6, "012,034,135,245")
        assert pat == BUILTIN_PATTERNS["w6_quadrilateral"]

    def test_unknown_w_rejected(self):
        with pytest.raises(ValueError, match="no builtin"):
            pattern_for(8)
