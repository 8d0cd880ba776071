"""Count the two decompositions that turn graphs into system counts.

For a core graph G the census needs N_D, the number of partitions of
the complement's edges into triangles, and N_F, the number of ways to
pick disjoint matchings covering G itself, one per entry in the multiset of
deficiency value sets. Both counters have naive and clever modes that must
agree exactly.
"""

import random

from stscount import decomp, graph_gen
from stscount.graph_gen import GenSpec
from stscount.model import BUILTIN_PATTERNS, DegreeSequence, DenseGraph

w5 = BUILTIN_PATTERNS["w5"]

# take a core graph from the order-13 pipeline whose complement has
# at least one triangle partition
seq = DegreeSequence.from_text("3^4 5^4")
core = next(
    acg for acg in graph_gen.generate_all(GenSpec.for_sequence(seq))
    if decomp.count_triangle_decompositions(acg.graph) > 0
)
g = core.graph
print(f"core {seq.text}, |Aut| = {core.aut_order}")

n_d = decomp.count_triangle_decompositions(g)
print(f"triangle decompositions of the complement: {n_d}")

# the deficiency multisets are read off the graph and the pattern quotas
multisets = graph_gen.enumerate_w_multisets(g, w5)
print(f"candidate deficiency multisets: {len(multisets)}")
total = 0
for ws in multisets:
    full = decomp.count_matching_decompositions(g, ws, mode="full")
    auto = decomp.count_matching_decompositions(g, ws, mode="auto")
    cover = decomp.count_matching_decompositions(g, ws, mode="cover")
    assert full == auto == cover
    total += full
print(f"matching decompositions, summed over multisets: {total}")
print()

# the bundle used by the census and the estimate command
counts = decomp.decomp_counts(g, w5)
print(f"decomp_counts: n_d = {counts.n_d} in {counts.t_d_ms:.1f} ms, "
      f"n_f = {counts.n_f_total}")
print()


def random_matching_union(rng, n, shape):
    """A graph built as a union of disjoint random perfect matchings.

    Returns (graph, multiset) where the multiset repeats the empty value
    set per shape, so every vertex needs saturating; or None when the
    random matchings collide.
    """
    order = list(range(n))
    edges = set()
    for _ in range(sum(shape)):
        rng.shuffle(order)
        matching = {
            tuple(sorted((order[2 * i], order[2 * i + 1])))
            for i in range(n // 2)
        }
        if matching & edges:
            return None
        edges |= matching
    multiset = tuple(frozenset() for mult in shape for _ in range(mult))
    return DenseGraph.from_edges(n, sorted(edges)), multiset


# the auto mode defers work it can reconstruct: the last multiplicity-one
# collection is forced by the leftover edges, and a doubled collection
# contributes exactly half of its compatible matchings; both shortcuts
# must agree with full enumeration
rng = random.Random(7)
shapes = [(1, 1), (1, 2), (2, 2), (1, 1, 2)]
checked = 0
while checked < 50:
    made = random_matching_union(rng, rng.choice([6, 8, 10]), rng.choice(shapes))
    if made is None:
        continue
    g, multiset = made
    full = decomp.count_matching_decompositions(g, multiset, mode="full")
    auto = decomp.count_matching_decompositions(g, multiset, mode="auto")
    assert full == auto and full >= 1
    checked += 1
print(f"deferred counting agreed with full enumeration on {checked} "
      f"random saturating instances")
