"""Compare candidate patterns by sampled decomposition workloads.

Before committing to a census, sample random graphs with the right
degree sequences and time both counters on them. The figure of merit
n_d * n_f / (t_d + t_f) rewards patterns whose graphs carry many
decompositions per unit of counting time, since every decomposition
found is a system counted.
"""

from stscount import decomp, graph_gen
from stscount.model import BUILTIN_PATTERNS

V = 15
SAMPLES = {"w4": 3, "w5": 3, "w6_quadrilateral": 3}

foms = {}
for name, want in SAMPLES.items():
    pattern = BUILTIN_PATTERNS[name]
    seqs = [s for s in pattern.degree_sequences(V) if s.is_graphical()]
    nd = td = nf = tf = 0.0
    for i in range(want):
        seq = seqs[i % len(seqs)]
        g = graph_gen.sample_random(seq, switches=500, rng_seed=i)
        counts = decomp.decomp_counts(g, pattern)
        t_f = sum(mc.t_f_ms for mc in counts.per_multiset)
        print(f"{name:<18} {seq.text:<12} n_d {counts.n_d:>8} "
              f"({counts.t_d_ms:6.1f} ms)  n_f {counts.n_f_total:>6} "
              f"({t_f:6.1f} ms)")
        nd += counts.n_d
        td += counts.t_d_ms
        nf += counts.n_f_total
        tf += t_f
    foms[name] = (nd / want) * (nf / want) / max((td + tf) / want, 1e-9)

print()
for name in sorted(foms, key=foms.get, reverse=True):
    print(f"figure of merit {name}: {foms[name]:.2f}")
best = max(foms, key=foms.get)
print(f"best pattern at order {V}: {best}")
