"""Exact counting of Steiner triple systems by defining-set decomposition.

A Steiner triple system of order v, STS(v), is a set of 3-element blocks on
v points covering every pair exactly once. This package counts them, both as
labeled systems and as isomorphism classes, by splitting every system over a
small point subset W: the blocks meeting W in two points project to a graph
G on the remaining points, the blocks inside the complement decompose that
complement into triangles, and the projected edges sort into matching
collections. Summing exact contributions over all (G, W) pairs and dividing
by the number of such subsets per system recovers the labeled total.

Public surface:

- model: triple systems, dense bitmask graphs, patterns, the block split.
- graph6: graph6 text encoding for dense graphs.
- canon: canonical labeling, automorphism groups.
- exact_cover: exact set-cover counting and enumeration (dancing links).
- fastcover: compiled exact-cover kernels for large counts.
- graph_gen: orderly generation of graphs by degree sequence.
- decomp: triangle-decomposition and matching-decomposition counts.
- classify: small-order catalogues of systems up to isomorphism.
- census: exact aggregation of per-graph terms into final counts.
- cli: the ``stscount`` command line tool.
"""

__version__ = "1.0.0"

__all__ = [
    "model",
    "graph6",
    "canon",
    "exact_cover",
    "fastcover",
    "graph_gen",
    "decomp",
    "classify",
    "census",
    "cli",
]
