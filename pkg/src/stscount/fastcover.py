"""Array-based exact cover counting with an optional compiled fast path.

The dancing-links search from exact_cover is re-expressed over flat int64
arrays so numba can compile it. When numba or numpy are missing everything
falls back to the pure Python implementation; results are identical either
way. Counts are guarded against int64 overflow: the compiled search stops
at 2^62 and the wrapper raises instead of returning a wrapped value.

sample_covers walks the solutions in a fixed order and keeps every k-th
one, which needs two passes (count first, then a buffer of exactly the
right size). sample_covers_adaptive does the same job in a single pass
with a fixed buffer, doubling the stride whenever the buffer fills; it
is how the classifier thins huge completion runs down to a manageable
set of representatives.
"""

from __future__ import annotations

from . import exact_cover
from .exact_cover import CoverInstance

try:
    import numpy as np
    from numba import njit

    HAVE_FAST = True
except ImportError:
    np = None
    njit = None
    HAVE_FAST = False

COUNT_LIMIT = 1 << 62

_ENTER, _TRY, _RESUME = 0, 1, 2


def _arrays(inst: CoverInstance):
    """Flat dancing-links arrays: headers 1..n around root 0."""
    n = inst.n_elements
    size = 1 + n + sum(len(c) for c in inst.candidates)
    L = np.zeros(size, np.int64)
    R = np.zeros(size, np.int64)
    U = np.zeros(size, np.int64)
    D = np.zeros(size, np.int64)
    C = np.zeros(size, np.int64)
    row_id = np.full(size, -1, np.int64)
    S = np.zeros(n + 1, np.int64)
    for c in range(n + 1):
        L[c] = c - 1
        R[c] = c + 1
        U[c] = c
        D[c] = c
        C[c] = c
    L[0] = n
    R[n] = 0
    node = n + 1
    for rid, cand in enumerate(inst.candidates):
        start = node
        for el in cand:
            col = el + 1
            U[node] = U[col]
            D[node] = col
            D[U[col]] = node
            U[col] = node
            C[node] = col
            row_id[node] = rid
            S[col] += 1
            if node == start:
                L[node] = node
                R[node] = node
            else:
                L[node] = node - 1
                R[node] = start
                R[node - 1] = node
                L[start] = node
            node += 1
    return L, R, U, D, C, S, row_id


if HAVE_FAST:

    @njit(cache=True)
    def _cover(col, L, R, U, D, C, S):
        R[L[col]] = R[col]
        L[R[col]] = L[col]
        i = D[col]
        while i != col:
            j = R[i]
            while j != i:
                D[U[j]] = D[j]
                U[D[j]] = U[j]
                S[C[j]] -= 1
                j = R[j]
            i = D[i]

    @njit(cache=True)
    def _uncover(col, L, R, U, D, C, S):
        i = U[col]
        while i != col:
            j = L[i]
            while j != i:
                S[C[j]] += 1
                D[U[j]] = j
                U[D[j]] = j
                j = L[j]
            i = U[i]
        R[L[col]] = col
        L[R[col]] = col

    @njit(cache=True)
    def _mrv(L, R, S):
        best = R[0]
        c = R[0]
        while c != 0:
            if S[c] < S[best]:
                best = c
            c = R[c]
        return best

    @njit(cache=True)
    def _search_fast(L, R, U, D, C, S, row_id, k, out, sizes):
        """Count all covers; with k > 0 record every k-th one.

        Returns (count, saved) where count is -1 on overflow. out has one
        row per recorded solution; sizes[s] is the number of row ids
        stored in out[s].
        """
        n_cols = 0
        c = R[0]
        while c != 0:
            n_cols += 1
            c = R[c]
        max_depth = n_cols + 1
        col_at = np.zeros(max_depth, np.int64)
        node_at = np.zeros(max_depth, np.int64)
        count = 0
        saved = 0
        depth = 0
        col = 0
        node = 0
        mode = _ENTER
        while True:
            if mode == _ENTER:
                if R[0] == 0:
                    if k > 0 and count % k == 0 and saved < out.shape[0]:
                        for i in range(depth):
                            out[saved, i] = row_id[node_at[i]]
                        sizes[saved] = depth
                        saved += 1
                    count += 1
                    if count >= COUNT_LIMIT:
                        return -1, saved
                    if depth == 0:
                        return count, saved
                    depth -= 1
                    mode = _RESUME
                    continue
                col = _mrv(L, R, S)
                _cover(col, L, R, U, D, C, S)
                node = D[col]
                mode = _TRY
            elif mode == _RESUME:
                col = col_at[depth]
                node = node_at[depth]
                j = L[node]
                while j != node:
                    _uncover(C[j], L, R, U, D, C, S)
                    j = L[j]
                node = D[node]
                mode = _TRY
            else:
                if node == col:
                    _uncover(col, L, R, U, D, C, S)
                    if depth == 0:
                        return count, saved
                    depth -= 1
                    mode = _RESUME
                else:
                    col_at[depth] = col
                    node_at[depth] = node
                    j = R[node]
                    while j != node:
                        _cover(C[j], L, R, U, D, C, S)
                        j = R[j]
                    depth += 1
                    mode = _ENTER

    @njit(cache=True)
    def _search_adaptive(L, R, U, D, C, S, row_id, k0, out, sizes):
        """Count all covers in one pass, sampling into a fixed buffer.

        Keeps every k-th cover starting from stride k0; when the buffer
        fills, drops the odd-numbered rows and doubles the stride, so
        the kept rows are always covers 0, k, 2k, ... for the current
        k. Returns (count, k, saved); count is -1 on overflow.
        """
        n_cols = 0
        c = R[0]
        while c != 0:
            n_cols += 1
            c = R[c]
        max_depth = n_cols + 1
        col_at = np.zeros(max_depth, np.int64)
        node_at = np.zeros(max_depth, np.int64)
        count = 0
        saved = 0
        k = k0
        depth = 0
        col = 0
        node = 0
        mode = _ENTER
        while True:
            if mode == _ENTER:
                if R[0] == 0:
                    if count % k == 0:
                        if saved == out.shape[0]:
                            w = 0
                            for r in range(0, saved, 2):
                                for i in range(out.shape[1]):
                                    out[w, i] = out[r, i]
                                sizes[w] = sizes[r]
                                w += 1
                            saved = w
                            k *= 2
                        if count % k == 0:
                            for i in range(depth):
                                out[saved, i] = row_id[node_at[i]]
                            sizes[saved] = depth
                            saved += 1
                    count += 1
                    if count >= COUNT_LIMIT:
                        return -1, k, saved
                    if depth == 0:
                        return count, k, saved
                    depth -= 1
                    mode = _RESUME
                    continue
                col = _mrv(L, R, S)
                _cover(col, L, R, U, D, C, S)
                node = D[col]
                mode = _TRY
            elif mode == _RESUME:
                col = col_at[depth]
                node = node_at[depth]
                j = L[node]
                while j != node:
                    _uncover(C[j], L, R, U, D, C, S)
                    j = L[j]
                node = D[node]
                mode = _TRY
            else:
                if node == col:
                    _uncover(col, L, R, U, D, C, S)
                    if depth == 0:
                        return count, k, saved
                    depth -= 1
                    mode = _RESUME
                else:
                    col_at[depth] = col
                    node_at[depth] = node
                    j = R[node]
                    while j != node:
                        _cover(C[j], L, R, U, D, C, S)
                        j = R[j]
                    depth += 1
                    mode = _ENTER


def _sample_width(inst: CoverInstance) -> int:
    """Upper bound on cover size: disjoint candidates of minimal length."""
    if not inst.candidates:
        return 1
    return max(1, inst.n_elements // min(len(c) for c in inst.candidates))


def count_covers_fast(inst: CoverInstance) -> int:
    """Exact cover count, compiled when numba is available."""
    if not HAVE_FAST:
        return exact_cover.count_covers(inst)
    if inst.n_elements == 0:
        return 1
    L, R, U, D, C, S, row_id = _arrays(inst)
    empty = np.zeros((0, 1), np.int64)
    count, _ = _search_fast(L, R, U, D, C, S, row_id, 0, empty, np.zeros(0, np.int64))
    if count < 0:
        raise OverflowError("cover count reached the int64 guard")
    return int(count)


def sample_covers(inst: CoverInstance, k: int):
    """Count all covers and keep every k-th one in search order.

    Returns (count, samples) where samples is a list of covers, each a
    tuple of candidate indices. Solutions 0, k, 2k, ... are kept, so
    every run with the same instance and k returns the same samples.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not HAVE_FAST:
        samples: list[tuple[int, ...]] = []
        seen = [0]

        def keep(cover):
            if seen[0] % k == 0:
                samples.append(cover)
            seen[0] += 1
            return True

        result = exact_cover.enumerate_covers(inst, keep, strategy="mrv")
        return result.count, samples
    if inst.n_elements == 0:
        return 1, [()]
    L, R, U, D, C, S, row_id = _arrays(inst)
    count, _ = _search_fast(
        L, R, U, D, C, S, row_id, 0, np.zeros((0, 1), np.int64), np.zeros(0, np.int64)
    )
    if count < 0:
        raise OverflowError("cover count reached the int64 guard")
    cap = (int(count) + k - 1) // k
    width = _sample_width(inst)
    out = np.zeros((cap, width), np.int64)
    sizes = np.zeros(max(1, cap), np.int64)
    L, R, U, D, C, S, row_id = _arrays(inst)
    count2, saved = _search_fast(L, R, U, D, C, S, row_id, k, out, sizes)
    if count2 != count:
        raise AssertionError("sampling pass disagrees with counting pass")
    samples = [
        tuple(int(x) for x in out[s, : sizes[s]]) for s in range(saved)
    ]
    return int(count), samples


def sample_covers_adaptive(inst: CoverInstance, k0: int, cap: int):
    """Single-pass sampling with a bounded buffer.

    Walks all covers once, keeping every k-th in search order. The
    stride starts at k0 and doubles whenever more than cap samples
    would be kept, so the result always fits in cap rows. Returns
    (count, stride, samples); deterministic for fixed inputs.
    """
    if k0 < 1:
        raise ValueError("k0 must be at least 1")
    if cap < 2:
        raise ValueError("cap must be at least 2")
    if not HAVE_FAST:
        state = {"count": 0, "k": k0}
        samples: list[tuple[int, ...]] = []

        def keep(cover):
            if state["count"] % state["k"] == 0:
                if len(samples) == cap:
                    del samples[1::2]
                    state["k"] *= 2
                if state["count"] % state["k"] == 0:
                    samples.append(cover)
            state["count"] += 1
            return True

        result = exact_cover.enumerate_covers(inst, keep, strategy="mrv")
        return result.count, state["k"], samples
    if inst.n_elements == 0:
        return 1, k0, [()]
    L, R, U, D, C, S, row_id = _arrays(inst)
    out = np.zeros((cap, _sample_width(inst)), np.int64)
    sizes = np.zeros(cap, np.int64)
    count, k, saved = _search_adaptive(L, R, U, D, C, S, row_id, k0, out, sizes)
    if count < 0:
        raise OverflowError("cover count reached the int64 guard")
    samples = [
        tuple(int(x) for x in out[s, : sizes[s]]) for s in range(saved)
    ]
    return int(count), int(k), samples
