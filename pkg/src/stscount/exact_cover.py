"""Exact cover counting and enumeration with dancing links.

An instance is a universe 0..n_elements-1 plus a sequence of candidate
subsets; a cover is a set of candidates partitioning the universe. The
counter walks the standard doubly-linked sparse matrix (Knuth's dancing
links), choosing either the column with fewest remaining candidates (mrv,
the default for counting) or the smallest uncovered element with candidates
tried in input order (first, the deterministic enumeration order).

Instances round-trip through a plain text format: a header line
"n_elements n_candidates", then one candidate per line as space-separated
element indices.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CoverInstance:
    n_elements: int
    candidates: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "candidates",
            tuple(tuple(sorted(c)) for c in self.candidates),
        )
        for cand in self.candidates:
            if not cand:
                raise ValueError("empty candidate")
            if len(set(cand)) != len(cand):
                raise ValueError(f"candidate {cand} repeats an element")
            if cand[0] < 0 or cand[-1] >= self.n_elements:
                raise ValueError(f"candidate {cand} out of range")

    @property
    def has_duplicates(self) -> bool:
        return len(set(self.candidates)) != len(self.candidates)


@dataclass(frozen=True)
class EnumerateResult:
    count: int
    completed: bool


class _Matrix:
    """Dancing-links node store: column headers 1..n, header ring root 0."""

    def __init__(self, inst: CoverInstance):
        n = inst.n_elements
        size = 1 + n + sum(len(c) for c in inst.candidates)
        self.L = [0] * size
        self.R = [0] * size
        self.U = [0] * size
        self.D = [0] * size
        self.C = [0] * size
        self.row_id = [-1] * size
        self.S = [0] * (n + 1)
        for c in range(n + 1):
            self.L[c] = c - 1
            self.R[c] = c + 1
            self.U[c] = c
            self.D[c] = c
            self.C[c] = c
        self.L[0] = n
        self.R[n] = 0
        node = n + 1
        for rid, cand in enumerate(inst.candidates):
            row_start = node
            for el in cand:
                col = el + 1
                self.U[node] = self.U[col]
                self.D[node] = col
                self.D[self.U[col]] = node
                self.U[col] = node
                self.C[node] = col
                self.row_id[node] = rid
                self.S[col] += 1
                if node == row_start:
                    self.L[node] = node
                    self.R[node] = node
                else:
                    self.L[node] = self.L[row_start]
                    self.R[node] = row_start
                    self.R[self.L[row_start]] = node
                    self.L[row_start] = node
                node += 1

    def cover(self, col):
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
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

    def uncover(self, col):
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
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

    def choose_mrv(self):
        best, best_size = -1, None
        c = self.R[0]
        while c != 0:
            if best_size is None or self.S[c] < best_size:
                best, best_size = c, self.S[c]
                if best_size <= 1:
                    break
            c = self.R[c]
        return best

    def choose_first(self):
        return self.R[0]


def _search(matrix, choose, visitor, stack):
    """Count covers under the choice rule; visitor may stop the walk.

    Returns (count, completed).
    """
    if matrix.R[0] == 0:
        if visitor is not None:
            keep_going = visitor(tuple(stack))
            if keep_going is False:
                return 1, False
        return 1, True
    col = choose()
    count = 0
    matrix.cover(col)
    r = matrix.D[col]
    while r != col:
        if visitor is not None:
            stack.append(matrix.row_id[r])
        j = matrix.R[r]
        while j != r:
            matrix.cover(matrix.C[j])
            j = matrix.R[j]
        sub, completed = _search(matrix, choose, visitor, stack)
        count += sub
        j = matrix.L[r]
        while j != r:
            matrix.uncover(matrix.C[j])
            j = matrix.L[j]
        if visitor is not None:
            stack.pop()
        if not completed:
            matrix.uncover(col)
            return count, False
        r = matrix.D[r]
    matrix.uncover(col)
    return count, True


def count_covers(inst: CoverInstance, strategy: str = "mrv") -> int:
    """Exact number of covers of the instance."""
    matrix = _Matrix(inst)
    choose = matrix.choose_mrv if strategy == "mrv" else matrix.choose_first
    if strategy not in ("mrv", "first"):
        raise ValueError(f"unknown strategy {strategy!r}")
    count, _ = _search(matrix, choose, None, [])
    return count


def enumerate_covers(
    inst: CoverInstance, visitor, strategy: str = "first"
) -> EnumerateResult:
    """Call visitor with each cover as a tuple of candidate indices.

    Solutions arrive in the deterministic order induced by the strategy
    (first: branch on the smallest uncovered element, candidates in input
    order). A visitor returning False stops the walk early.
    """
    if strategy not in ("mrv", "first"):
        raise ValueError(f"unknown strategy {strategy!r}")
    matrix = _Matrix(inst)
    choose = matrix.choose_mrv if strategy == "mrv" else matrix.choose_first
    count, completed = _search(matrix, choose, visitor, [])
    return EnumerateResult(count=count, completed=completed)


def format_cover_text(inst: CoverInstance) -> str:
    lines = [f"{inst.n_elements} {len(inst.candidates)}"]
    lines.extend(" ".join(str(e) for e in cand) for cand in inst.candidates)
    return "\n".join(lines) + "\n"


def parse_cover_text(text: str) -> CoverInstance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty cover text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("header must be: n_elements n_candidates")
    n_elements, n_candidates = int(head[0]), int(head[1])
    if len(lines) - 1 != n_candidates:
        raise ValueError(
            f"header promises {n_candidates} candidates, found {len(lines) - 1}"
        )
    candidates = tuple(
        tuple(int(tok) for tok in ln.split()) for ln in lines[1:]
    )
    return CoverInstance(n_elements=n_elements, candidates=candidates)
