"""Exact census of labeled triple systems by defining-set decomposition.

A census fixes a w-point pattern, runs over the admissible degree
sequences of the completion graph G, generates one representative per
isomorphism class of stripped cores, extends each core back to G, and
accumulates

    K * v! * N_D * N_F / (w! * |Aut(G)|)

over all graphs and W_p value multisets. Dividing the grand total by
the number of pattern occurrences per system gives the labeled count.
Everything is exact rational arithmetic; a non-integer final result
means a bug or an incomplete run and raises instead of rounding.

Work is organized in restartable units, one per reduction row and
generation slice, so long runs can be checkpointed, resumed, and spread
over worker processes without changing any number.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from importlib import resources

from . import decomp, graph6, graph_gen
from .model import (
    AutClassifiedGraph,
    DefiningSet,
    DegreeSequence,
    DenseGraph,
    TripleSystem,
    pattern_for,
)

log = logging.getLogger(__name__)

CHECKPOINT_MAGIC = "stscount census checkpoint v1"

CYCLIC_BASES = {
    7: ((0, 1, 3),),
    13: ((0, 1, 4), (0, 2, 7)),
    15: ((0, 1, 4), (0, 2, 9), (0, 5, 10)),
    19: ((0, 1, 4), (0, 2, 9), (0, 5, 11)),
    21: ((0, 1, 9), (0, 2, 5), (0, 4, 10), (0, 7, 14)),
}


class ConstancyError(RuntimeError):
    """The pattern occurrence count varies between systems."""


def completion_constant(pattern: DefiningSet, seq: DegreeSequence) -> int:
    """The multiplicity constant K for one pattern and degree sequence.

    Combines the w! labelings of the pattern points, the number of
    uncovered-pair assignments behind each value multiset, the pattern
    stabilizer, and the value-permutation adjustment. Both the
    assignment count and the adjustment must be uniform over the value
    multisets of the sequence; that uniformity and the stabilizer
    divisibility are asserted rather than assumed.
    """
    quotas = pattern.quotas_for(seq)
    counts = pattern.assignment_counts(quotas)
    phis = set(counts.values())
    assert len(phis) == 1, f"assignment counts vary: {counts}"
    phi = phis.pop()
    wf = math.factorial(pattern.w)
    assert (wf * phi) % pattern.stabilizer_order == 0
    k0 = wf * phi // pattern.stabilizer_order
    adjs = set()
    for multiset in counts:
        groups: dict[frozenset, int] = {}
        for value in multiset:
            groups[value] = groups.get(value, 0) + 1
        adj = 1
        for value, mult in groups.items():
            if len(value) != seq.n:
                adj *= math.factorial(mult)
        adjs.add(adj)
    assert len(adjs) == 1, f"value multiset shapes vary: {adjs}"
    return k0 * adjs.pop()


def closed_form_occurrences(v: int, pattern: DefiningSet) -> int | None:
    """Occurrences of the pattern per system, when a closed form exists.

    Every system of order v contains the same number of occurrences of
    the one-block and two-block patterns: blocks, block plus outside
    point, and intersecting block pairs. Returns None for patterns
    without such a form.
    """
    if pattern.w == 3 and len(pattern.blocks) == 1:
        return v * (v - 1) // 6
    if pattern.w == 4 and len(pattern.blocks) == 1:
        return v * (v - 1) // 6 * (v - 3)
    if pattern.w == 5 and len(pattern.blocks) == 2:
        return v * (v - 1) * (v - 3) // 8
    return None


def cyclic_system(v: int) -> TripleSystem:
    """A reference system of order v built from cyclic base blocks."""
    if v not in CYCLIC_BASES:
        raise ValueError(f"no cyclic base blocks stored for order {v}")
    blocks = set()
    for base in CYCLIC_BASES[v]:
        for shift in range(v):
            blocks.add(tuple(sorted((p + shift) % v for p in base)))
    return TripleSystem(v, tuple(blocks))


def pattern_count_in(sts: TripleSystem, pattern: DefiningSet) -> int:
    """Number of w-point subsets of the system inducing the pattern."""
    w = pattern.w
    want = len(pattern.blocks)
    count = 0
    for subset in itertools.combinations(range(sts.v), w):
        points = set(subset)
        inside = [b for b in sts.blocks if points.issuperset(b)]
        if len(inside) != want:
            continue
        if _config_isomorphic(pattern, subset, inside):
            count += 1
    return count


def _config_isomorphic(pattern: DefiningSet, subset, inside) -> bool:
    target = {tuple(sorted(b)) for b in inside}
    for perm in itertools.permutations(subset):
        if all(
            tuple(sorted(perm[p] for p in b)) in target for b in pattern.blocks
        ):
            return True
    return False


def defining_set_count(
    v: int, pattern: DefiningSet, catalogue=None
) -> int:
    """Occurrences of the pattern per system of order v, certified constant.

    For orders with a full classification the count is taken from every
    isomorphism class and must agree (ConstancyError otherwise). For
    larger orders only patterns with a closed form are accepted; the
    form is cross-checked against one cyclic reference system.
    """
    closed = closed_form_occurrences(v, pattern)
    if v <= 15:
        if catalogue is None:
            from . import classify

            catalogue = classify.classify_all(v)
        seen = {pattern_count_in(cls.rep, pattern) for cls in catalogue.classes}
        if len(seen) != 1:
            raise ConstancyError(
                f"pattern {pattern.w}:{pattern.text or '-'} varies over "
                f"order {v} classes: {sorted(seen)}"
            )
        value = seen.pop()
        assert closed is None or closed == value
        return value
    if closed is None:
        raise ConstancyError(
            f"no closed occurrence count for pattern on {pattern.w} points "
            f"and order {v} is beyond the classification limit"
        )
    scanned = pattern_count_in(cyclic_system(v), pattern)
    assert scanned == closed, (scanned, closed)
    return closed


@dataclass(frozen=True)
class CensusUnit:
    """One restartable slice of a census: a reduction row and a part."""

    v: int
    w: int
    pattern_text: str
    s1: str
    row_index: int
    part: tuple[int, int] | None
    mode: str
    record: bool

    @property
    def key(self) -> str:
        part = "-" if self.part is None else f"{self.part[0]}/{self.part[1]}"
        return f"{self.s1}|row{self.row_index}|{part}"


@dataclass(frozen=True)
class GraphRecord:
    """Per-graph diagnostics emitted by a census unit."""

    graph6: str
    degree_sequence: str
    aut_order: int
    n_d: int
    t_d_ms: float
    w_assignment_id: int | None
    n_f: int
    t_f_ms: float

    def as_dict(self) -> dict:
        return {
            "graph6": self.graph6,
            "degree_sequence": self.degree_sequence,
            "aut_order": self.aut_order,
            "n_d": self.n_d,
            "t_d_ms": round(self.t_d_ms, 3),
            "w_assignment_id": self.w_assignment_id,
            "n_f": self.n_f,
            "t_f_ms": round(self.t_f_ms, 3),
        }


@dataclass(frozen=True)
class UnitResult:
    """Exact contribution of one census unit."""

    key: str
    s1: str
    s2: str
    graphs: int
    contribution: Fraction
    elapsed_s: float
    records: tuple[GraphRecord, ...] = ()


def census_units(
    v: int,
    pattern: DefiningSet,
    parts: int = 1,
    mode: str = "auto",
    include_skippable: bool = False,
    record: bool = False,
) -> list[CensusUnit]:
    """The deterministic unit list for a census run."""
    if parts < 1:
        raise ValueError("parts must be at least 1")
    units = []
    for seq in pattern.degree_sequences(v):
        if not seq.is_graphical():
            continue
        for row_index, row in enumerate(graph_gen.reduction_rows(seq)):
            if row.skippable and not include_skippable:
                continue
            if row.s2.n == 0 or parts == 1:
                slices: list[tuple[int, int] | None] = [None]
            else:
                slices = [(i, parts) for i in range(parts)]
            for part in slices:
                units.append(
                    CensusUnit(
                        v=v,
                        w=pattern.w,
                        pattern_text=pattern.text,
                        s1=seq.text,
                        row_index=row_index,
                        part=part,
                        mode=mode,
                        record=record,
                    )
                )
    return units


def run_unit(unit: CensusUnit) -> UnitResult:
    """Execute one census unit and return its exact contribution."""
    t0 = time.perf_counter()
    pattern = DefiningSet.from_text(unit.w, unit.pattern_text)
    seq = DegreeSequence.from_text(unit.s1)
    row = graph_gen.reduction_rows(seq)[unit.row_index]
    K = completion_constant(pattern, seq)
    wf = math.factorial(pattern.w)
    vf = math.factorial(unit.v)
    graphs = 0
    contribution = Fraction(0)
    records: list[GraphRecord] = []

    def visit(core: AutClassifiedGraph) -> None:
        nonlocal graphs, contribution
        graphs += 1
        ext = graph_gen.extend_with_pendants(core, seq)
        g = ext.graph
        if unit.record:
            counts = decomp.decomp_counts(g, pattern, mode=unit.mode)
            n_d, t_d = counts.n_d, counts.t_d_ms
            per = counts.per_multiset
            if not per:
                records.append(
                    GraphRecord(
                        graph6.encode(g), seq.text, ext.aut_order,
                        n_d, t_d, None, 0, 0.0,
                    )
                )
            for i, mc in enumerate(per):
                records.append(
                    GraphRecord(
                        graph6.encode(g), seq.text, ext.aut_order,
                        n_d, t_d, i, mc.n_f, mc.t_f_ms,
                    )
                )
            if n_d == 0:
                return
            for mc in per:
                contribution += Fraction(
                    K * vf * n_d * mc.n_f, wf * ext.aut_order
                )
            return
        n_d = decomp.count_triangle_decompositions(g)
        if n_d == 0:
            return
        for multiset in graph_gen.enumerate_w_multisets(g, pattern):
            n_f = decomp.count_matching_decompositions(g, multiset, mode=unit.mode)
            contribution += Fraction(K * vf * n_d * n_f, wf * ext.aut_order)

    if row.s2.n == 0:
        # the whole graph strips away; the one core is the empty graph
        visit(AutClassifiedGraph(DenseGraph.empty(0), 1, row.s2))
    else:
        try:
            base = row.spec
        except ValueError:
            base = None
        if base is not None:
            spec = base if unit.part is None else replace(base, part=unit.part)
            graph_gen.generate(spec, visit)
    return UnitResult(
        key=unit.key,
        s1=unit.s1,
        s2=row.s2.text,
        graphs=graphs,
        contribution=contribution,
        elapsed_s=time.perf_counter() - t0,
        records=tuple(records),
    )


@dataclass(frozen=True)
class CensusCell:
    """Aggregated results for one (S1, S2) sequence pair."""

    s1: str
    s2: str
    graphs: int
    contribution: Fraction

    def merged(self, other: "CensusCell") -> "CensusCell":
        assert (self.s1, self.s2) == (other.s1, other.s2)
        return CensusCell(
            self.s1,
            self.s2,
            self.graphs + other.graphs,
            self.contribution + other.contribution,
        )


class CensusLedger:
    """Exact census totals keyed by (S1, S2) degree sequence pair.

    Merging ledgers is associative and commutative, so any split of the
    unit list over workers or checkpointed sessions produces identical
    totals.
    """

    def __init__(self, v: int, w: int, pattern_text: str, nprime: int | None):
        self.v = v
        self.w = w
        self.pattern_text = pattern_text
        self.nprime = nprime
        self.cells: dict[tuple[str, str], CensusCell] = {}

    def add_result(self, result: UnitResult) -> None:
        cell = CensusCell(result.s1, result.s2, result.graphs, result.contribution)
        key = (result.s1, result.s2)
        if key in self.cells:
            cell = self.cells[key].merged(cell)
        self.cells[key] = cell

    def merge(self, other: "CensusLedger") -> None:
        assert (self.v, self.w, self.pattern_text) == (
            other.v,
            other.w,
            other.pattern_text,
        )
        for key, cell in other.cells.items():
            if key in self.cells:
                cell = self.cells[key].merged(cell)
            self.cells[key] = cell

    @property
    def grand_total(self) -> Fraction:
        return sum((c.contribution for c in self.cells.values()), Fraction(0))

    def labeled_total(self) -> int:
        """The labeled system count; raises unless it is a whole number."""
        if self.nprime is None:
            raise ValueError("occurrence count unknown for this pattern")
        q = self.grand_total / self.nprime
        if q.denominator != 1:
            raise ValueError(
                f"census total {self.grand_total} is not divisible by "
                f"{self.nprime}; the run is incomplete or inconsistent"
            )
        return q.numerator

    def labeled_parts(self) -> dict[tuple[str, str], Fraction]:
        """Per-cell share of the labeled total (cells over occurrences)."""
        if self.nprime is None:
            raise ValueError("occurrence count unknown for this pattern")
        return {
            key: cell.contribution / self.nprime
            for key, cell in sorted(self.cells.items())
        }


def divisibility_audit(ledger: CensusLedger) -> dict:
    """Arithmetic invariants of a completed census.

    Every cell counts (labeled system, pattern occurrence) pairs, so it
    must be a whole number, and the grand total must split evenly over
    the occurrences per system. Raises ValueError on any failure and
    returns the audited values, including the K/w! sequence weights
    (integers for large orders, fractions when the completion graph is
    tiny).
    """
    pattern = DefiningSet.from_text(ledger.w, ledger.pattern_text)
    wf = math.factorial(ledger.w)
    weights = {}
    for seq in pattern.degree_sequences(ledger.v):
        if not seq.is_graphical():
            continue
        K = completion_constant(pattern, seq)
        weights[seq.text] = Fraction(K, wf)
    for key, cell in ledger.cells.items():
        if cell.contribution.denominator != 1:
            raise ValueError(f"cell {key} total {cell.contribution} not integral")
    labeled = ledger.labeled_total()
    return {
        "weights": weights,
        "cells_integral": True,
        "labeled_total": labeled,
    }


def _config_digest(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class Checkpoint:
    """Atomic JSON store of finished unit results for one census config."""

    def __init__(self, path: str, config: dict):
        self.path = path
        self.config = config
        self.digest = _config_digest(config)
        self.done: dict[str, dict] = {}
        if os.path.exists(path):
            with open(path) as fh:
                payload = json.load(fh)
            if payload.get("magic") != CHECKPOINT_MAGIC:
                raise ValueError(f"{path} is not a census checkpoint")
            if payload["config_digest"] != self.digest:
                raise ValueError(
                    f"{path} belongs to a different census configuration"
                )
            self.done = payload["units"]

    def has(self, key: str) -> bool:
        return key in self.done

    def stored_result(self, key: str) -> UnitResult:
        raw = self.done[key]
        return UnitResult(
            key=key,
            s1=raw["s1"],
            s2=raw["s2"],
            graphs=raw["graphs"],
            contribution=Fraction(raw["num"], raw["den"]),
            elapsed_s=raw["elapsed_s"],
        )

    def store(self, result: UnitResult) -> None:
        self.done[result.key] = {
            "s1": result.s1,
            "s2": result.s2,
            "graphs": result.graphs,
            "num": result.contribution.numerator,
            "den": result.contribution.denominator,
            "elapsed_s": round(result.elapsed_s, 3),
        }
        self._write()

    def _write(self) -> None:
        payload = {
            "magic": CHECKPOINT_MAGIC,
            "config_digest": self.digest,
            "config": self.config,
            "units": self.done,
        }
        fd, tmp = tempfile.mkstemp(
            dir=os.path.dirname(os.path.abspath(self.path)) or ".",
            prefix=".census-",
        )
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh, indent=1)
                fh.write("\n")
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def run_census(
    v: int,
    pattern: DefiningSet,
    mode: str = "auto",
    parts: int = 1,
    include_skippable: bool = False,
    workers: int = 1,
    checkpoint_path: str | None = None,
    nprime: int | None = None,
    progress=None,
    record_sink=None,
) -> CensusLedger:
    """Run a full census of order v for one pattern.

    The unit list, the per-unit numbers, and the merged totals are all
    independent of workers, parts, and checkpoint interruptions. The
    returned ledger needs the pattern occurrence count to turn its
    grand total into the labeled count; for patterns without a closed
    form pass nprime explicitly.
    """
    if v % 6 not in (1, 3):
        raise ValueError(f"no triple system of order {v}")
    if nprime is None:
        nprime = closed_form_occurrences(v, pattern)
    record = record_sink is not None
    units = census_units(
        v, pattern, parts=parts, mode=mode,
        include_skippable=include_skippable, record=record,
    )
    ledger = CensusLedger(v, pattern.w, pattern.text, nprime)
    checkpoint = None
    if checkpoint_path is not None:
        if record:
            raise ValueError("record collection cannot be checkpointed")
        checkpoint = Checkpoint(
            checkpoint_path,
            {
                "v": v,
                "w": pattern.w,
                "pattern": pattern.text,
                "mode": mode,
                "parts": parts,
                "include_skippable": include_skippable,
            },
        )
    pending = []
    for unit in units:
        if checkpoint is not None and checkpoint.has(unit.key):
            ledger.add_result(checkpoint.stored_result(unit.key))
        else:
            pending.append(unit)

    def consume(result: UnitResult) -> None:
        ledger.add_result(result)
        if checkpoint is not None:
            checkpoint.store(result)
        if record_sink is not None:
            for rec in result.records:
                record_sink(rec)
        if progress is not None:
            progress(result)

    if workers <= 1:
        for unit in pending:
            consume(run_unit(unit))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for result in pool.map(run_unit, pending):
                consume(result)
    return ledger


def labeled_count(v: int, pattern: DefiningSet, mode: str = "auto") -> int:
    """Labeled count of order v through one pattern, single process."""
    return run_census(v, pattern, mode=mode).labeled_total()


@dataclass(frozen=True)
class AutSpectrum:
    """Classes of order v grouped by automorphism group order."""

    v: int
    counts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        vf = math.factorial(self.v)
        last = 0
        for order, classes in self.counts:
            if order <= last:
                raise ValueError("group orders must be strictly increasing")
            if vf % order:
                raise ValueError(f"group order {order} does not divide {self.v}!")
            if classes < 0:
                raise ValueError("negative class count")
            last = order

    @classmethod
    def from_dict(cls, v: int, counts: dict[int, int]) -> "AutSpectrum":
        return cls(v, tuple(sorted((int(k), int(n)) for k, n in counts.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def total_classes(self) -> int:
        return sum(n for _, n in self.counts)

    @property
    def labeled_total(self) -> int:
        total = sum(
            Fraction(math.factorial(self.v) * n, order) for order, n in self.counts
        )
        assert total.denominator == 1
        return total.numerator

    def nontrivial(self) -> dict[int, int]:
        return {order: n for order, n in self.counts if order >= 2 and n}


def resolve_trivial_classes(
    v: int, labeled_total: int, nontrivial: dict[int, int]
) -> AutSpectrum:
    """Complete an automorphism spectrum from the labeled count.

    Each class with group order i accounts for v!/i labeled systems, so
    the rigid class count is determined exactly by the labeled total
    and the nontrivial spectrum. A negative or fractional result means
    the inputs are inconsistent and raises ValueError.
    """
    n1 = Fraction(labeled_total, math.factorial(v))
    for order, n in nontrivial.items():
        if order < 2:
            raise ValueError("nontrivial spectrum must start at order 2")
        n1 -= Fraction(n, order)
    if n1.denominator != 1 or n1 < 0:
        raise ValueError(
            f"labeled total and nontrivial spectrum are inconsistent: "
            f"rigid class count {n1}"
        )
    counts = dict(nontrivial)
    if n1:
        counts[1] = n1.numerator
    return AutSpectrum.from_dict(v, counts)


def v21_reference() -> dict:
    """Published census results for order 21, used for regressions."""
    path = resources.files("stscount").joinpath("data/sts21_reference.json")
    with path.open() as fh:
        return json.load(fh)


def verify_v21_reference() -> list[str]:
    """Cross-check every identity in the stored order-21 results.

    Returns a list of failure descriptions; an empty list means all
    checks passed.
    """
    ref = v21_reference()
    failures = []
    labeled = ref["labeled_total"]
    cells = ref["cells"]
    if sum(c["labeled_part"] for c in cells) != labeled:
        failures.append("cell totals do not add up to the labeled total")
    w5 = pattern_for(5)
    w4 = pattern_for(4)
    if ref["occurrences"]["w5"] != closed_form_occurrences(21, w5):
        failures.append("stored w5 occurrence count disagrees with closed form")
    if ref["occurrences"]["w4"] != closed_form_occurrences(21, w4):
        failures.append("stored w4 occurrence count disagrees with closed form")
    spectrum = {int(k): n for k, n in ref["nontrivial_spectrum"].items()}
    try:
        resolved = resolve_trivial_classes(21, labeled, spectrum)
    except ValueError as exc:
        failures.append(str(exc))
    else:
        if resolved.as_dict().get(1, 0) != ref["rigid_classes"]:
            failures.append("rigid class count does not match the labeled total")
        if resolved.total_classes != ref["total_classes"]:
            failures.append("total class count mismatch")
        if resolved.labeled_total != labeled:
            failures.append("spectrum does not reproduce the labeled total")
    cell_s2 = {c["s2"] for c in cells}
    if cell_s2 != set(ref["graph_classes"]):
        failures.append("graph class table keys do not match the census cells")
    for c in cells:
        if c["labeled_part"] <= 0:
            failures.append(f"cell {c['s1']} / {c['s2']} is not positive")
    return failures
