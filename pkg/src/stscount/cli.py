"""Command line interface for the counting toolkit.

Subcommands:
  count      exact labeled census for one order and pattern
  estimate   random-graph timing study ranking candidate patterns
  graphs     canonical graph generation for one degree sequence
  classify   isomorphism classes of one small order
  verify     arithmetic self-checks; exits nonzero on any failure

A JSON config file can supply any count option; explicit flags win.
Reports embed the package version, the effective configuration and its
digest, and the random seed where one is used, so a report is enough to
reproduce its run.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__, census, classify, decomp, graph6, graph_gen
from .census import _config_digest
from .model import BUILTIN_PATTERNS, DegreeSequence, pattern_for

COUNT_DEFAULTS = {
    "w": 5,
    "pattern": "012,034",
    "mode": "auto",
    "parts": 1,
    "workers": 1,
    "include_skippable": False,
    "checkpoint": None,
    "records": None,
    "report": None,
}

ESTIMATE_PATTERNS = ("w4", "w5", "w6_quadrilateral")

ESTIMATE_SAMPLES = {"w4": 1, "w5": 3, "w6_quadrilateral": 2}


def _write_report(path: str | None, payload: dict) -> None:
    if path is None:
        return
    payload = {"tool": "stscount", "version": __version__, **payload}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, default=str)
        fh.write("\n")


def _effective_config(args, defaults: dict, keys) -> dict:
    """Layer config file values under explicit flags."""
    config = dict(defaults)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(defaults) - {"v"}
        if unknown:
            raise SystemExit(f"unknown config keys: {sorted(unknown)}")
        config.update(loaded)
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    return config


def cmd_count(args) -> int:
    config = _effective_config(args, COUNT_DEFAULTS, COUNT_DEFAULTS)
    if args.v is None and "v" not in config:
        raise SystemExit("count needs --v or a config file with v")
    v = args.v if args.v is not None else config["v"]
    config["v"] = v
    pattern = pattern_for(config["w"], config["pattern"])
    digest = _config_digest(
        {k: config[k] for k in ("v", "w", "pattern", "mode", "include_skippable")}
    )
    sink = None
    records_fh = None
    if config["records"]:
        records_fh = open(config["records"], "w")

        def sink(rec):
            records_fh.write(json.dumps(rec.as_dict()) + "\n")

    t0 = time.perf_counter()

    def progress(result):
        print(
            f"  unit {result.key}: {result.graphs} graphs "
            f"in {result.elapsed_s:.1f}s",
            flush=True,
        )

    try:
        ledger = census.run_census(
            v,
            pattern,
            mode=config["mode"],
            parts=config["parts"],
            include_skippable=config["include_skippable"],
            workers=config["workers"],
            checkpoint_path=config["checkpoint"],
            record_sink=sink,
            progress=progress if not args.quiet else None,
        )
    finally:
        if records_fh is not None:
            records_fh.close()
    elapsed = time.perf_counter() - t0
    audit = census.divisibility_audit(ledger)
    labeled = audit["labeled_total"]
    print(f"order {v}, pattern {pattern.w}:{pattern.text} [{digest}]")
    for (s1, s2), part in ledger.labeled_parts().items():
        print(f"  {s1:>14}  ->  {s2:<14} {part}")
    print(f"occurrences per system: {ledger.nprime}")
    print(f"labeled systems: {labeled}")
    print(f"elapsed: {elapsed:.1f}s")
    _write_report(
        config["report"],
        {
            "command": "count",
            "config": config,
            "config_digest": digest,
            "labeled_total": labeled,
            "cells": {
                f"{s1} -> {s2}": str(val)
                for (s1, s2), val in ledger.labeled_parts().items()
            },
            "weights": {k: str(w) for k, w in audit["weights"].items()},
            "elapsed_s": round(elapsed, 3),
        },
    )
    return 0


def cmd_estimate(args) -> int:
    samples = dict(ESTIMATE_SAMPLES)
    if args.samples:
        for token in args.samples.split(","):
            name, _, n = token.partition(":")
            if name not in BUILTIN_PATTERNS:
                raise SystemExit(f"unknown pattern name {name!r}")
            samples[name] = int(n)
    digest = _config_digest(
        {"v": args.v, "seed": args.seed, "switches": args.switches, "samples": samples}
    )
    rows = []
    foms = {}
    for name in ESTIMATE_PATTERNS:
        want = samples.get(name, 0)
        if want <= 0:
            continue
        pattern = BUILTIN_PATTERNS[name]
        seqs = [s for s in pattern.degree_sequences(args.v) if s.is_graphical()]
        nd_sum = td_sum = nf_sum = tf_sum = 0.0
        taken = 0
        for i in range(want):
            seq = seqs[i % len(seqs)]
            g = graph_gen.sample_random(seq, args.switches, args.seed + i)
            counts = decomp.decomp_counts(g, pattern)
            n_f = counts.n_f_total
            t_f = sum(mc.t_f_ms for mc in counts.per_multiset)
            rows.append(
                {
                    "pattern": name,
                    "sequence": seq.text,
                    "n_d": counts.n_d,
                    "t_d_ms": round(counts.t_d_ms, 1),
                    "n_f": n_f,
                    "t_f_ms": round(t_f, 1),
                }
            )
            nd_sum += counts.n_d
            td_sum += counts.t_d_ms
            nf_sum += n_f
            tf_sum += t_f
            taken += 1
        mean_cost = (td_sum + tf_sum) / taken
        foms[name] = (nd_sum / taken) * (nf_sum / taken) / max(mean_cost, 1e-9)
    print(f"order {args.v}, seed {args.seed} [{digest}]")
    print(f"{'pattern':<18} {'sequence':<14} {'n_d':>12} {'t_d ms':>10} {'n_f':>10} {'t_f ms':>10}")
    for row in rows:
        print(
            f"{row['pattern']:<18} {row['sequence']:<14} {row['n_d']:>12} "
            f"{row['t_d_ms']:>10} {row['n_f']:>10} {row['t_f_ms']:>10}"
        )
    ranking = sorted(foms, key=foms.get, reverse=True)
    for name in ranking:
        print(f"fom {name}: {foms[name]:.1f}")
    print("ranking:", " > ".join(ranking))
    _write_report(
        args.report,
        {
            "command": "estimate",
            "config_digest": digest,
            "seed": args.seed,
            "switches": args.switches,
            "v": args.v,
            "samples": samples,
            "rows": rows,
            "fom": {k: round(f, 3) for k, f in foms.items()},
            "ranking": ranking,
        },
    )
    return 0


def cmd_graphs(args) -> int:
    seq = DegreeSequence.from_text(args.sequence)
    part = None
    if args.part:
        res, _, mod = args.part.partition("/")
        part = (int(res), int(mod))
    spec = graph_gen.GenSpec.for_sequence(seq, part=part)
    out_fh = open(args.out, "w") if args.out else None
    count = [0]

    def visit(core):
        count[0] += 1
        if out_fh is not None:
            out_fh.write(graph6.encode(core.graph) + "\n")

    try:
        graph_gen.generate(spec, visit)
    finally:
        if out_fh is not None:
            out_fh.close()
    print(f"sequence {seq.text}: {count[0]} graphs")
    return 0


def cmd_classify(args) -> int:
    t0 = time.perf_counter()
    catalogue = classify.classify_all(args.v, stride=args.stride)
    elapsed = time.perf_counter() - t0
    print(f"order {args.v}: {catalogue.class_count} isomorphism classes")
    print(f"spectrum: {catalogue.spectrum}")
    print(f"labeled systems: {catalogue.labeled_total}")
    print(f"star completions: {catalogue.total_completions} "
          f"(stride {catalogue.stride})")
    print(f"elapsed: {elapsed:.1f}s")
    if args.out:
        catalogue.save(args.out)
        print(f"catalogue written to {args.out}")
    _write_report(
        args.report,
        {
            "command": "classify",
            "v": args.v,
            "classes": catalogue.class_count,
            "spectrum": catalogue.spectrum,
            "labeled_total": catalogue.labeled_total,
            "stride": catalogue.stride,
            "elapsed_s": round(elapsed, 3),
        },
    )
    return 0


def cmd_verify(args) -> int:
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        checks.append((name, ok, detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))

    failures = census.verify_v21_reference()
    check("order-21 reference identities", not failures, "; ".join(failures))

    ref = census.v21_reference()
    spectrum = {int(k): n for k, n in ref["nontrivial_spectrum"].items()}
    try:
        resolved = census.resolve_trivial_classes(
            21, ref["labeled_total"], spectrum
        )
        check(
            "order-21 rigid class resolution",
            resolved.as_dict()[1] == ref["rigid_classes"]
            and resolved.total_classes == ref["total_classes"],
        )
    except ValueError as exc:
        check("order-21 rigid class resolution", False, str(exc))

    for v, want in ((7, 30), (9, 840)):
        got = {}
        for name in ("w3", "w4", "w5"):
            ledger = census.run_census(v, BUILTIN_PATTERNS[name])
            census.divisibility_audit(ledger)
            got[name] = ledger.labeled_total()
        check(
            f"order-{v} cross-pattern agreement",
            set(got.values()) == {want},
            f"{got}",
        )

    if args.level == "full":
        ledger = census.run_census(13, BUILTIN_PATTERNS["w5"])
        audit = census.divisibility_audit(ledger)
        check("order-13 divisibility audit", True, str(audit["weights"]))
        catalogue = classify.classify_all(13)
        check(
            "order-13 census equals classification",
            ledger.labeled_total() == catalogue.labeled_total
            and catalogue.class_count == 2,
            f"census {ledger.labeled_total()}, classes {catalogue.class_count}",
        )

    bad = [name for name, ok, _ in checks if not ok]
    print(f"{len(checks) - len(bad)}/{len(checks)} checks passed")
    _write_report(
        args.report,
        {
            "command": "verify",
            "level": args.level,
            "checks": [
                {"name": name, "ok": ok, "detail": detail}
                for name, ok, detail in checks
            ],
        },
    )
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stscount",
        description="Exact counting of triple systems by defining-set decomposition",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact labeled census")
    p.add_argument("--v", type=int, help="order of the systems")
    p.add_argument("--w", type=int, help="pattern point count")
    p.add_argument("--pattern", help='pattern triples, e.g. "012,034"')
    p.add_argument("--mode", choices=("auto", "full", "cover"))
    p.add_argument("--parts", type=int, help="generation slices per row")
    p.add_argument("--workers", type=int, help="worker processes")
    p.add_argument("--include-skippable", action="store_true", default=None,
                   dest="include_skippable")
    p.add_argument("--checkpoint", help="checkpoint file to create or resume")
    p.add_argument("--records", help="per-graph JSONL output path")
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--config", help="JSON file with default options")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("estimate", help="random-graph pattern comparison")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--switches", type=int, default=2000)
    p.add_argument("--samples", help='per-pattern counts, e.g. "w4:1,w5:3"')
    p.add_argument("--report", help="JSON report path")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("graphs", help="canonical graph generation")
    p.add_argument("--sequence", required=True, help='degree sequence, e.g. "3^4 5^4"')
    p.add_argument("--part", help="slice as RESIDUE/MODULUS, e.g. 0/4")
    p.add_argument("--out", help="graph6 output path")
    p.set_defaults(func=cmd_graphs)

    p = sub.add_parser("classify", help="isomorphism classes of one order")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--stride", type=int)
    p.add_argument("--out", help="catalogue JSON path")
    p.add_argument("--report", help="JSON report path")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="arithmetic self-checks")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--report", help="JSON report path")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
