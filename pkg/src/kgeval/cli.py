"""Command line entry point: ``kgeval evaluate | parse | calibrate``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from .calibration import PerturbationPlan, PlanError, measure, random_gold
from .ged import DEFAULT_NODE_CAP
from .parser import canonical, extract_triples
from .runner import EvalConfig, SchemaError, aggregate, evaluate_dataset, load_dataset, render_report
from .soft import DEFAULT_THRESHOLD, ScoringBackendError, lexical_provider, remote_provider

log = logging.getLogger("kgeval")

ENDPOINT_ENV = "KGEVAL_ENDPOINT"
EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_BACKEND = 0, 1, 2, 3
_RATE_MODES = {"edges": "edges", "nodes": "nodes", "both": "nodes_and_edges"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kgeval", description="Evaluate generated knowledge graphs against gold graphs.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="score a JSON-lines dataset and render a report")
    ev.add_argument("--dataset", required=True, type=Path)
    ev.add_argument("--label", default="model")
    ev.add_argument("--provider", choices=("lexical", "remote"), default="lexical")
    ev.add_argument("--endpoint", default=None, help=f"scoring service URL (falls back to ${ENDPOINT_ENV})")
    ev.add_argument("--timeout", type=float, default=30.0)
    ev.add_argument("--batch-size", type=int, default=64)
    ev.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    ev.add_argument("--rate-mode", choices=tuple(_RATE_MODES), default="edges")
    ev.add_argument("--pooling", choices=("macro", "micro"), default="macro")
    ev.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    ev.add_argument("--ged-normalized", action="store_true", help="divide GED by gold graph size")
    ev.add_argument("--format", choices=("markdown", "csv", "json"), default="markdown")
    ev.add_argument("--out", type=Path, default=None)
    ev.add_argument("--workers", type=int, default=8)
    ev.add_argument("--details", type=Path, default=None, help="write per-example results as JSON lines")
    ev.add_argument("--figures", type=Path, default=None, help="directory for PNG figures")

    pa = sub.add_parser("parse", help="recover a triple list from raw model output")
    pa.add_argument("--in", dest="infile", required=True, help="raw text file, or - for stdin")

    ca = sub.add_parser("calibrate", help="plant errors in a random gold graph and check recovery")
    ca.add_argument("--nodes", type=int, required=True)
    ca.add_argument("--insertions", type=int, default=0)
    ca.add_argument("--deletions", type=int, default=0)
    ca.add_argument("--relabels", type=int, default=0)
    ca.add_argument("--seed", type=int, default=0)
    return ap


def _evaluate(args) -> int:
    try:
        records = load_dataset(args.dataset)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    if not records:
        print("schema error: dataset is empty", file=sys.stderr)
        return EXIT_SCHEMA

    if args.provider == "remote":
        endpoint = args.endpoint or os.environ.get(ENDPOINT_ENV)
        if not endpoint:
            print(f"--provider remote needs --endpoint or ${ENDPOINT_ENV}", file=sys.stderr)
            return EXIT_FAIL
        provider = remote_provider(endpoint, timeout=args.timeout, batch_size=args.batch_size)
    else:
        provider = lexical_provider()

    cfg = EvalConfig(node_cap=args.node_cap, rate_mode=_RATE_MODES[args.rate_mode])
    start = time.perf_counter()
    try:
        results = evaluate_dataset(records, provider, cfg, workers=args.workers)
    except ScoringBackendError as exc:
        print(f"scoring backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    log.info("evaluated %d examples in %.2fs", len(results), time.perf_counter() - start)

    row = aggregate(results, args.label, args.threshold, args.pooling, args.ged_normalized)
    report = render_report([row], args.format)
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(report, encoding="utf-8")
    else:
        sys.stdout.write(report)
    if args.details:
        with open(args.details, "w", encoding="utf-8") as fh:
            for r in results:
                fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
    if args.figures:
        from .plotting import write_figures

        for path in write_figures([row], results, args.figures):
            log.info("wrote %s", path)
    return EXIT_OK


def _parse(args) -> int:
    raw = sys.stdin.read() if args.infile == "-" else Path(args.infile).read_text(encoding="utf-8")
    outcome = extract_triples(raw)
    print(canonical(outcome.triples))
    print(f"status: {outcome.status.value}")
    for note in outcome.diagnostics:
        print(f"note: {note}", file=sys.stderr)
    return EXIT_OK


def _calibrate(args) -> int:
    try:
        gold = random_gold(args.nodes, args.seed)
        plan = PerturbationPlan(args.seed, args.insertions, args.deletions, args.relabels)
        measured, expected = measure(gold, plan)
    except (PlanError, ValueError) as exc:
        print(f"invalid plan: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    ok = (measured.h, measured.o, measured.n) == (expected.h, expected.o, expected.n)
    print(f"{'':10}{'h':>4}{'o':>4}{'n':>4}{'Hall_Rate':>11}{'Omis_Rate':>11}")
    for name, r in (("expected", expected), ("measured", measured)):
        print(f"{name:10}{r.h:>4}{r.o:>4}{r.n:>4}{r.hall_rate:>11.4f}{r.omis_rate:>11.4f}")
    print("recovered" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"evaluate": _evaluate, "parse": _parse, "calibrate": _calibrate}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
