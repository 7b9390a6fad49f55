"""Dataset ingestion, per-example evaluation, aggregation and report rendering."""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Optional, Sequence

from .exact import TripleMatchScore, triple_match
from .ged import DEFAULT_COSTS, DEFAULT_NODE_CAP, CostModel, RateMode, RateReport, ged, rates_from_path
from .graph import DEFAULT_NORMALIZATION, NormalizationConfig, Triple, graph_from_triples, graphs_identical
from .parser import ParseStatus, extract_triples
from .soft import DEFAULT_THRESHOLD, GbsScore, ScoringBackendError, SimilarityProvider, gbs_score, gm_gbs

log = logging.getLogger(__name__)

COLUMNS = ("G-F1", "T-F1", "G-BS", "GED", "Hall.", "Omis.", "GM-GBS")
_FIELDS = ("g_f1", "t_f1", "g_bs", "ged", "hall", "omis", "gm_gbs")
APPROX_NOTE = "* GED is an upper bound for at least one example (graph above the exact-search node cap)."

Pooling = Literal["macro", "micro"]
ReportFormat = Literal["markdown", "csv", "json"]


class SchemaError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class DuplicateIdError(SchemaError):
    def __init__(self, example_id: str, first_line: int, second_line: int):
        self.lines = (first_line, second_line)
        super().__init__(f"duplicate id {example_id!r} on lines {first_line} and {second_line}", second_line, "id")


@dataclass(frozen=True)
class ExampleRecord:
    id: str
    gold_triples: tuple[Triple, ...]
    text: str = ""
    predicted_raw: Optional[str] = None
    predicted_triples: Optional[tuple[Triple, ...]] = None

    def __post_init__(self) -> None:
        if (self.predicted_raw is None) == (self.predicted_triples is None):
            raise SchemaError("exactly one of predicted_raw / predicted_triples is required")


@dataclass(frozen=True)
class EvalConfig:
    costs: CostModel = DEFAULT_COSTS
    node_cap: int = DEFAULT_NODE_CAP
    rate_mode: RateMode = "edges"
    normalization: NormalizationConfig = DEFAULT_NORMALIZATION


@dataclass(frozen=True)
class ExampleResult:
    id: str
    parse_status: Optional[ParseStatus]
    triple: TripleMatchScore
    graph_identical: bool
    ged_cost: float
    ged_exact: bool
    rate: RateReport
    gbs: GbsScore
    gold_size: int = 0

    @property
    def t_f1(self) -> float:
        return self.triple.f1

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "parse_status": self.parse_status.value if self.parse_status else "provided",
            "t_f1": self.t_f1,
            "graph_identical": self.graph_identical,
            "ged": self.ged_cost,
            "ged_exact": self.ged_exact,
            "h": self.rate.h,
            "o": self.rate.o,
            "n": self.rate.n,
            "hall_rate": self.rate.hall_rate,
            "omis_rate": self.rate.omis_rate,
            "gbs": asdict(self.gbs),
        }


@dataclass(frozen=True)
class ReportRow:
    label: str
    g_f1: float
    t_f1: float
    g_bs: float
    ged: float
    hall: float
    omis: float
    gm_gbs: float
    approximate: bool = False
    examples: int = field(default=0, compare=False)

    def values(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in _FIELDS)


# ---------------------------------------------------------------------------
# ingestion


def _triples_field(obj: dict, name: str, line: int) -> tuple[Triple, ...]:
    value = obj[name]
    if not isinstance(value, list):
        raise SchemaError("expected a list of [subject, relation, object] lists", line, name)
    out = []
    for k, item in enumerate(value):
        if not (isinstance(item, list) and len(item) == 3 and all(isinstance(v, str) for v in item)):
            raise SchemaError(f"item {k} is not a list of 3 strings", line, name)
        t = Triple(*item)
        if t.is_partial():
            raise SchemaError(f"item {k} has some but not all fields empty", line, name)
        out.append(t)
    return tuple(out)


def parse_record(obj, line: int) -> ExampleRecord:
    if not isinstance(obj, dict):
        raise SchemaError("record must be a JSON object", line)
    ex_id = obj.get("id")
    if not isinstance(ex_id, str) or not ex_id:
        raise SchemaError("missing or empty string", line, "id")
    if "gold_triples" not in obj:
        raise SchemaError("missing", line, "gold_triples")
    gold = _triples_field(obj, "gold_triples", line)
    text = obj.get("text", "")
    if not isinstance(text, str):
        raise SchemaError("must be a string", line, "text")
    has_raw, has_triples = "predicted_raw" in obj, "predicted_triples" in obj
    if has_raw == has_triples:
        raise SchemaError("exactly one of predicted_raw / predicted_triples is required", line, "predicted_raw")
    if has_raw:
        if not isinstance(obj["predicted_raw"], str):
            raise SchemaError("must be a string", line, "predicted_raw")
        return ExampleRecord(ex_id, gold, text, predicted_raw=obj["predicted_raw"])
    return ExampleRecord(ex_id, gold, text, predicted_triples=_triples_field(obj, "predicted_triples", line))


def read_records(lines: Iterable[str]) -> list[ExampleRecord]:
    records = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except ValueError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", lineno) from None
        rec = parse_record(obj, lineno)
        if rec.id in seen:
            raise DuplicateIdError(rec.id, seen[rec.id], lineno)
        seen[rec.id] = lineno
        records.append(rec)
    return records


def load_dataset(path: str | Path) -> list[ExampleRecord]:
    """Read a JSON-lines dataset, validating every record."""
    with open(path, encoding="utf-8") as fh:
        return read_records(fh)


def dump_records(records: Iterable[ExampleRecord]) -> str:
    out = io.StringIO()
    for r in records:
        obj = {"id": r.id, "text": r.text, "gold_triples": [list(t) for t in r.gold_triples]}
        if r.predicted_raw is not None:
            obj["predicted_raw"] = r.predicted_raw
        else:
            obj["predicted_triples"] = [list(t) for t in r.predicted_triples]
        out.write(json.dumps(obj, ensure_ascii=False) + "\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# evaluation


def evaluate_example(
    record: ExampleRecord, provider: SimilarityProvider, cfg: EvalConfig = EvalConfig()
) -> ExampleResult:
    status: Optional[ParseStatus] = None
    if record.predicted_raw is not None:
        outcome = extract_triples(record.predicted_raw)
        status = outcome.status
        pred_triples: Sequence[Triple] = outcome.triples
    else:
        pred_triples = record.predicted_triples
    gold = graph_from_triples(record.gold_triples, cfg.normalization)
    # Labels that normalize to nothing (e.g. "_") would leave partial triples.
    pred_triples = [t for t in pred_triples if not Triple(*t).normalized(cfg.normalization).is_partial()]
    pred = graph_from_triples(pred_triples, cfg.normalization)

    edit = ged(pred, gold, cfg.costs, cfg.node_cap)
    try:
        soft = gbs_score(pred, gold, provider)
    except ScoringBackendError as exc:
        raise type(exc)(str(exc), example_id=record.id) from exc
    except Exception as exc:  # provider bugs surface as backend errors too
        raise ScoringBackendError(f"provider failed: {exc!r}", example_id=record.id) from exc
    return ExampleResult(
        id=record.id,
        parse_status=status,
        triple=triple_match(pred, gold),
        graph_identical=graphs_identical(pred, gold),
        ged_cost=edit.cost,
        ged_exact=edit.exact,
        rate=rates_from_path(edit, cfg.rate_mode),
        gbs=soft,
        gold_size=len(gold.nodes) + len(gold.edges),
    )


def evaluate_dataset(
    records: Sequence[ExampleRecord],
    provider: SimilarityProvider,
    cfg: EvalConfig = EvalConfig(),
    workers: int = 1,
) -> list[ExampleResult]:
    """Evaluate every record; results come back sorted by id whatever the worker count."""
    if workers <= 1:
        results = [evaluate_example(r, provider, cfg) for r in records]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: evaluate_example(r, provider, cfg), records))
    return sorted(results, key=lambda r: r.id)


def _mean(xs: Sequence[float]) -> float:
    return sum(xs) / len(xs)


def aggregate(
    results: Sequence[ExampleResult],
    label: str,
    threshold: float = DEFAULT_THRESHOLD,
    pooling: Pooling = "macro",
    ged_normalized: bool = False,
) -> ReportRow:
    """Collapse per-example results into one table row (percentages, GED as a mean).

    ``pooling="micro"`` pools triple counts for T-F1 and h/o/n counts for the
    rates; the graph-level columns are per-graph by nature and stay macro.
    """
    if not results:
        raise ValueError("aggregate needs at least one result")
    if pooling not in ("macro", "micro"):
        raise ValueError(f"unknown pooling {pooling!r}")
    results = sorted(results, key=lambda r: r.id)
    g_f1 = sum(1 for r in results if r.graph_identical) / len(results)
    if pooling == "macro":
        t_f1 = _mean([r.t_f1 for r in results])
        hall = _mean([r.rate.hall_rate for r in results])
        omis = _mean([r.rate.omis_rate for r in results])
    else:
        t_f1 = TripleMatchScore.from_counts(
            sum(r.triple.matched for r in results),
            sum(r.triple.predicted_total for r in results),
            sum(r.triple.gold_total for r in results),
        ).f1
        pooled = RateReport(sum(r.rate.h for r in results), sum(r.rate.o for r in results), sum(r.rate.n for r in results))
        hall, omis = pooled.hall_rate, pooled.omis_rate
    if ged_normalized:
        ged_mean = _mean([r.ged_cost / max(r.gold_size, 1) for r in results])
    else:
        ged_mean = _mean([r.ged_cost for r in results])
    return ReportRow(
        label=label,
        g_f1=100 * g_f1,
        t_f1=100 * t_f1,
        g_bs=100 * _mean([r.gbs.f1 for r in results]),
        ged=ged_mean,
        hall=100 * hall,
        omis=100 * omis,
        gm_gbs=100 * gm_gbs([r.gbs for r in results], threshold).fraction,
        approximate=not all(r.ged_exact for r in results),
        examples=len(results),
    )


# ---------------------------------------------------------------------------
# rendering


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def render_report(rows: Sequence[ReportRow], fmt: ReportFormat = "markdown") -> str:
    if not rows:
        raise ValueError("render_report needs at least one row")
    if fmt == "markdown":
        return _render_markdown(rows)
    if fmt == "csv":
        return _render_csv(rows)
    if fmt == "json":
        return _render_json(rows)
    raise ValueError(f"unknown report format {fmt!r}")


def _label(row: ReportRow) -> str:
    return f"{row.label}*" if row.approximate else row.label


def _render_markdown(rows: Sequence[ReportRow]) -> str:
    lines = [
        "| Model | " + " | ".join(COLUMNS) + " |",
        "|---|" + "---:|" * len(COLUMNS),
    ]
    for row in rows:
        lines.append(f"| {_label(row)} | " + " | ".join(_fmt(v) for v in row.values()) + " |")
    if any(r.approximate for r in rows):
        lines += ["", APPROX_NOTE]
    return "\n".join(lines) + "\n"


def _render_csv(rows: Sequence[ReportRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("Model", *COLUMNS))
    for row in rows:
        writer.writerow((_label(row), *(_fmt(v) for v in row.values())))
    return out.getvalue()


def _render_json(rows: Sequence[ReportRow]) -> str:
    payload = {
        "columns": list(COLUMNS),
        "rows": [
            {"label": r.label, **{f: float(_fmt(v)) for f, v in zip(_FIELDS, r.values())}, "approximate": r.approximate}
            for r in rows
        ],
    }
    if any(r.approximate for r in rows):
        payload["note"] = APPROX_NOTE
    return json.dumps(payload, indent=2) + "\n"
