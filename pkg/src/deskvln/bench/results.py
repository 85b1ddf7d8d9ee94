"""
Result files: per-episode CSV, aggregate JSON, a text table and trace JSON lines.
Every file carries RESULTS_SCHEMA_VERSION.
"""
import csv
import io
import json
from dataclasses import fields
from pathlib import Path
from typing import Iterable, Sequence

from deskvln.bench.metrics import TABLE_COLUMNS, EpisodeMetrics, MetricsReport
from deskvln.control.rollout import EpisodeTrace
from deskvln.errors import ParseError, SchemaMismatch

RESULTS_SCHEMA_VERSION = 1
RUN_KEYS = ("policy", "profile", "controller", "lighting")
CSV_COLUMNS = ("schema_version", *(f.name for f in fields(EpisodeMetrics)))

EPISODES_CSV = "episodes.csv"
AGGREGATE_JSON = "aggregate.json"
TABLE_TXT = "table.txt"
TRACES_JSONL = "traces.jsonl"


def episodes_csv(report: MetricsReport) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for m in report.episodes:
        row = m.to_row()
        row["tl"] = f"{m.tl:.6f}"
        row["ne"] = f"{m.ne:.6f}"
        row["spl"] = f"{m.spl:.6f}"
        writer.writerow({"schema_version": RESULTS_SCHEMA_VERSION, **row})
    return out.getvalue()


def read_episodes_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def aggregate_document(report: MetricsReport, run: dict) -> dict:
    return {
        "schema_version": RESULTS_SCHEMA_VERSION,
        "run": dict(run),
        "episodes": len(report.episodes),
        "metrics": report.aggregate(),
    }


def dump_json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def read_aggregate(path: str | Path) -> dict:
    """
    Raises:
        ParseError: not a JSON object
        SchemaMismatch: missing or different schema_version, or missing sections
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    version = data.get("schema_version")
    if version != RESULTS_SCHEMA_VERSION:
        raise SchemaMismatch(f"{path}: schema {version!r}, expected {RESULTS_SCHEMA_VERSION}")
    for key in ("run", "metrics"):
        if not isinstance(data.get(key), dict):
            raise SchemaMismatch(f"{path}: no {key!r} section")
    return data


def format_table(rows: Sequence[tuple[dict, dict]], keys: Sequence[str] = RUN_KEYS) -> str:
    """
    Fixed-width table: the key columns, then TL NE FR StR OS SR SPL to two decimals.

    Args:
        rows: (run, metrics) pairs
        keys: Run fields shown before the metrics (omitted when empty)
    """
    header = [*keys, *TABLE_COLUMNS]
    body = [
        [str(run.get(k, "")) for k in keys] + [f"{metrics[c]:.2f}" for c in TABLE_COLUMNS]
        for run, metrics in rows
    ]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = []
    for r in [header, *body]:
        cells = [
            v.ljust(w) if i < len(keys) else v.rjust(w) for i, (v, w) in enumerate(zip(r, widths))
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def merge_aggregates(documents: Iterable[dict]) -> list[tuple[dict, dict]]:
    """
    One row per (policy, profile, controller, lighting); a later document replaces an
    earlier one with the same key. Rows keep first-appearance order.
    """
    merged: dict[tuple, tuple[dict, dict]] = {}
    for doc in documents:
        run = doc["run"]
        key = tuple(run.get(k) for k in RUN_KEYS)
        merged[key] = (run, doc["metrics"])
    return list(merged.values())


def traces_jsonl(traces: Iterable[EpisodeTrace]) -> str:
    return "".join(json.dumps(t.to_dict()) + "\n" for t in traces)


def read_traces(path: str | Path) -> list[EpisodeTrace]:
    """
    Raises:
        ParseError: a line is not a valid trace
        SchemaMismatch: a trace has another schema version
    """
    traces = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                traces.append(EpisodeTrace.from_dict(json.loads(line)))
            except SchemaMismatch:
                raise
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as e:
                raise ParseError(f"{path}:{lineno}: corrupt trace ({e})") from None
    return traces


def write_results(
    out: str | Path, report: MetricsReport, traces: Sequence[EpisodeTrace], run: dict
) -> dict[str, Path]:
    """Write the four result files into out and return their paths by name."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    aggregate = aggregate_document(report, run)
    contents = {
        EPISODES_CSV: episodes_csv(report),
        AGGREGATE_JSON: dump_json(aggregate),
        TABLE_TXT: format_table([(aggregate["run"], aggregate["metrics"])]),
        TRACES_JSONL: traces_jsonl(traces),
    }
    paths = {}
    for name, text in contents.items():
        paths[name] = out / name
        paths[name].write_text(text, encoding="utf-8")
    return paths
