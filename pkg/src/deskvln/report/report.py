"""
Cross-run comparison: merge aggregate.json files into one table.
"""
from pathlib import Path
from typing import Sequence

from deskvln.bench.results import (
    AGGREGATE_JSON,
    format_table,
    merge_aggregates,
    read_aggregate,
)
from deskvln.errors import ValidationError


def cmd_report(paths: Sequence[str | Path]) -> str:
    """
    One row per (policy, profile, controller, lighting) across the given runs.

    Raises:
        ValidationError: no input files
        FileNotFoundError: a file is missing
        ParseError, SchemaMismatch: a file is not a current aggregate
    """
    if not paths:
        raise ValidationError("report needs at least one aggregate.json")
    documents = []
    for path in map(Path, paths):
        if path.is_dir():
            path = path / AGGREGATE_JSON
        if not path.exists():
            raise FileNotFoundError(f"Results not found: {path}")
        documents.append(read_aggregate(path))
    return format_table(merge_aggregates(documents))
