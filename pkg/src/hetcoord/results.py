"""Curve tables and machine-readable emission (CSV / JSON)."""

from __future__ import annotations

import io
import json
import os
from dataclasses import asdict, dataclass

from .errors import EmitError

CSV_COLUMNS = ("scenario", "strategy", "x_name", "x_value", "metric",
               "value", "stderr", "trials", "seed")


@dataclass(frozen=True)
class CurveRow:
    scenario: str
    strategy: str
    x_name: str
    x_value: float
    metric: str
    value: float
    stderr: float
    trials: int
    seed: int


@dataclass
class CurveTable:
    rows: list

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def get(self, strategy=None, x_value=None, metric=None, scenario=None):
        """Rows matching all given filters."""
        out = []
        for r in self.rows:
            if strategy is not None and r.strategy != str(strategy):
                continue
            if x_value is not None and r.x_value != x_value:
                continue
            if metric is not None and r.metric != metric:
                continue
            if scenario is not None and r.scenario != scenario:
                continue
            out.append(r)
        return out

    def value(self, strategy, x_value, metric):
        """The single value for (strategy, x, metric); raises if not unique."""
        rows = self.get(strategy=strategy, x_value=x_value, metric=metric)
        if len(rows) != 1:
            raise KeyError(f"expected exactly one row for ({strategy}, {x_value}, {metric}), "
                           f"found {len(rows)}")
        return rows[0].value

    def curve(self, strategy, metric):
        """(x, value, stderr) triples for one strategy/metric, in x order."""
        rows = sorted(self.get(strategy=strategy, metric=metric), key=lambda r: r.x_value)
        return [(r.x_value, r.value, r.stderr) for r in rows]


def _fmt(x) -> str:
    # 17 significant digits round-trips any double exactly
    return f"{float(x):.17g}"


def _serialize_csv(table: CurveTable) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in table.rows:
        lines.append(",".join([
            r.scenario, r.strategy, r.x_name, _fmt(r.x_value), r.metric,
            _fmt(r.value), _fmt(r.stderr), str(r.trials), str(r.seed),
        ]))
    return "\n".join(lines) + "\n"


def _serialize_json(table: CurveTable) -> str:
    records = []
    for r in table.rows:
        d = asdict(r)
        # keep the exact same 17-significant-digit values as the CSV path
        for key in ("x_value", "value", "stderr"):
            d[key] = float(_fmt(d[key]))
        records.append(d)
    return json.dumps(records, indent=1) + "\n"


def emit_results(table: CurveTable, format: str = "csv", destination="-") -> None:
    """Write the table to a path, a file object, or '-' for stdout."""
    if not table.rows:
        raise EmitError("refusing to emit an empty table")
    if format == "csv":
        payload = _serialize_csv(table)
    elif format == "json":
        payload = _serialize_json(table)
    else:
        raise EmitError(f"unknown format {format!r}")
    try:
        if destination == "-":
            import sys

            sys.stdout.write(payload)
        elif hasattr(destination, "write"):
            destination.write(payload)
        else:
            parent = os.path.dirname(os.path.abspath(destination))
            if parent and not os.path.isdir(parent):
                raise EmitError(f"destination directory does not exist: {parent}")
            with open(destination, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
    except OSError as exc:
        raise EmitError(f"cannot write results: {exc}") from exc


def parse_results_csv(source) -> CurveTable:
    """Inverse of the CSV emitter (used for round-trip checks and tooling)."""
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and "\n" not in source and os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    lines = [ln for ln in io.StringIO(text).read().splitlines() if ln]
    header = tuple(lines[0].split(","))
    if header != CSV_COLUMNS:
        raise EmitError(f"unexpected CSV header {header}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        rows.append(CurveRow(
            scenario=parts[0], strategy=parts[1], x_name=parts[2],
            x_value=float(parts[3]), metric=parts[4], value=float(parts[5]),
            stderr=float(parts[6]), trials=int(parts[7]), seed=int(parts[8])))
    return CurveTable(rows=rows)
