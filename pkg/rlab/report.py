"""Report assembly and rendering (json, csv, text).

A report is a plain dict. Rendering is deterministic: sorted keys, exact
rationals as integers or "p/q" strings, fixed CSV columns per command. Timing
is logged, never written here.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import typing
from fractions import Fraction

from rlab import __version__
from rlab.ids import CMD_CODIM_SWEEP, CMD_EXCLUDE, CMD_GRAPH_CHECK, CMD_RANK_CHECK, SCHEMA, TOOL

CSV_COLUMNS = {
    CMD_RANK_CHECK: ("suite", "N", "d", "r", "m", "seed", "expected", "rank", "status"),
    CMD_CODIM_SWEEP: ("N", "d", "k", "l", "q", "lhs", "rhs", "verdict", "family"),
    CMD_GRAPH_CHECK: (
        "index",
        "seed",
        "K",
        "L",
        "L_sing",
        "pullback",
        "bounds",
        "compatible",
        "monotone",
        "oracle",
    ),
    CMD_EXCLUDE: (
        "label",
        "n",
        "e",
        "lambda",
        "ord_t",
        "sigma_l",
        "sigma_u",
        "lhs_upper",
        "strict_upper",
        "rhs_lower",
        "verdict",
    ),
}

FORMATS = ("json", "csv", "text")


def jsonable(value):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def new_report(command: str, config: dict) -> dict:
    return {
        "schema": SCHEMA,
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "config": config,
        "entries": [],
        "violations": [],
    }


def annotate(app, command: str, violations: typing.Iterable[dict]) -> typing.List[dict]:
    """Mark each violation expected or not, using the bundled manifest."""
    manifest = app.load_manifest()
    out = []
    for v in violations:
        reason = manifest.reason(command, jsonable(v))
        out.append({**v, "expected": reason is not None, "reason": reason})
    return out


def finish(report: dict) -> dict:
    violations = report["violations"]
    report["summary"] = {
        "entries": len(report["entries"]),
        "violations": len(violations),
        "unexpected": sum(1 for v in violations if not v["expected"]),
    }
    return jsonable(report)


def unexpected(report: dict) -> int:
    return report["summary"]["unexpected"]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_csv(report: dict) -> str:
    columns = CSV_COLUMNS[report["command"]]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in report["entries"]:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def render_text(report: dict) -> str:
    s = report["summary"]
    lines = [
        f"{report['tool']} {report['version']} {report['command']}",
        f"entries: {s['entries']}  violations: {s['violations']}  unexpected: {s['unexpected']}",
    ]
    for v in report["violations"]:
        tag = "expected" if v["expected"] else "UNEXPECTED"
        keys = [k for k in sorted(v) if k not in ("expected", "reason", "problem")]
        where = ", ".join(f"{k}={_cell(v[k])}" for k in keys)
        lines.append(f"  [{tag}] {v.get('problem', '')} ({where})")
        if v["reason"]:
            lines.append(f"      reason: {v['reason']}")
    for key in ("minima", "remarks", "certificate", "pigeonhole"):
        if report.get(key):
            lines.append(f"{key}:")
            lines.extend(f"  {_text_item(item)}" for item in report[key])
    return "\n".join(lines) + "\n"


def _text_item(item) -> str:
    if isinstance(item, dict):
        return ", ".join(f"{k}={_cell(v)}" for k, v in item.items())
    return _cell(item)


RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}


def render(report: dict, fmt: str) -> str:
    return RENDERERS[fmt](report)
