"""CSV / JSON serialisation of solution fields.

Floats are written with 17 significant digits so doubles round-trip exactly.
Failed points keep their row with NaN values (``null`` in JSON) and a status.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

from .solver import SolutionSample

FIELDS = ("x", "t", "u", "celerity", "ux", "ut", "pde_residual", "imag_residual", "radius", "nodes", "status")
FLOAT_FIELDS = FIELDS[:9]


def fmt(value: float) -> str:
    return "nan" if math.isnan(value) else format(value, ".17g")


def sample_record(s: SolutionSample) -> dict:
    rec = {k: float(getattr(s, k)) for k in FLOAT_FIELDS}
    rec["nodes"] = int(s.nodes)
    rec["status"] = s.status
    return rec


def sample_diagnostics(s: SolutionSample) -> dict:
    rep = s.contour.report if s.contour else None
    return {
        "mode": s.mode,
        "pole_count": s.pole_count,
        "margin": rep.margin if rep else math.nan,
        "separation": rep.separation if rep else math.nan,
        "best_margin": s.best_margin,
        "message": s.message,
    }


def to_csv(samples: Iterable[SolutionSample]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for s in samples:
        rec = sample_record(s)
        writer.writerow([fmt(rec[k]) for k in FLOAT_FIELDS] + [rec["nodes"], rec["status"]])
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def to_json(samples: Sequence[SolutionSample], include_diagnostics: bool = False, meta: dict | None = None) -> str:
    records = []
    for s in samples:
        rec = sample_record(s)
        if include_diagnostics:
            rec["diagnostics"] = sample_diagnostics(s)
        records.append(rec)
    doc = {"fields": list(FIELDS), "records": records}
    if meta:
        doc["meta"] = meta
    return json.dumps(_json_safe(doc), indent=1, allow_nan=False) + "\n"


def read_csv(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    out = []
    for row in rows:
        rec = {k: float(row[k]) for k in FLOAT_FIELDS}
        rec["nodes"] = int(row["nodes"])
        rec["status"] = row["status"]
        out.append(rec)
    return out


def read_json(text: str) -> list[dict]:
    out = []
    for row in json.loads(text)["records"]:
        rec = {k: math.nan if row[k] is None else float(row[k]) for k in FLOAT_FIELDS}
        rec["nodes"] = int(row["nodes"])
        rec["status"] = row["status"]
        out.append(rec)
    return out


def same_records(a: list[dict], b: list[dict]) -> bool:
    """Field-by-field equality with NaN == NaN."""
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        for k in FIELDS:
            va, vb = ra[k], rb[k]
            if isinstance(va, float) and math.isnan(va):
                if not (isinstance(vb, float) and math.isnan(vb)):
                    return False
            elif va != vb:
                return False
    return True
