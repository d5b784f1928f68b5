"""Flat scan records and their JSON / CSV serialization.

JSON reports are arrays of objects keyed by the CSV columns. Integers are
written as decimal strings because values outgrow 64 bits. ``achieved`` is an
integer, ``"inf"`` for an exactly vanishing difference, or ``"≥E"`` when the
measurement saturated at exponent E.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .congruence import CongruenceReport
from .errors import ParseError

__all__ = ["COLUMNS", "ScanRecord", "serialize_records", "parse_records"]

COLUMNS = ("kind", "n", "k", "p", "required", "achieved", "holds", "exceptional", "class")

SATURATED_PREFIX = "≥"


@dataclass(frozen=True)
class ScanRecord:
    kind: str
    n: int | None
    k: int | None
    p: int
    required: int | None
    achieved: int | float
    saturated: bool
    holds: bool
    exceptional: bool
    cls: str | None = None

    @classmethod
    def from_report(cls, report: CongruenceReport, klass: str | None = None) -> "ScanRecord":
        spec = report.spec
        n = spec.j if spec.kind == "named" and spec.j is not None else spec.n
        k = spec.k if isinstance(spec.k, int) or spec.k is None else None
        return cls(
            kind=spec.label,
            n=n,
            k=k,
            p=report.p,
            required=report.required,
            achieved=report.achieved,
            saturated=report.saturated,
            holds=report.holds,
            exceptional=report.exceptional,
            cls=klass if klass is not None else report.cls,
        )

    def fields(self) -> dict[str, str]:
        if self.achieved == math.inf:
            ach = "inf"
        elif self.saturated:
            ach = f"{SATURATED_PREFIX}{self.achieved}"
        else:
            ach = str(self.achieved)
        return {
            "kind": self.kind,
            "n": "" if self.n is None else str(self.n),
            "k": "" if self.k is None else str(self.k),
            "p": str(self.p),
            "required": "exact" if self.required is None else str(self.required),
            "achieved": ach,
            "holds": "true" if self.holds else "false",
            "exceptional": "true" if self.exceptional else "false",
            "class": self.cls or "",
        }


def serialize_records(records, fmt: str = "json") -> str:
    if fmt == "json":
        objs = []
        for r in records:
            f = r.fields()
            f["holds"] = r.holds
            f["exceptional"] = r.exceptional
            f["class"] = r.cls
            objs.append(f)
        if not objs:
            return "[]\n"
        return json.dumps(objs, indent=1, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in records:
            f = r.fields()
            w.writerow([f[c] for c in COLUMNS])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def _opt_int(s: str, line: int, field: str) -> int | None:
    if s == "":
        return None
    return _int(s, line, field)


def _int(s, line: int, field: str) -> int:
    if not isinstance(s, str):
        raise ParseError(f"expected a decimal string, got {s!r}", line, field)
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"not an integer: {s!r}", line, field) from None


def _bool(s, line: int, field: str) -> bool:
    if s in (True, "true"):
        return True
    if s in (False, "false"):
        return False
    raise ParseError(f"not a boolean: {s!r}", line, field)


def _record_from_fields(f: dict, line: int) -> ScanRecord:
    for c in COLUMNS:
        if c not in f:
            raise ParseError("missing column", line, c)
    kind = f["kind"]
    if not isinstance(kind, str) or not kind:
        raise ParseError(f"bad kind {kind!r}", line, "kind")
    req = f["required"]
    required = None if req == "exact" else _int(req, line, "required")
    ach = f["achieved"]
    if not isinstance(ach, str):
        raise ParseError(f"expected a string, got {ach!r}", line, "achieved")
    saturated = False
    if ach == "inf":
        achieved: int | float = math.inf
    elif ach.startswith(SATURATED_PREFIX):
        achieved = _int(ach[len(SATURATED_PREFIX):], line, "achieved")
        saturated = True
    else:
        achieved = _int(ach, line, "achieved")
    klass = f["class"]
    if klass is not None and not isinstance(klass, str):
        raise ParseError(f"bad class {klass!r}", line, "class")
    return ScanRecord(
        kind=kind,
        n=_opt_int(f["n"], line, "n"),
        k=_opt_int(f["k"], line, "k"),
        p=_int(f["p"], line, "p"),
        required=required,
        achieved=achieved,
        saturated=saturated,
        holds=_bool(f["holds"], line, "holds"),
        exceptional=_bool(f["exceptional"], line, "exceptional"),
        cls=klass or None,
    )


def parse_records(text: str, fmt: str = "json") -> list[ScanRecord]:
    """Inverse of :func:`serialize_records`; raises ParseError with line/field."""
    if fmt == "json":
        try:
            objs = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno) from None
        if not isinstance(objs, list):
            raise ParseError("top level must be an array", 1)
        out = []
        for i, o in enumerate(objs):
            if not isinstance(o, dict):
                raise ParseError("record must be an object", i + 1)
            # line numbers in JSON mode are record ordinals
            out.append(_record_from_fields(o, i + 1))
        return out
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ParseError("missing header", 1)
        header = tuple(rows[0])
        if header != COLUMNS:
            missing = [c for c in COLUMNS if c not in header]
            raise ParseError(f"header must be {','.join(COLUMNS)}", 1, missing[0] if missing else None)
        out = []
        for lineno, row in enumerate(rows[1:], 2):
            if len(row) != len(COLUMNS):
                field = COLUMNS[len(row)] if len(row) < len(COLUMNS) else None
                raise ParseError(f"expected {len(COLUMNS)} columns, got {len(row)}", lineno, field)
            out.append(_record_from_fields(dict(zip(COLUMNS, row)), lineno))
        return out
    raise ValueError(f"unknown format {fmt!r}")
