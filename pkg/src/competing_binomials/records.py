"""Versioned output records shared by every CLI command.

A record is a flat header (``schema_version``, ``command``, ``argv``,
``params``), a dict of scalar ``fields`` and an optional table of ``rows``.
Floats are written with ``repr`` and rationals as ``"p/q"`` strings, so
nothing is rounded on the way out.

JSON is the record itself.  CSV carries the header and fields as ``#``
comment lines holding JSON, followed by the table::

    # schema_version: 1
    # command: trace
    # argv: [...]
    # params: {...}
    # fields: {...}
    n,p,diff,second_diff
    0,...
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import jsonschema

SCHEMA_VERSION = "1"

RECORD_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "argv", "params", "fields", "columns", "rows"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "argv": {"type": "array", "items": {"type": "string"}},
        "params": {"type": "object"},
        "fields": {"type": "object"},
        "columns": {"type": "array", "items": {"type": "string"}},
        "rows": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}},
        },
    },
}


@dataclass
class OutputRecord:
    command: str
    argv: list[str]
    params: dict
    fields: dict = field(default_factory=dict)
    columns: list[str] = field(default_factory=list)
    rows: list[list[str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "argv": list(self.argv),
            "params": self.params,
            "fields": self.fields,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "OutputRecord":
        jsonschema.validate(obj, RECORD_SCHEMA)
        return cls(
            obj["command"], obj["argv"], obj["params"], obj["fields"], obj["columns"], obj["rows"]
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
        buf.write(f"# command: {self.command}\n")
        for key in ("argv", "params", "fields"):
            buf.write(f"# {key}: {json.dumps(getattr(self, key))}\n")
        writer = csv.writer(buf, lineterminator="\n")
        if self.columns:
            writer.writerow(self.columns)
            writer.writerows(self.rows)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "OutputRecord":
        header = {}
        body = []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                header[key] = value
            elif line:
                body.append(line)
        rows = list(csv.reader(body))
        obj = {
            "schema_version": header.get("schema_version"),
            "command": header.get("command"),
            "argv": json.loads(header.get("argv", "null")),
            "params": json.loads(header.get("params", "null")),
            "fields": json.loads(header.get("fields", "null")),
            "columns": rows[0] if rows else [],
            "rows": rows[1:],
        }
        return cls.from_dict(obj)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")
