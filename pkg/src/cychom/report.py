"""Run reports: one document per command, rendered as text or JSON.

The text form is a flat list of ``path = value`` lines produced from the same
nested document as the JSON form, so both always carry identical numbers.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA_VERSION = 1


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


@dataclass
class Report:
    command: str
    params: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    ok: bool = True
    elapsed: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    def finish(self) -> "Report":
        self.elapsed = round(time.perf_counter() - self._t0, 4)
        return self

    def document(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "command": self.command, "ok": self.ok,
                "params": _jsonable(self.params), "results": _jsonable(self.results),
                "elapsed_seconds": self.elapsed}

    def to_json(self) -> str:
        return json.dumps(self.document(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        doc = self.document()
        lines = [f"# {doc['command']} (schema {doc['schema_version']})"]
        lines += [f"{k} = {_scalar(v)}" for k, v in flatten(doc) if k not in ("command", "schema_version")]
        return "\n".join(lines) + "\n"


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    return str(v)


def flatten(doc, prefix: str = ""):
    """Yield (dotted path, leaf value) pairs in document order."""
    if isinstance(doc, dict):
        for k, v in doc.items():
            yield from flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(doc, list):
        if not doc:
            yield prefix, "[]"
        for i, v in enumerate(doc):
            yield from flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, doc


def parse_text(text: str) -> dict:
    """Inverse of the text rendering: {path: value string}."""
    out = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        k, _, v = line.partition(" = ")
        out[k] = v
    return out
