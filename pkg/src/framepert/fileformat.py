"""JSON family files.

    {"dimension": 3,
     "vectors": [[1, 0, 0], ...],
     "dual": [[...], ...],          # optional, same count as vectors
     "functionals": [[...], ...],   # optional, same count as vectors
     "p": 2}                        # optional, 1, 2 or "inf"

Floats are written with ``repr``, which round-trips every double exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .hilbert import VectorFamily
from .schauder import SchauderFramePair

__all__ = ["FamilyFile", "load_family_file", "parse_family", "dump_family_file"]


@dataclass
class FamilyFile:
    dimension: int
    vectors: np.ndarray
    dual: np.ndarray | None = None
    functionals: np.ndarray | None = None
    p: float = 2

    def family(self) -> VectorFamily:
        return VectorFamily(self.vectors, self.dimension)

    def dual_family(self) -> VectorFamily | None:
        return None if self.dual is None else VectorFamily(self.dual, self.dimension)

    def functional_family(self) -> VectorFamily | None:
        return None if self.functionals is None else VectorFamily(self.functionals, self.dimension)

    def pair(self, p=None) -> SchauderFramePair:
        if self.functionals is None:
            raise ParseError("a Schauder frame needs 'functionals'", "functionals")
        return SchauderFramePair(self.vectors, self.functionals, self.p if p is None else p)

    def to_json(self) -> dict:
        out = {"dimension": self.dimension, "vectors": self.vectors.tolist()}
        if self.dual is not None:
            out["dual"] = self.dual.tolist()
        if self.functionals is not None:
            out["functionals"] = self.functionals.tolist()
        if self.p != 2:
            out["p"] = "inf" if self.p == math.inf else int(self.p)
        return out


def _rows(obj, key, dim, count=None):
    rows = obj[key]
    if not isinstance(rows, list) or not rows:
        raise ParseError("must be a non-empty list of rows", key)
    if count is not None and len(rows) != count:
        raise ParseError(f"has {len(rows)} rows, expected {count} to match 'vectors'", key)
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise ParseError("row is not a list", f"{key}[{i}]")
        if len(row) != dim:
            raise ParseError(f"row has length {len(row)}, expected dimension {dim}", f"{key}[{i}]")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParseError(f"not a finite number: {v!r}", f"{key}[{i}][{j}]")
    return np.array(rows, dtype=float)


def parse_family(text: str) -> FamilyFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object", "line 1")
    for key in ("dimension", "vectors"):
        if key not in obj:
            raise ParseError("missing required field", key)
    dim = obj["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError(f"must be a positive integer, got {dim!r}", "dimension")
    vectors = _rows(obj, "vectors", dim)
    dual = _rows(obj, "dual", dim, len(vectors)) if obj.get("dual") is not None else None
    funcs = _rows(obj, "functionals", dim, len(vectors)) if obj.get("functionals") is not None else None
    p = obj.get("p", 2)
    if p == "inf":
        p = math.inf
    elif p not in (1, 2) or isinstance(p, bool):
        raise ParseError(f"must be 1, 2 or \"inf\", got {p!r}", "p")
    return FamilyFile(dim, vectors, dual, funcs, p)


def load_family_file(path) -> FamilyFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from exc
    try:
        return parse_family(text)
    except ParseError as exc:
        raise ParseError(str(exc), str(path)) from exc


def dump_family_file(path, ff: FamilyFile):
    Path(path).write_text(json.dumps(ff.to_json(), indent=1) + "\n", encoding="utf-8")
