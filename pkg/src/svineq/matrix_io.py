"""Matrix and witness files.

A matrix is stored as {"rows": [[[re, im], ...], ...]} with every double written
as its shortest round-trip decimal string, so reloading is bit-exact. A file
holds either one matrix or {"matrices": [...], "parameters": {...}}.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import MatrixParseError
from .linalg_core import ComplexMatrix, as_matrix


def _number(value: float) -> str:
    return repr(float(value))


def matrix_to_json(a) -> dict[str, Any]:
    a = as_matrix(a)
    return {"rows": [[[_number(z.real), _number(z.imag)] for z in row] for row in a]}


def _scalar(value: Any, where: str) -> float:
    if isinstance(value, bool):
        raise MatrixParseError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            raise MatrixParseError(f"{where}: cannot parse {value!r} as a number") from None
    raise MatrixParseError(f"{where}: expected a number, got {type(value).__name__}")


def matrix_from_json(obj: Any, label: str = "matrix") -> ComplexMatrix:
    if not isinstance(obj, dict) or "rows" not in obj:
        raise MatrixParseError(f"{label}: expected an object with a 'rows' field")
    rows = obj["rows"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise MatrixParseError(f"{label}: 'rows' must be a non-empty list of lists")
    width = len(rows[0])
    out = np.zeros((len(rows), width), dtype=np.complex128)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise MatrixParseError(f"{label}: row {i} has {len(row)} entries, expected {width}")
        for j, entry in enumerate(row):
            where = f"{label}[{i}][{j}]"
            if isinstance(entry, list):
                if len(entry) != 2:
                    raise MatrixParseError(f"{where}: expected [re, im]")
                out[i, j] = complex(_scalar(entry[0], where), _scalar(entry[1], where))
            else:
                out[i, j] = _scalar(entry, where)
    try:
        return as_matrix(out, label)
    except ValueError as exc:
        raise MatrixParseError(f"{label}: {exc}") from exc


def loads(text: str) -> tuple[list[ComplexMatrix], dict[str, Any]]:
    """Parse a matrix file body into (matrices, parameters)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc

    if isinstance(doc, dict) and "rows" in doc:
        return [matrix_from_json(doc)], {}
    if not isinstance(doc, dict) or not isinstance(doc.get("matrices"), list) or not doc["matrices"]:
        raise MatrixParseError("expected {'rows': ...} or a non-empty {'matrices': [...]}")
    params = doc.get("parameters") or {}
    if not isinstance(params, dict):
        raise MatrixParseError("'parameters' must be an object")
    mats = [matrix_from_json(m, f"matrices[{i}]") for i, m in enumerate(doc["matrices"])]
    return mats, params


def dumps(matrices: Sequence, parameters: dict[str, Any] | None = None) -> str:
    doc: dict[str, Any] = {"matrices": [matrix_to_json(m) for m in matrices]}
    if parameters:
        doc["parameters"] = parameters
    return json.dumps(doc, indent=2)


def read_matrices(path: str | Path) -> tuple[list[ComplexMatrix], dict[str, Any]]:
    return loads(Path(path).read_text(encoding="utf-8"))


def write_matrices(path: str | Path, matrices: Sequence, parameters: dict[str, Any] | None = None) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dumps(matrices, parameters), encoding="utf-8")
    return out
