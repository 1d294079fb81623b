"""Catalog of built-in matrices and the JSON matrix file format.

Every built-in lives as a JSON document under ``lfikit/data``, in the same
format accepted by :func:`load_matrix`, so the shipped tables can be
audited cell by cell against their printed sources.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .matrices import BINARY, CONNECTIVES, UNARY, MatrixError, MatrixLogic

__all__ = [
    "CatalogEntry", "CATALOG", "builtin", "builtin_keys", "catalog_entry",
    "load_matrix", "save_matrix", "matrix_from_dict", "matrix_to_dict",
    "lookup", "available_keys", "REGISTRY_ENV", "with_incons_complement",
]

REGISTRY_ENV = "MVL_REGISTRY_PATH"

# key -> where the tables are printed, in catalog order
CATALOG: dict[str, str] = json.loads(
    resources.files("lfikit").joinpath("data", "catalog.json").read_text(encoding="utf-8"))


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    logic: MatrixLogic
    provenance: str


def builtin_keys() -> list[str]:
    return list(CATALOG)


def _data_text(key: str) -> str:
    return resources.files("lfikit").joinpath("data", f"{key}.json").read_text(encoding="utf-8")


def builtin(key: str) -> MatrixLogic:
    """A fresh copy of the named catalog matrix."""
    k = key.strip().lower()
    if k not in CATALOG:
        raise KeyError(f"unknown matrix {key!r}; available: {', '.join(CATALOG)}")
    return matrix_from_dict(json.loads(_data_text(k)))


def catalog_entry(key: str) -> CatalogEntry:
    k = key.strip().lower()
    return CatalogEntry(k, builtin(k), CATALOG[k] if k in CATALOG else "")


# ------------------------------------------------------------------ format

def _fail(msg: str) -> MatrixError:
    return MatrixError(f"malformed document: {msg}")


def matrix_from_dict(doc: Any) -> MatrixLogic:
    if not isinstance(doc, dict):
        raise _fail("top level must be an object")
    for field_ in ("name", "values", "designated", "tables"):
        if field_ not in doc:
            raise _fail(f"missing field {field_!r}")
    name, values, designated, tables = doc["name"], doc["values"], doc["designated"], doc["tables"]
    if not isinstance(name, str):
        raise _fail("'name' must be a string")
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise _fail("'values' must be a list of strings")
    if len(set(values)) != len(values):
        raise _fail("duplicate value labels")
    if not isinstance(designated, list) or not all(isinstance(v, str) for v in designated):
        raise _fail("'designated' must be a list of strings")
    if not isinstance(tables, dict):
        raise _fail("'tables' must be an object")
    index = {v: i for i, v in enumerate(values)}
    n = len(values)
    if any(d not in index for d in designated):
        raise MatrixError("designated out of range")

    def cell(x: Any, conn: str) -> int:
        if not isinstance(x, str) or x not in index:
            raise MatrixError(f"table {conn!r}: unknown value {x!r}")
        return index[x]

    out: dict[str, Any] = {}
    for conn, table in tables.items():
        if conn not in CONNECTIVES:
            raise _fail(f"unknown connective {conn!r}")
        if not isinstance(table, list):
            raise _fail(f"table {conn!r} must be a list")
        if conn in UNARY:
            if len(table) != n or any(isinstance(x, list) for x in table):
                raise MatrixError("table size mismatch")
            out[conn] = [cell(x, conn) for x in table]
        else:
            if len(table) != n or any(not isinstance(r, list) or len(r) != n for r in table):
                raise MatrixError("table size mismatch")
            out[conn] = [[cell(x, conn) for x in row] for row in table]
    return MatrixLogic(name, tuple(values), frozenset(index[d] for d in designated), out)


def matrix_to_dict(L: MatrixLogic) -> dict:
    lab = L.values
    tables: dict[str, Any] = {}
    for conn, t in L.tables.items():
        if conn in BINARY:
            tables[conn] = [[lab[x] for x in row] for row in t]
        else:
            tables[conn] = [lab[x] for x in t]
    return {
        "name": L.name,
        "values": list(lab),
        "designated": [lab[i] for i in sorted(L.designated)],
        "tables": tables,
    }


def load_matrix(path: str | os.PathLike) -> MatrixLogic:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise _fail(str(exc)) from None
    return matrix_from_dict(doc)


def save_matrix(L: MatrixLogic, path: str | os.PathLike) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(L), indent=1, ensure_ascii=False) + "\n",
                          encoding="utf-8")


# ---------------------------------------------------------------- lookup

def _user_dirs() -> list[Path]:
    raw = os.environ.get(REGISTRY_ENV, "")
    return [Path(p) for p in raw.split(os.pathsep) if p]


def _user_file(key: str) -> Path | None:
    for d in _user_dirs():
        cand = d / f"{key}.json"
        if cand.is_file():
            return cand
    return None


def lookup(key: str) -> MatrixLogic:
    """Resolve a key through user directories, 8K codes and the catalog.

    ``8k:<code>`` builds the three-valued family member with that code; a
    path to a ``.json`` file is loaded directly; user directories listed in
    ``MVL_REGISTRY_PATH`` take precedence over built-ins.
    """
    k = key.strip()
    user = _user_file(k)
    if user is not None:
        return load_matrix(user)
    if k.lower().startswith("8k:"):
        from .eightk import build_logic
        return build_logic(int(k[3:], 0))
    if os.path.sep in k or k.endswith(".json"):
        return load_matrix(k)
    return builtin(k)


def available_keys() -> list[str]:
    keys: list[str] = []
    for d in _user_dirs():
        if d.is_dir():
            keys.extend(sorted(p.stem for p in d.glob("*.json")))
    keys.extend(k for k in CATALOG if k not in keys)
    return keys


def with_incons_complement(L: MatrixLogic) -> MatrixLogic:
    """Add an inconsistency table by negating the consistency table pointwise.

    Designated outputs of the consistency table become the (first)
    undesignated value and vice versa; on three values this is the
    table used when a printed matrix gives only the consistency column.
    """
    cons = L.table("cons")
    und = min(i for i in range(L.n) if i not in L.designated)
    top = min(L.designated)
    return L.with_tables(incons=[und if int(c) in L.designated else top for c in cons])
