"""Field spec files: parsing and lookup.

Schema (UTF-8 text, ``key = value`` lines, ``#`` comments):

    name          = Q-sqrt2
    degree        = 2
    basis         = one sqrt2
    mult_table    = 1 0 ; 0 1 ; 0 1 ; 2 0        # row-major over (i, j)
    discriminant  = 8
    embedding_digits = 48
    embeddings    = 1.0 1.414... ; 1.0 -1.414...  # one row per embedding
    units         = 1 1                           # fundamental units, one row each
    class_number  = 1
    tp_basis      = 1 0 ; 2 1                     # totally positive integral basis

Rationals are written ``p`` or ``p/q``; embedding entries are decimal strings
accurate to ``embedding_digits`` places.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .errors import FieldFileError
from .exact import Iv, QQ
from .numberfield import Field, FieldSpec

FIELD_DIR_ENV = "OFORMS_FIELD_DIR"


def _rows(value: str) -> list[list[str]]:
    return [row.split() for row in value.split(";")]


def _decimal_iv(text: str, digits: int) -> Iv:
    try:
        v = QQ(text) if "/" in text else QQ(text.replace(".", "")) / QQ(10) ** max(
            0, len(text.split(".")[1]) if "." in text else 0)
    except (ValueError, ZeroDivisionError, IndexError) as e:
        raise FieldFileError(f"bad embedding entry {text!r}") from e
    tol = QQ(1, 10 ** digits)
    return Iv(v - tol, v + tol)


def parse_field_text(text: str, name_hint: str = "") -> FieldSpec:
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FieldFileError(f"line {lineno}: expected key = value")
        k, v = line.split("=", 1)
        kv[k.strip()] = v.strip()
    try:
        degree = int(kv["degree"])
        basis = tuple(kv["basis"].split())
        disc = int(kv["discriminant"])
        digits = int(kv.get("embedding_digits", "30"))
        mt_rows = _rows(kv["mult_table"])
        emb_rows = _rows(kv["embeddings"])
        class_number = int(kv["class_number"])
        tp_rows = _rows(kv["tp_basis"])
        unit_rows = _rows(kv["units"]) if kv.get("units", "").strip() else []
    except KeyError as e:
        raise FieldFileError(f"missing field key {e.args[0]!r}") from e
    except ValueError as e:
        raise FieldFileError(str(e)) from e
    if len(mt_rows) != degree * degree:
        raise FieldFileError("mult_table must have degree^2 rows")
    mult = tuple(tuple(tuple(QQ(c) for c in mt_rows[i * degree + j])
                       for j in range(degree)) for i in range(degree))
    if len(emb_rows) != degree or any(len(r) != degree for r in emb_rows):
        raise FieldFileError("embeddings must be a degree x degree block")
    embeddings = tuple(tuple(_decimal_iv(x, digits) for x in row) for row in emb_rows)
    units = tuple(tuple(QQ(c) for c in row) for row in unit_rows)
    tp = tuple(tuple(QQ(c) for c in row) for row in tp_rows)
    return FieldSpec(name=kv.get("name", name_hint or "K"),
                     degree=degree, basis_names=basis, mult_table=mult,
                     discriminant=disc, embeddings=embeddings,
                     fundamental_units=units, class_number=class_number,
                     tp_basis=tp)


def load_field(path: str | os.PathLike, **kw) -> Field:
    p = Path(path)
    if not p.exists():
        raise FieldFileError(f"no such field file: {p}")
    return Field(parse_field_text(p.read_text(), p.stem), **kw)


def find_field(name_or_path: str, **kw) -> Field:
    """Resolve a field by path, by env-dir lookup, then by bundled data."""
    p = Path(name_or_path)
    if p.exists():
        return load_field(p, **kw)
    env_dir = os.environ.get(FIELD_DIR_ENV)
    stem = p.stem
    if env_dir:
        cand = Path(env_dir) / f"{stem}.field"
        if cand.exists():
            return load_field(cand, **kw)
    try:
        data = resources.files("oforms").joinpath(f"fields/{stem}.field").read_text()
    except (FileNotFoundError, ModuleNotFoundError) as e:
        raise FieldFileError(f"field {name_or_path!r} not found") from e
    return Field(parse_field_text(data, stem), **kw)


def bundled_field_names() -> list[str]:
    root = resources.files("oforms").joinpath("fields")
    return sorted(p.name[:-6] for p in root.iterdir() if p.name.endswith(".field"))
