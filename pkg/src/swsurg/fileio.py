"""Manifold description files.

The on-disk format is JSON with a fixed schema. Integers may be encoded
as JSON numbers or as decimal strings; strings are mandatory beyond
2^53 - 1 in absolute value so that nothing is ever routed through a
float. Canonical serialization (sorted keys, no whitespace, trailing
newline) is byte-deterministic and is the identity fixed point of
parse-then-serialize.

Schema, version "1":

    {
      "schema_version": "1",
      "manifold": {
        "name": str,
        "chi": int,
        "sigma": int,
        "gram": [[int, ...], ...],          # row-major, symmetric
        "basic_classes": [{"coords": [int, ...], "sw": int}, ...],
        "simple_type": bool
      },
      "surfaces": {
        NAME: {"class": [int, ...], "genus": int, "dual": [int, ...]?}
      }
    }
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .errors import LatticeError, ParseError, ValidationError
from .lattice import IntegerLattice, Vector
from .manifold import BasicClass, FourManifold, SurfaceEmbedding

SCHEMA_VERSION = "1"

# Largest integer exactly representable in an IEEE double (2^53 - 1);
# beyond it JSON numbers are not interoperable, so we switch to strings.
MAX_SAFE_INT = 9007199254740991

_INT_RE = re.compile(r"-?[0-9]+\Z")


@dataclass(frozen=True)
class ManifoldFile:
    schema_version: str
    manifold: FourManifold
    surfaces: dict[str, SurfaceEmbedding] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# decoding


def _fail(msg: str, source: str, path: str) -> ParseError:
    return ParseError(msg, source=source, path=path)


def _dec_int(value, source: str, path: str) -> int:
    if isinstance(value, bool):
        raise _fail("expected an integer, got a boolean", source, path)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        if not _INT_RE.match(value):
            raise _fail(f"not a decimal integer string: {value!r}", source, path)
        return int(value)
    raise _fail(f"expected an integer, got {type(value).__name__}", source, path)


def _dec_vector(value, source: str, path: str) -> Vector:
    if not isinstance(value, list):
        raise _fail(f"expected a list, got {type(value).__name__}", source, path)
    return tuple(_dec_int(v, source, f"{path}[{i}]") for i, v in enumerate(value))


def _dec_str(value, source: str, path: str) -> str:
    if not isinstance(value, str):
        raise _fail(f"expected a string, got {type(value).__name__}", source, path)
    return value


def _dec_bool(value, source: str, path: str) -> bool:
    if not isinstance(value, bool):
        raise _fail(f"expected a boolean, got {type(value).__name__}", source, path)
    return value


def _dec_object(value, source: str, path: str, keys: set[str],
                required: set[str]) -> dict:
    if not isinstance(value, dict):
        raise _fail(f"expected an object, got {type(value).__name__}", source, path)
    for key in value:
        if key not in keys:
            raise _fail(f"unknown key {key!r}", source, path)
    for key in required:
        if key not in value:
            raise _fail(f"missing key {key!r}", source, path)
    return value


def parse(data: bytes | str, source: str = "<data>") -> ManifoldFile:
    """Parse and structurally validate a manifold description.

    Malformed syntax and schema-shape problems raise ParseError with a
    position or path; violations of the model's own invariants (Gram
    symmetry, vector lengths, zero invariants) raise ValidationError
    listing every failure. Manifold-level semantic checks (rank vs chi,
    unimodularity, the square condition) are deliberately not applied
    here so that `validate` can report on files describing them.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, source=source, line=e.lineno, column=e.colno) from None

    top = _dec_object(doc, source, "$", {"schema_version", "manifold", "surfaces"},
                      {"schema_version", "manifold"})
    version = _dec_str(top["schema_version"], source, "$.schema_version")
    if version != SCHEMA_VERSION:
        raise _fail(f"unsupported schema_version {version!r}", source, "$.schema_version")

    m = _dec_object(top["manifold"], source, "$.manifold",
                    {"name", "chi", "sigma", "gram", "basic_classes", "simple_type"},
                    {"name", "chi", "sigma", "gram"})
    name = _dec_str(m["name"], source, "$.manifold.name")
    chi = _dec_int(m["chi"], source, "$.manifold.chi")
    sigma = _dec_int(m["sigma"], source, "$.manifold.sigma")
    gram_raw = m["gram"]
    if not isinstance(gram_raw, list):
        raise _fail("gram must be a list of rows", source, "$.manifold.gram")
    gram = tuple(_dec_vector(row, source, f"$.manifold.gram[{i}]")
                 for i, row in enumerate(gram_raw))
    simple_type = _dec_bool(m.get("simple_type", True), source, "$.manifold.simple_type")

    failures: list[str] = []
    try:
        lattice = IntegerLattice(gram)
    except LatticeError as e:
        raise ValidationError([f"gram: {e}"]) from None

    classes: list[BasicClass] = []
    for i, raw in enumerate(m.get("basic_classes", [])):
        path = f"$.manifold.basic_classes[{i}]"
        obj = _dec_object(raw, source, path, {"coords", "sw"}, {"coords", "sw"})
        coords = _dec_vector(obj["coords"], source, f"{path}.coords")
        sw = _dec_int(obj["sw"], source, f"{path}.sw")
        if len(coords) != lattice.rank:
            failures.append(f"{path}: coords length {len(coords)} != rank {lattice.rank}")
            continue
        try:
            classes.append(BasicClass(coords, sw))
        except ValidationError as e:
            failures.extend(f"{path}: {f}" for f in e.failures)

    surfaces: dict[str, SurfaceEmbedding] = {}
    raw_surfaces = top.get("surfaces", {})
    if not isinstance(raw_surfaces, dict):
        raise _fail("surfaces must be an object keyed by name", source, "$.surfaces")
    for sname in raw_surfaces:
        path = f"$.surfaces[{sname!r}]"
        obj = _dec_object(raw_surfaces[sname], source, path,
                          {"class", "genus", "dual"}, {"class", "genus"})
        sclass = _dec_vector(obj["class"], source, f"{path}.class")
        genus = _dec_int(obj["genus"], source, f"{path}.genus")
        dual = (_dec_vector(obj["dual"], source, f"{path}.dual")
                if "dual" in obj else None)
        if len(sclass) != lattice.rank:
            failures.append(f"{path}: class length {len(sclass)} != rank {lattice.rank}")
            continue
        if dual is not None and len(dual) != lattice.rank:
            failures.append(f"{path}: dual length {len(dual)} != rank {lattice.rank}")
            continue
        try:
            surfaces[sname] = SurfaceEmbedding(sclass, genus, dual)
        except ValidationError as e:
            failures.extend(f"{path}: {f}" for f in e.failures)

    if failures:
        raise ValidationError(failures)

    manifold = FourManifold(name=name, chi=chi, sigma=sigma, lattice=lattice,
                            basic_classes=tuple(classes), simple_type=simple_type)
    return ManifoldFile(version, manifold, surfaces)


def load(path: str | os.PathLike) -> ManifoldFile:
    return parse(Path(path).read_bytes(), source=str(path))


# ---------------------------------------------------------------------------
# encoding


def _enc_int(n: int):
    return n if -MAX_SAFE_INT <= n <= MAX_SAFE_INT else str(n)


def _enc_vector(v: Vector) -> list:
    return [_enc_int(c) for c in v]


def to_document(mf: ManifoldFile) -> dict:
    m = mf.manifold
    doc = {
        "schema_version": mf.schema_version,
        "manifold": {
            "name": m.name,
            "chi": _enc_int(m.chi),
            "sigma": _enc_int(m.sigma),
            "gram": [_enc_vector(row) for row in m.lattice.gram],
            "basic_classes": [{"coords": _enc_vector(bc.k), "sw": _enc_int(bc.sw)}
                              for bc in m.basic_classes],
            "simple_type": m.simple_type,
        },
        "surfaces": {},
    }
    for sname, s in mf.surfaces.items():
        entry = {"class": _enc_vector(s.surface_class), "genus": _enc_int(s.genus)}
        if s.dual_class is not None:
            entry["dual"] = _enc_vector(s.dual_class)
        doc["surfaces"][sname] = entry
    return doc


def serialize(mf: ManifoldFile, canonical: bool = True) -> bytes:
    """Encode to bytes; canonical mode is compact, sorted, newline-terminated."""
    doc = to_document(mf)
    if canonical:
        text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    else:
        text = json.dumps(doc, sort_keys=True, indent=2)
    return (text + "\n").encode("utf-8")


def digest(mf: ManifoldFile) -> str:
    return hashlib.sha256(serialize(mf, canonical=True)).hexdigest()


def write_atomic(path: str | os.PathLike, data: bytes) -> None:
    """Write via a temporary file in the same directory plus rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
