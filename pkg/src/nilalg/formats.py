"""JSON readers and writers for algebras, polynomial maps and reports.

Coefficients are always strings such as "2/3" or "-5"; JSON numbers that are
not integers are rejected so that floats never leak into exact arithmetic.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import MultilinearAlgebra, validate
from .exactmath import MultiPoly, format_rational, parse_rational, variables
from .polymap import PolyMap


class InputError(ValueError):
    """Malformed or invalid input; the message names the offending line or field."""


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _field(obj: Any, key: str, where: str):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    if key not in obj:
        raise InputError(f"{where}: missing field '{key}'")
    return obj[key]


def _int(value: Any, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise InputError(f"{where}: must be >= {minimum}, got {value}")
    return value


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{where}: write rationals as strings like \"2/3\", got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise InputError(f"{where}: expected a rational string, got {value!r}")
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


# -- algebras ----------------------------------------------------------------


def algebra_from_dict(data: Any, source: str = "algebra") -> MultilinearAlgebra:
    arity = _int(_field(data, "arity", source), f"{source}.arity", 2)
    dim = _int(_field(data, "dim", source), f"{source}.dim", 1)
    basis = data.get("basis")
    if basis is not None and (not isinstance(basis, list) or len(basis) != dim
                              or not all(isinstance(b, str) for b in basis)):
        raise InputError(f"{source}.basis: expected {dim} names")
    raw = _field(data, "entries", source)
    if not isinstance(raw, list):
        raise InputError(f"{source}.entries: expected a list")
    entries = []
    for k, e in enumerate(raw):
        where = f"{source}.entries[{k}]"
        inputs = _field(e, "inputs", where)
        if not isinstance(inputs, list) or len(inputs) != arity:
            raise InputError(f"{where}.inputs: expected {arity} indices")
        inputs = tuple(_int(i, f"{where}.inputs", 1) for i in inputs)
        if max(inputs) > dim:
            raise InputError(f"{where}.inputs: index out of range 1..{dim}")
        output = _int(_field(e, "output", where), f"{where}.output", 1)
        if output > dim:
            raise InputError(f"{where}.output: index out of range 1..{dim}")
        entries.append((inputs, output, _rational(_field(e, "value", where), f"{where}.value")))
    try:
        return validate(arity, dim, entries, basis=basis, name=str(data.get("name", Path(source).stem)))
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None


def algebra_to_dict(A: MultilinearAlgebra) -> dict:
    out: dict[str, Any] = {"arity": A.arity, "dim": A.dim}
    if A.name:
        out["name"] = A.name
    if A.basis:
        out["basis"] = list(A.basis)
    out["entries"] = [{"inputs": [i + 1 for i in key], "output": k + 1, "value": format_rational(v)}
                      for key, k, v in A.entries()]
    return out


DATA_DIR = Path(__file__).parent / "data"
CORPUS_ENV = "NILALG_CORPUS"


def corpus_dirs() -> list[Path]:
    extra = os.environ.get(CORPUS_ENV)
    return ([Path(extra)] if extra else []) + [DATA_DIR]


def builtin_names() -> list[str]:
    return sorted({p.stem for d in corpus_dirs() if d.is_dir() for p in d.glob("*.json")})


def load_algebra(spec: str) -> MultilinearAlgebra:
    """Read an algebra from a JSON file, or ``builtin:NAME`` from the corpus directories."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        for d in corpus_dirs():
            path = d / f"{name}.json"
            if path.is_file():
                return algebra_from_dict(_load_json(path.read_text(), str(path)), str(path))
        raise InputError(f"unknown built-in algebra {name!r}; available: {builtin_names()}")
    text = _read(spec)
    return algebra_from_dict(_load_json(text, spec), spec)


# -- polynomial maps ---------------------------------------------------------


def map_from_dict(data: Any, source: str = "map", prefix: str = "X") -> PolyMap:
    n = _int(_field(data, "n", source), f"{source}.n", 1)
    coords = _field(data, "coords", source)
    if not isinstance(coords, list) or len(coords) != n:
        raise InputError(f"{source}.coords: expected {n} coordinate lists")
    vs = variables(prefix, n)
    polys = []
    for i, mons in enumerate(coords):
        where = f"{source}.coords[{i}]"
        if not isinstance(mons, list):
            raise InputError(f"{where}: expected a list of monomials")
        p = MultiPoly.zero(vs)
        for k, m in enumerate(mons):
            w = f"{where}[{k}]"
            exps = _field(m, "exponents", w)
            if not isinstance(exps, list) or len(exps) != n:
                raise InputError(f"{w}.exponents: expected {n} exponents")
            exps = tuple(_int(e, f"{w}.exponents", 0) for e in exps)
            p = p + MultiPoly(vs, {exps: _rational(_field(m, "coeff", w), f"{w}.coeff")})
        polys.append(p)
    return PolyMap(tuple(polys))


def map_to_dict(F: PolyMap) -> dict:
    return {
        "n": F.n,
        "coords": [[{"exponents": list(e), "coeff": format_rational(c)} for e, c in p.sorted_terms()]
                   for p in F.coords],
    }


def load_map(path: str, prefix: str = "X") -> PolyMap:
    return map_from_dict(_load_json(_read(path), path), path, prefix)


# -- documents ---------------------------------------------------------------


def dumps(doc: Any) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
