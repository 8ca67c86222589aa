"""JSON file formats for algebras, homomorphisms and diagrams.

Algebra document::

    {"name": "Z3", "size": 3,
     "operations": [{"symbol": "mul", "arity": 2, "table": [[0,1,2],[1,2,0],[2,0,1]]},
                    {"symbol": "inv", "arity": 1, "table": [0,2,1]},
                    {"symbol": "e", "arity": 0, "table": 0}]}

A table of arity k is a k-nested array; arity 0 is a bare integer.

Homomorphism document::

    {"source": <algebra ref>, "target": <algebra ref>, "map": [0, 1, 0]}

An algebra reference is a builtin name (``"S3"``), a path ending in
``.json`` relative to the referring file, or an inline algebra document.

Diagram document::

    {"shape": "square" | "rectangle" | "cube",
     "objects": {"X": <algebra ref>, ...},
     "arrows": {"f": {"source": "X", "target": "Y", "map": [...]}, ...},
     "bind": {<position>: <arrow name>, ...},
     "sections": {<section position>: <arrow name>, ...}}

Positions: square ``top left right bottom``; rectangle ``x phi f y u w v``
(sections ``sigma s``); cube ``x a u n y b v m phi f g w`` (sections
``sigma s t i``).  Arrow sources and targets name entries of ``objects``
or builtins.  Every error carries the path of the offending field.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import FiniteAlgebra, Homomorphism, Signature, is_homomorphism
from .builders import builtin
from .diagram import Cube, Rectangle, Square
from .errors import InputError

log = logging.getLogger(__name__)

SQUARE_POSITIONS = ("top", "left", "right", "bottom")
RECTANGLE_POSITIONS = ("x", "phi", "f", "y", "u", "w", "v")
RECTANGLE_SECTIONS = ("sigma", "s")
CUBE_POSITIONS = ("x", "a", "u", "n", "y", "b", "v", "m", "phi", "f", "g", "w")
CUBE_SECTIONS = ("sigma", "s", "t", "i")


class FormatError(InputError):
    def __init__(self, where: str, msg: str):
        self.where = where
        self.msg = msg
        super().__init__(f"{where}: {msg}" if where else msg)


def _in_file(path: Path, fn, *args):
    """Run a parser and prefix any field diagnostic with the file name."""
    try:
        return fn(*args)
    except FormatError as exc:
        if exc.where.startswith(str(path)):
            raise
        raise FormatError(f"{path}: {exc.where}" if exc.where else str(path), exc.msg) from None


def _join(path: str, key: Any) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _get(doc: Any, key: str, path: str, kind: type | None = None) -> Any:
    if not isinstance(doc, dict):
        raise FormatError(path, "expected an object")
    if key not in doc:
        raise FormatError(_join(path, key), "missing field")
    value = doc[key]
    if kind is not None and (not isinstance(value, kind) or (kind is int and isinstance(value, bool))):
        raise FormatError(_join(path, key), f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


_FLAT_LIST = re.compile(r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]")


def dumps(doc: Any) -> str:
    """Indented JSON with integer arrays kept on one line."""
    text = json.dumps(doc, indent=1)
    return _FLAT_LIST.sub(lambda m: "[" + ", ".join(v.strip() for v in m.group(1).split(",")) + "]", text)


# ------------------------------------------------------------------ algebras


def _table(value: Any, arity: int, size: int, path: str) -> np.ndarray:
    def walk(v: Any, depth: int, p: str) -> list | int:
        if depth == 0:
            if not isinstance(v, int) or isinstance(v, bool):
                raise FormatError(p, f"expected an integer, got {type(v).__name__}")
            if not 0 <= v < size:
                raise FormatError(p, f"value {v} out of range 0..{size - 1}")
            return v
        if not isinstance(v, list) or len(v) != size:
            raise FormatError(p, f"expected an array of length {size}")
        return [walk(c, depth - 1, _join(p, i)) for i, c in enumerate(v)]

    return np.asarray(walk(value, arity, path), dtype=np.intp)


def algebra_from_doc(doc: Any, path: str = "") -> FiniteAlgebra:
    name = _get(doc, "name", path, str)
    size = _get(doc, "size", path, int)
    if size < 1:
        raise FormatError(_join(path, "size"), "size must be positive")
    ops = _get(doc, "operations", path, list)
    symbols, tables = [], []
    for i, op in enumerate(ops):
        p = _join(_join(path, "operations"), i)
        symbol = _get(op, "symbol", p, str)
        arity = _get(op, "arity", p, int)
        if arity < 0:
            raise FormatError(_join(p, "arity"), "arity must be non-negative")
        symbols.append((symbol, arity))
        tables.append(_table(_get(op, "table", p), arity, size, _join(p, "table")))
    try:
        sig = Signature(tuple(symbols))
        return FiniteAlgebra(name, size, sig, tuple(tables))
    except InputError as exc:
        raise FormatError(_join(path, "operations"), str(exc)) from None


def algebra_to_doc(a: FiniteAlgebra) -> dict:
    return {
        "name": a.name,
        "size": a.size,
        "operations": [
            {"symbol": s, "arity": k, "table": t.tolist()}
            for (s, k), t in zip(a.signature.operations, a.tables)
        ],
    }


def _warn_override(a: FiniteAlgebra, where: str) -> None:
    """Warn when a file algebra shadows a different builtin of the same name."""
    try:
        known = builtin(a.name)
    except InputError:
        return
    if known != a:
        log.warning("%s: algebra %r from file overrides the builtin of the same name", where, a.name)


def load_algebra(path: str | Path) -> FiniteAlgebra:
    path = Path(path)
    a = _in_file(path, algebra_from_doc, load_json(path), "")
    _warn_override(a, str(path))
    return a


def resolve_algebra(ref: Any, path: str, base: Path | None = None,
                    scope: dict[str, FiniteAlgebra] | None = None) -> FiniteAlgebra:
    """Resolve an algebra reference: scope name, builtin name, ``.json`` path or inline document."""
    if isinstance(ref, dict):
        a = algebra_from_doc(ref, path)
        _warn_override(a, path)
        return a
    if not isinstance(ref, str):
        raise FormatError(path, "expected an algebra name, path or inline document")
    if scope is not None and ref in scope:
        return scope[ref]
    if ref.endswith(".json"):
        target = (base / ref) if base is not None else Path(ref)
        try:
            return load_algebra(target)
        except FormatError as exc:
            raise FormatError(path, str(exc)) from None
    try:
        return builtin(ref)
    except InputError:
        raise FormatError(path, f"unknown algebra {ref!r}") from None


# ------------------------------------------------------------ homomorphisms


def hom_from_doc(doc: Any, path: str = "", base: Path | None = None,
                 scope: dict[str, FiniteAlgebra] | None = None) -> Homomorphism:
    src = resolve_algebra(_get(doc, "source", path), _join(path, "source"), base, scope)
    tgt = resolve_algebra(_get(doc, "target", path), _join(path, "target"), base, scope)
    mp = _get(doc, "map", path, list)
    mpath = _join(path, "map")
    if len(mp) != src.size:
        raise FormatError(mpath, f"expected {src.size} entries, got {len(mp)}")
    for i, v in enumerate(mp):
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < tgt.size:
            raise FormatError(_join(mpath, i), f"value {v!r} out of range 0..{tgt.size - 1}")
    if src.signature != tgt.signature:
        raise FormatError(path, "source and target have different signatures")
    if not is_homomorphism(src, tgt, mp):
        raise FormatError(mpath, f"map is not a homomorphism {src.name} -> {tgt.name}")
    return Homomorphism(src, tgt, mp)


def hom_to_doc(h: Homomorphism) -> dict:
    return {"source": h.source.name, "target": h.target.name, "map": list(h.map)}


def load_hom(path: str | Path) -> Homomorphism:
    path = Path(path)
    return _in_file(path, hom_from_doc, load_json(path), "", path.parent)


# ----------------------------------------------------------------- diagrams


@dataclass
class Diagram:
    shape: str
    arrows: dict[str, Homomorphism]
    bind: dict[str, Homomorphism]
    sections: dict[str, Homomorphism] = field(default_factory=dict)

    def square(self) -> Square:
        return Square(*(self.bind[p] for p in SQUARE_POSITIONS))

    def rectangle(self) -> Rectangle:
        b = self.bind
        return Rectangle(Square(b["x"], b["phi"], b["f"], b["y"]), Square(b["u"], b["f"], b["w"], b["v"]))

    def cube(self) -> Cube:
        kw = {p: self.bind[p] for p in CUBE_POSITIONS}
        kw.update({p: self.sections[p] for p in CUBE_SECTIONS})
        return Cube(**kw)


_SHAPES = {
    "square": (SQUARE_POSITIONS, (), ()),
    "rectangle": (RECTANGLE_POSITIONS, (), RECTANGLE_SECTIONS),
    "cube": (CUBE_POSITIONS, CUBE_SECTIONS, ()),
}


def diagram_from_doc(doc: Any, base: Path | None = None) -> Diagram:
    shape = _get(doc, "shape", "", str)
    if shape not in _SHAPES:
        raise FormatError("shape", f"unknown shape {shape!r} (expected square, rectangle or cube)")
    positions, required_sections, optional_sections = _SHAPES[shape]

    scope: dict[str, FiniteAlgebra] = {}
    objects = doc.get("objects", {})
    if not isinstance(objects, dict):
        raise FormatError("objects", "expected an object")
    for name, ref in objects.items():
        scope[name] = resolve_algebra(ref, _join("objects", name), base, scope)

    arrows_doc = _get(doc, "arrows", "", dict)
    arrows = {name: hom_from_doc(a, _join("arrows", name), base, scope) for name, a in arrows_doc.items()}

    def pick(section: str, names: tuple[str, ...], required: bool) -> dict[str, Homomorphism]:
        given = doc.get(section, {})
        if not isinstance(given, dict):
            raise FormatError(section, "expected an object")
        for key in given:
            if key not in names:
                raise FormatError(_join(section, key), f"unknown position (expected one of {', '.join(names)})")
        out = {}
        for pos in names:
            if pos not in given:
                if required:
                    raise FormatError(_join(section, pos), "missing position")
                continue
            ref = given[pos]
            if ref not in arrows:
                raise FormatError(_join(section, pos), f"unknown arrow {ref!r}")
            out[pos] = arrows[ref]
        return out

    bind = pick("bind", positions, True)
    sections = pick("sections", required_sections or optional_sections, bool(required_sections))
    diagram = Diagram(shape, arrows, bind, sections)
    try:
        {"square": diagram.square, "rectangle": diagram.rectangle, "cube": diagram.cube}[shape]()
    except InputError as exc:
        raise FormatError("bind", str(exc)) from None
    return diagram


def load_diagram(path: str | Path) -> Diagram:
    path = Path(path)
    return _in_file(path, diagram_from_doc, load_json(path), path.parent)


def square_doc(sq: Square) -> dict:
    """Diagram document for a square, with objects named by position."""
    objects = {"P": sq.top.source, "X": sq.top.target, "Z": sq.left.target, "Y": sq.right.target}
    return _doc("square", objects, dict(zip(SQUARE_POSITIONS, sq.edges)), {})


def rectangle_doc(rect: Rectangle, sigma: Homomorphism | None = None, s: Homomorphism | None = None) -> dict:
    x, phi, f, y = rect.square1.edges[0], rect.square1.left, rect.square1.right, rect.square1.bottom
    u, w, v = rect.square2.top, rect.square2.right, rect.square2.bottom
    objects = {"P": x.source, "X": x.target, "Z": phi.target, "Y": f.target, "U": u.target, "V": w.target}
    secs = {k: h for k, h in (("sigma", sigma), ("s", s)) if h is not None}
    return _doc("rectangle", objects, dict(zip(RECTANGLE_POSITIONS, (x, phi, f, y, u, w, v))), secs)


def cube_doc(cube: Cube) -> dict:
    c = cube
    objects = {"P": c.x.source, "X": c.x.target, "A": c.a.target, "U": c.u.target,
               "Z": c.y.source, "Y": c.y.target, "B": c.b.target, "V": c.v.target}
    bind = {p: getattr(c, p) for p in CUBE_POSITIONS}
    return _doc("cube", objects, bind, {p: getattr(c, p) for p in CUBE_SECTIONS})


def _doc(shape: str, objects: dict[str, FiniteAlgebra], bind: dict[str, Homomorphism],
         sections: dict[str, Homomorphism]) -> dict:
    name_of: dict[FiniteAlgebra, str] = {}
    objs = {}
    for label, a in objects.items():
        if a not in name_of:
            name_of[a] = label
            objs[label] = algebra_to_doc(a)
    arrows = {}
    for pos, h in list(bind.items()) + list(sections.items()):
        arrows[pos] = {"source": name_of[h.source], "target": name_of[h.target], "map": list(h.map)}
    return {"shape": shape, "objects": objs, "arrows": arrows,
            "bind": {p: p for p in bind}, "sections": {p: p for p in sections}}
