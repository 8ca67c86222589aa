"""Seeded generators and hand-built catalogs of rectangles and cubes.

A rectangle instance is ``P -x-> X -u-> U`` over ``Z -y-> Y -v-> V`` with
verticals ``phi, f, w``.  The generator picks ``f, u, w, y``, derives ``v``,
takes ``P`` to be the canonical pullback of the whole rectangle and then
searches for a comparison ``x``.  Nothing about square 1 or square 2 is
assumed: whether they are pullbacks is left to the checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    all_homomorphisms,
    hom_from_function,
    homomorphisms,
    identity,
)
from .builders import builtin, group_corpus
from .diagram import (
    Cube,
    Rectangle,
    Square,
    identity_cube,
    is_pullback,
    is_pushout,
    pullback,
    split_rectangle_sections,
)
from .errors import GenerationExhausted, InputError
from .galois import extension_cube, find_section

KINDS = ("split", "pushout")


@dataclass(frozen=True)
class RectangleInstance:
    label: str
    rect: Rectangle
    sigma: Homomorphism | None = None
    s: Homomorphism | None = None


def _derive_v(f: Homomorphism, u: Homomorphism, w: Homomorphism) -> Homomorphism | None:
    """The map ``v`` with ``v∘f = w∘u``, if ``w∘u`` is constant on the fibres of ``f``."""
    wu = w @ u
    vmap = [-1] * f.target.size
    for c in range(f.source.size):
        b = f.map[c]
        if vmap[b] == -1:
            vmap[b] = wu.map[c]
        elif vmap[b] != wu.map[c]:
            return None
    return Homomorphism(f.target, w.target, vmap)


def assemble(kind: str, f: Homomorphism, u: Homomorphism, w: Homomorphism,
             y: Homomorphism, label: str = "") -> RectangleInstance | None:
    """Build a rectangle from its outer data, or None if the hypotheses fail.

    ``P`` is the canonical pullback of ``v∘y`` and ``w``; ``x: P -> X`` is
    searched among homomorphisms with ``u∘x`` and ``f∘x`` prescribed.
    """
    if not f.is_surjective():
        return None
    v = _derive_v(f, u, w)
    if v is None or not y.is_surjective():
        return None
    p_alg, top, phi = pullback(w, v @ y)
    if kind == "pushout" and not phi.is_surjective():
        return None
    x_alg = f.source
    cands = [[c for c in range(x_alg.size)
              if f.map[c] == y.map[phi.map[p]] and u.map[c] == top.map[p]]
             for p in range(p_alg.size)]
    if any(not c for c in cands):
        return None
    for x in homomorphisms(p_alg, x_alg, cands):
        if not x.is_surjective():
            continue
        rect = Rectangle(Square(x, phi, f, y), Square(u, f, w, v))
        if kind == "split":
            secs = split_rectangle_sections(rect)
            if secs is not None:
                return RectangleInstance(label, rect, *secs)
        elif rect.square1.all_surjective() and is_pushout(rect.square1):
            return RectangleInstance(label, rect)
    return None


# ------------------------------------------------------------ hand catalog


def _h(src: str, tgt: str, fn: Callable[[int], int]) -> Homomorphism:
    return hom_from_function(builtin(src), builtin(tgt), fn)


def _trivial(src: str) -> Homomorphism:
    return _h(src, "Z1", lambda a: 0)


def _odd(perm: int) -> int:
    # odd permutations of S3 in lexicographic order
    return int(perm in (1, 2, 5))


def _hand_specs() -> list[tuple[str, Homomorphism, Homomorphism, Homomorphism, Homomorphism]]:
    # (label, f, u, w, y); product indices are a*|B| + b
    return [
        ("V4 -> Z2 under Z4 -> Z2",
         _h("V4", "Z2", lambda a: a // 2), _h("V4", "Z2", lambda a: a % 2),
         _trivial("Z2"), _h("Z4", "Z2", lambda a: a % 2)),
        ("S3xZ2 -> S3 under S3",
         _h("S3xZ2", "S3", lambda a: a // 2), _h("S3xZ2", "Z2", lambda a: a % 2),
         _trivial("Z2"), identity(builtin("S3"))),
        ("D4 -> Z2 (reflection part) over itself under Z4",
         _h("D4", "Z2", lambda a: a // 4), identity(builtin("D4")),
         _h("D4", "Z2", lambda a: a // 4), _h("Z4", "Z2", lambda a: a % 2)),
        ("Z2^3 -> Z2 under Z8",
         _h("Z2^3", "Z2", lambda a: a // 4), _h("Z2^3", "V4", lambda a: a % 4),
         _trivial("V4"), _h("Z8", "Z2", lambda a: a % 2)),
        ("S3xZ2 -> S3 over sign: S3 -> Z2",
         _h("S3xZ2", "S3", lambda a: a // 2), _h("S3xZ2", "V4", lambda a: 2 * _odd(a // 2) + a % 2),
         _h("V4", "Z2", lambda a: a // 2), identity(builtin("S3"))),
        ("V4 -> Z2 over Z2 under Z6",
         _h("V4", "Z2", lambda a: a // 2), _h("V4", "V4", lambda a: a),
         _h("V4", "Z2", lambda a: a // 2), _h("Z6", "Z2", lambda a: a % 2)),
        # not split, so only usable as a pushout instance
        ("Z4 -> Z2 (not split) over itself under Z8",
         _h("Z4", "Z2", lambda a: a % 2), identity(builtin("Z4")),
         _h("Z4", "Z2", lambda a: a % 2), _h("Z8", "Z2", lambda a: a % 2)),
    ]


@lru_cache(maxsize=None)
def hand_rectangles(kind: str) -> tuple[RectangleInstance, ...]:
    """Fixed nontrivial instances, each built and filtered like generated ones."""
    if kind not in KINDS:
        raise InputError(f"unknown rectangle kind {kind!r}")
    out = []
    for label, f, u, w, y in _hand_specs():
        inst = assemble(kind, f, u, w, y, label=label)
        if inst is not None:
            out.append(inst)
    return tuple(out)


# --------------------------------------------------------------- generator


@lru_cache(maxsize=None)
def _pools(max_order: int):
    groups = tuple(group_corpus(max_order))
    onto = [f for x_alg in groups for y_alg in groups
            for f in all_homomorphisms(x_alg, y_alg) if f.is_surjective()]
    middles = {"split": [f for f in onto if find_section(f) is not None], "pushout": onto}
    surjs: dict[FiniteAlgebra, list[Homomorphism]] = {}
    for y_alg in groups:
        surjs[y_alg] = [h for h in onto if h.target == y_alg]
    return groups, middles, surjs


def generate_rectangles(kind: str, seed: int = 1, budget: int = 1000, max_order: int = 8,
                        include_catalog: bool = True) -> Iterator[RectangleInstance]:
    """Deterministic stream of rectangles satisfying the hypotheses of ``kind``.

    Each hand-catalog instance and each random attempt uses one unit of
    budget.  Raises GenerationExhausted if the budget yields nothing.
    """
    if kind not in KINDS:
        raise InputError(f"unknown rectangle kind {kind!r}")
    if budget <= 0:
        return
    used = emitted = 0
    if include_catalog:
        for inst in hand_rectangles(kind):
            if used >= budget:
                return
            used += 1
            emitted += 1
            yield inst
    groups, middles, surjs = _pools(max_order)
    rng = random.Random(seed)
    while used < budget:
        used += 1
        f = rng.choice(middles[kind])
        u = rng.choice(all_homomorphisms(f.source, rng.choice(groups)))
        ws = [w for w in all_homomorphisms(u.target, rng.choice(groups)) if w.is_surjective()]
        if not ws:
            continue
        w = rng.choice(ws)
        y = rng.choice(surjs[f.target])
        inst = assemble(kind, f, u, w, y, label=f"{kind} seed={seed} #{used}")
        if inst is not None:
            emitted += 1
            yield inst
    if emitted == 0:
        raise GenerationExhausted(f"no {kind} instance within budget {budget}")


# ----------------------------------------------------------------- cubes


def cube_catalog() -> list[tuple[str, Cube]]:
    """Cubes of the extension construction, plus the identity cube."""
    out = [("identity cube on S3", identity_cube(builtin("S3")))]
    specs = [
        ("S3xZ2 -> S3, y = identity", _h("S3xZ2", "S3", lambda a: a // 2), None),
        ("S3xZ2 -> S3, y = f", _h("S3xZ2", "S3", lambda a: a // 2), "f"),
        ("V4 -> Z2, y = mod 2 on Z4", _h("V4", "Z2", lambda a: a // 2), _h("Z4", "Z2", lambda a: a % 2)),
        ("Z2xQ8 -> Q8, y = identity", _h("Z2xQ8", "Q8", lambda a: a % 8), None),
        ("Z6 -> Z3, y = f", _h("Z6", "Z3", lambda a: a % 3), "f"),
    ]
    for label, f, y in specs:
        if y is None:
            y = identity(f.target)
        elif y == "f":
            y = f
        out.append((label, extension_cube(f, find_section(f), y)))
    return out


def is_whole_pullback(rect: Rectangle) -> bool:
    return is_pullback(rect.whole)


def nontrivial(instances: Sequence[RectangleInstance]) -> list[RectangleInstance]:
    return [i for i in instances if i.rect.is_nontrivial()]
