"""Calculus of binary relations between finite carriers.

A relation from ``A`` to ``B`` is stored as a dense bit matrix: one Python
integer per source element, bit ``b`` of row ``a`` set iff ``(a, b)`` is
related.  Composition follows the categorical convention: ``compose(R, S)``
is the relation written ``SR`` (apply ``R`` first, then ``S``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class BinRel:
    src_size: int
    tgt_size: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.src_size < 1 or self.tgt_size < 1:
            raise InputError("relation carriers must be non-empty")
        if len(self.rows) != self.src_size:
            raise InputError(
                f"relation has {len(self.rows)} rows, expected {self.src_size}"
            )
        limit = 1 << self.tgt_size
        for r in self.rows:
            if r < 0 or r >= limit:
                raise InputError("relation row has bits outside the target carrier")

    # constructors

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], src_size: int, tgt_size: int) -> "BinRel":
        rows = [0] * src_size
        for a, b in pairs:
            if not (0 <= a < src_size and 0 <= b < tgt_size):
                raise InputError(f"pair ({a}, {b}) out of range for sizes ({src_size}, {tgt_size})")
            rows[a] |= 1 << b
        return cls(src_size, tgt_size, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix) -> "BinRel":
        m = np.asarray(matrix, dtype=bool)
        if m.ndim != 2:
            raise InputError("relation matrix must be two-dimensional")
        rows = tuple(sum(1 << int(j) for j in np.flatnonzero(row)) for row in m)
        return cls(m.shape[0], m.shape[1], rows)

    @classmethod
    def identity(cls, n: int) -> "BinRel":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def full(cls, src_size: int, tgt_size: int) -> "BinRel":
        return cls(src_size, tgt_size, ((1 << tgt_size) - 1,) * src_size)

    @classmethod
    def empty(cls, src_size: int, tgt_size: int) -> "BinRel":
        return cls(src_size, tgt_size, (0,) * src_size)

    # views

    def __contains__(self, pair: Sequence[int]) -> bool:
        a, b = pair
        return bool(self.rows[a] >> b & 1)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for a, row in enumerate(self.rows):
            b = 0
            while row:
                if row & 1:
                    yield (a, b)
                row >>= 1
                b += 1

    def __len__(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def to_matrix(self) -> np.ndarray:
        m = np.zeros((self.src_size, self.tgt_size), dtype=bool)
        for a, b in self.pairs():
            m[a, b] = True
        return m

    def is_square(self) -> bool:
        return self.src_size == self.tgt_size

    def is_reflexive(self) -> bool:
        return self.is_square() and all(r >> i & 1 for i, r in enumerate(self.rows))

    def is_symmetric(self) -> bool:
        return self.is_square() and opposite(self) == self

    def is_transitive(self) -> bool:
        return self.is_square() and leq(compose(self, self), self)

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def __repr__(self) -> str:
        return f"BinRel({self.src_size}x{self.tgt_size}, {sorted(self.pairs())})"


def _same_shape(r: BinRel, s: BinRel) -> None:
    if (r.src_size, r.tgt_size) != (s.src_size, s.tgt_size):
        raise InputError(
            f"shape mismatch: {r.src_size}x{r.tgt_size} vs {s.src_size}x{s.tgt_size}"
        )


def of_hom(f) -> BinRel:
    """Graph of a homomorphism (anything with ``source``, ``target``, ``map``)."""
    return of_map(f.map, f.target.size)


def of_hom_op(f) -> BinRel:
    """Opposite of the graph of ``f``, written f° in the relational calculus."""
    return opposite(of_hom(f))


def of_map(mapping: Sequence[int], tgt_size: int) -> BinRel:
    return BinRel(len(mapping), tgt_size, tuple(1 << int(b) for b in mapping))


def compose(r: BinRel, s: BinRel) -> BinRel:
    """The composite ``SR``: ``(a, c)`` related iff some ``b`` has aRb and bSc."""
    if r.tgt_size != s.src_size:
        raise InputError(
            f"cannot compose {r.src_size}x{r.tgt_size} with {s.src_size}x{s.tgt_size}"
        )
    srows = s.rows
    out = []
    for row in r.rows:
        acc = 0
        b = 0
        while row:
            if row & 1:
                acc |= srows[b]
            row >>= 1
            b += 1
        out.append(acc)
    return BinRel(r.src_size, s.tgt_size, tuple(out))


def compose_all(*rels: BinRel) -> BinRel:
    """Compose left to right: ``compose_all(R, S, T)`` is ``TSR``."""
    out = rels[0]
    for r in rels[1:]:
        out = compose(out, r)
    return out


def opposite(r: BinRel) -> BinRel:
    rows = [0] * r.tgt_size
    for a, b in r.pairs():
        rows[b] |= 1 << a
    return BinRel(r.tgt_size, r.src_size, tuple(rows))


def meet(r: BinRel, s: BinRel) -> BinRel:
    _same_shape(r, s)
    return BinRel(r.src_size, r.tgt_size, tuple(a & b for a, b in zip(r.rows, s.rows)))


def union(r: BinRel, s: BinRel) -> BinRel:
    _same_shape(r, s)
    return BinRel(r.src_size, r.tgt_size, tuple(a | b for a, b in zip(r.rows, s.rows)))


def leq(r: BinRel, s: BinRel) -> bool:
    _same_shape(r, s)
    return all(a & ~b == 0 for a, b in zip(r.rows, s.rows))


def transitive_closure(r: BinRel) -> BinRel:
    """Least transitive relation containing ``r``, by squaring to a fixpoint."""
    if not r.is_square():
        raise InputError("transitive closure needs a relation on one carrier")
    cur = r
    while True:
        nxt = union(cur, compose(cur, cur))
        if nxt == cur:
            return cur
        cur = nxt


def eq_join(r: BinRel, s: BinRel) -> BinRel:
    """Join of two equivalence relations in the lattice of equivalences."""
    _same_shape(r, s)
    if not (r.is_equivalence() and s.is_equivalence()):
        raise InputError("eq_join expects two equivalence relations")
    return transitive_closure(union(r, s))


def rel_image(f, r: BinRel) -> BinRel:
    """Direct image ``f R f°`` of a relation on ``f.source`` along ``f``."""
    n = f.source.size
    if (r.src_size, r.tgt_size) != (n, n):
        raise InputError("relation must live on the source of the map")
    m = f.map
    rows = [0] * f.target.size
    for a, b in r.pairs():
        rows[m[a]] |= 1 << m[b]
    return BinRel(f.target.size, f.target.size, tuple(rows))


def verify_map_relation_laws(f) -> dict[str, bool]:
    """Check ``ff°f = f``, ``f°ff° = f°`` and ``ff° = 1 iff f is onto``."""
    g = of_hom(f)
    g_op = opposite(g)
    law1 = compose_all(g, g_op, g) == g
    law2 = compose_all(g_op, g, g_op) == g_op
    ff_op_is_identity = compose(g_op, g) == BinRel.identity(f.target.size)
    surjective = len(set(f.map)) == f.target.size
    return {
        "law1": law1,
        "law2": law2,
        "epi_iff": ff_op_is_identity == surjective,
        "ff_op_identity": ff_op_is_identity,
        "surjective": surjective,
    }


# name used by the command-line and report contract
verify_lemma21 = verify_map_relation_laws
