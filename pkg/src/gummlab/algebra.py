"""Finite algebras given by operation tables, and their homomorphisms.

Every algebra has universe ``{0..n-1}``.  An operation of arity ``k`` is a
``k``-dimensional integer table.  Everything here is immutable; derived data
is cached on first use.

In a variety of finite algebras the regular epimorphisms are exactly the
surjective homomorphisms, so "surjective" is used throughout wherever the
categorical statements say "regular epimorphism".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError
from .partition import Partition
from .relcalc import BinRel


@dataclass(frozen=True)
class Signature:
    """Ordered list of ``(symbol, arity)`` pairs."""

    operations: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        ops = tuple((str(s), int(k)) for s, k in self.operations)
        object.__setattr__(self, "operations", ops)
        symbols = [s for s, _ in ops]
        if len(set(symbols)) != len(symbols):
            raise InputError(f"duplicate operation symbols in {symbols}")
        for s, k in ops:
            if k < 0:
                raise InputError(f"operation {s!r} has negative arity {k}")

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.operations)

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.operations)

    def has_constants(self) -> bool:
        return 0 in self.arities

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    def __len__(self) -> int:
        return len(self.operations)


GROUP_SIGNATURE = Signature((("mul", 2), ("inv", 1), ("e", 0)))
LATTICE_SIGNATURE = Signature((("join", 2), ("meet", 2)))
EMPTY_SIGNATURE = Signature(())


def _freeze(table) -> np.ndarray:
    arr = np.array(table, dtype=np.intp)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    name: str
    size: int
    signature: Signature
    tables: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InputError(f"algebra {self.name!r}: size must be positive")
        if len(self.tables) != len(self.signature):
            raise InputError(
                f"algebra {self.name!r}: {len(self.tables)} tables for "
                f"{len(self.signature)} operations"
            )
        frozen = []
        for (sym, k), t in zip(self.signature.operations, self.tables):
            arr = _freeze(t)
            if arr.shape != (self.size,) * k:
                raise InputError(
                    f"algebra {self.name!r}: table {sym!r} has shape {arr.shape}, "
                    f"expected {(self.size,) * k}"
                )
            if arr.size and (arr.min() < 0 or arr.max() >= self.size):
                raise InputError(f"algebra {self.name!r}: table {sym!r} has entries outside [0, {self.size})")
            frozen.append(arr)
        object.__setattr__(self, "tables", tuple(frozen))

    @cached_property
    def _key(self) -> tuple:
        return (self.size, self.signature, tuple(t.tobytes() for t in self.tables))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name!r}, size={self.size})"

    def table(self, symbol: str) -> np.ndarray:
        return self.tables[self.signature.index(symbol)]

    @cached_property
    def lists(self) -> tuple:
        """Tables as nested Python lists, for tight scalar loops."""
        return tuple(t.tolist() for t in self.tables)

    @property
    def elements(self) -> range:
        return range(self.size)


def trivial_algebra(signature: Signature, name: str = "1") -> FiniteAlgebra:
    return FiniteAlgebra(name, 1, signature, tuple(np.zeros((1,) * k, dtype=np.intp) for k in signature.arities))


def _check_map(source: FiniteAlgebra, target: FiniteAlgebra, mapping: Sequence[int]) -> np.ndarray:
    m = np.asarray(mapping, dtype=np.intp)
    if m.shape != (source.size,):
        raise InputError(f"map has length {m.size}, expected {source.size}")
    if m.size and (m.min() < 0 or m.max() >= target.size):
        raise InputError(f"map values must lie in [0, {target.size})")
    return m


def _commutes(source: FiniteAlgebra, target: FiniteAlgebra, m: np.ndarray) -> bool:
    for (_, k), ts, tt in zip(source.signature.operations, source.tables, target.tables):
        lhs = m[ts]
        rhs = tt[np.ix_(*([m] * k))] if k else tt
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_homomorphism(source: FiniteAlgebra, target: FiniteAlgebra, mapping: Sequence[int]) -> bool:
    if source.signature != target.signature:
        raise InputError("source and target have different signatures")
    return _commutes(source, target, _check_map(source, target, mapping))


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    map: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))
        if not is_homomorphism(self.source, self.target, self.map):
            raise InputError(
                f"map {self.source.name} -> {self.target.name} does not preserve the operations"
            )

    @classmethod
    def _trusted(cls, source: FiniteAlgebra, target: FiniteAlgebra, mapping: Iterable[int]) -> "Homomorphism":
        h = object.__new__(cls)
        object.__setattr__(h, "source", source)
        object.__setattr__(h, "target", target)
        object.__setattr__(h, "map", tuple(int(v) for v in mapping))
        return h

    def __call__(self, a: int) -> int:
        return self.map[a]

    def __matmul__(self, other: "Homomorphism") -> "Homomorphism":
        """``g @ f`` is the composite ``g∘f`` (apply ``f`` first)."""
        if other.target != self.source:
            raise InputError(f"cannot compose {other.source.name}->{other.target.name} "
                             f"with {self.source.name}->{self.target.name}")
        return Homomorphism._trusted(other.source, self.target, (self.map[a] for a in other.map))

    @cached_property
    def array(self) -> np.ndarray:
        return _freeze(self.map)

    @cached_property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.map)))

    def is_surjective(self) -> bool:
        return len(self.image) == self.target.size

    def is_injective(self) -> bool:
        return len(self.image) == self.source.size

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def is_identity(self) -> bool:
        return self.source == self.target and self.map == tuple(range(self.source.size))

    def __repr__(self) -> str:
        return f"Hom({self.source.name} -> {self.target.name}, {list(self.map)})"


def identity(a: FiniteAlgebra) -> Homomorphism:
    return Homomorphism._trusted(a, a, range(a.size))


@dataclass(frozen=True)
class SplitEpi:
    epi: Homomorphism
    section: Homomorphism

    def __post_init__(self) -> None:
        if self.section.source != self.epi.target or self.section.target != self.epi.source:
            raise InputError("section must go from the epi's target back to its source")
        if not (self.epi @ self.section).is_identity():
            raise InputError("epi ∘ section is not the identity")


# --------------------------------------------------------------- congruences


def is_compatible(a: FiniteAlgebra, part: Partition) -> bool:
    """Whether an equivalence on the universe is compatible with every operation."""
    if part.size != a.size:
        raise InputError(f"partition on {part.size} points for algebra of size {a.size}")
    lab = part.labels
    rep_of = np.array(part.representatives, dtype=np.intp)[lab]
    for k, t in zip(a.signature.arities, a.tables):
        base = lab[t]
        for j in range(k):
            if not np.array_equal(base, lab[np.take(t, rep_of, axis=j)]):
                return False
    return True


@dataclass(frozen=True)
class Congruence:
    algebra: FiniteAlgebra
    partition: Partition

    def __post_init__(self) -> None:
        if not is_compatible(self.algebra, self.partition):
            raise InputError(f"{self.partition} is not a congruence of {self.algebra.name}")

    @classmethod
    def _trusted(cls, algebra: FiniteAlgebra, partition: Partition) -> "Congruence":
        c = object.__new__(cls)
        object.__setattr__(c, "algebra", algebra)
        object.__setattr__(c, "partition", partition)
        return c

    @classmethod
    def from_blocks(cls, algebra: FiniteAlgebra, blocks: Iterable[Iterable[int]]) -> "Congruence":
        return cls(algebra, Partition.from_blocks(blocks, algebra.size))

    @classmethod
    def delta(cls, algebra: FiniteAlgebra) -> "Congruence":
        return cls._trusted(algebra, Partition.discrete(algebra.size))

    @classmethod
    def nabla(cls, algebra: FiniteAlgebra) -> "Congruence":
        return cls._trusted(algebra, Partition.indiscrete(algebra.size))

    @property
    def relation(self) -> BinRel:
        return self.partition.relation

    @property
    def matrix(self) -> np.ndarray:
        return self.partition.matrix

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return self.partition.blocks

    def related(self, a: int, b: int) -> bool:
        return self.partition.related(a, b)

    def _same(self, other: "Congruence") -> None:
        if self.algebra != other.algebra:
            raise InputError("congruences live on different algebras")

    def __le__(self, other: "Congruence") -> bool:
        self._same(other)
        return self.partition.leq(other.partition)

    def __and__(self, other: "Congruence") -> "Congruence":
        self._same(other)
        return Congruence._trusted(self.algebra, self.partition.meet(other.partition))

    def __or__(self, other: "Congruence") -> "Congruence":
        self._same(other)
        return Congruence._trusted(self.algebra, self.partition.join(other.partition))

    def __str__(self) -> str:
        return f"{{{self.partition}}}"


def kernel_pair(f: Homomorphism) -> Congruence:
    """``R_f``: the congruence identifying elements with equal images."""
    return Congruence._trusted(f.source, Partition.from_labels(f.map))


# ------------------------------------------------------------- constructions


def _check_signature(a: FiniteAlgebra, b: FiniteAlgebra) -> None:
    if a.signature != b.signature:
        raise InputError(f"signature mismatch between {a.name} and {b.name}")


def product(a: FiniteAlgebra, b: FiniteAlgebra, name: str | None = None):
    """Direct product; element ``(x, y)`` has index ``x * |B| + y``."""
    _check_signature(a, b)
    nb = b.size
    n = a.size * nb
    tables = []
    for k, ta, tb in zip(a.signature.arities, a.tables, b.tables):
        if k == 0:
            tables.append(ta * nb + tb)
            continue
        idx = np.indices((n,) * k)
        tables.append(ta[tuple(idx // nb)] * nb + tb[tuple(idx % nb)])
    p = FiniteAlgebra(name or f"{a.name}x{b.name}", n, a.signature, tuple(tables))
    proj1 = Homomorphism._trusted(p, a, (i // nb for i in range(n)))
    proj2 = Homomorphism._trusted(p, b, (i % nb for i in range(n)))
    return p, proj1, proj2


def closure(a: FiniteAlgebra, seed: Iterable[int]) -> tuple[int, ...]:
    """Least subuniverse containing ``seed``, as a sorted tuple."""
    mask = np.zeros(a.size, dtype=bool)
    seed = list(seed)
    if seed:
        mask[np.asarray(seed, dtype=np.intp)] = True
    for k, t in zip(a.signature.arities, a.tables):
        if k == 0:
            mask[int(t)] = True
    while True:
        idx = np.flatnonzero(mask)
        new = mask.copy()
        for k, t in zip(a.signature.arities, a.tables):
            if k and idx.size:
                new[t[np.ix_(*([idx] * k))].ravel()] = True
        if np.array_equal(new, mask):
            return tuple(int(i) for i in idx)
        mask = new


def subalgebra(a: FiniteAlgebra, elements: Iterable[int], name: str | None = None):
    """Restrict ``a`` to a subuniverse; returns ``(S, inclusion)``."""
    elems = sorted(set(int(e) for e in elements))
    if not elems:
        raise InputError("a subalgebra needs at least one element")
    if elems[0] < 0 or elems[-1] >= a.size:
        raise InputError("subuniverse elements out of range")
    relabel = np.full(a.size, -1, dtype=np.intp)
    relabel[elems] = np.arange(len(elems))
    ix = np.array(elems, dtype=np.intp)
    tables = []
    for (sym, k), t in zip(a.signature.operations, a.tables):
        sub = t[np.ix_(*([ix] * k))] if k else t
        out = relabel[sub]
        if (out < 0).any():
            raise InputError(f"{elems} is not closed under {sym!r}")
        tables.append(out)
    s = FiniteAlgebra(name or f"{a.name}[{len(elems)}]", len(elems), a.signature, tuple(tables))
    return s, Homomorphism._trusted(s, a, elems)


def subalgebra_generated(a: FiniteAlgebra, seed: Iterable[int], name: str | None = None):
    seed = list(seed)
    if any(not 0 <= e < a.size for e in seed):
        raise InputError("seed elements out of range")
    if not seed and not a.signature.has_constants():
        raise InputError("empty seed generates the empty set in a signature without constants")
    return subalgebra(a, closure(a, seed), name)


def quotient(a: FiniteAlgebra, theta: Congruence | Partition, name: str | None = None):
    """``A/θ`` with blocks indexed by least representative; returns ``(Q, proj)``."""
    part = theta.partition if isinstance(theta, Congruence) else theta
    if isinstance(theta, Congruence) and theta.algebra != a:
        raise InputError("congruence belongs to a different algebra")
    if not is_compatible(a, part):
        raise InputError(f"{part} is not compatible with the operations of {a.name}")
    lab = part.labels
    reps = np.array(part.representatives, dtype=np.intp)
    tables = []
    for k, t in zip(a.signature.arities, a.tables):
        tables.append(lab[t[np.ix_(*([reps] * k))]] if k else lab[t])
    q = FiniteAlgebra(name or f"{a.name}/~{part.num_blocks}", part.num_blocks, a.signature, tuple(tables))
    return q, Homomorphism._trusted(a, q, part.block_id)


def image_factorization(f: Homomorphism):
    """Factor ``f = m∘p`` with ``p`` onto the image subalgebra and ``m`` its inclusion."""
    img, m = subalgebra(f.target, f.image, name=f"im({f.target.name})")
    pos = {b: i for i, b in enumerate(f.image)}
    p = Homomorphism._trusted(f.source, img, (pos[b] for b in f.map))
    return p, m


# ------------------------------------------------------ homomorphism search


@lru_cache(maxsize=None)
def generating_set(a: FiniteAlgebra) -> tuple[int, ...]:
    """A small generating set: exact minimum for size <= 16, greedy above."""
    full = a.size
    if len(closure(a, ())) == full:
        return ()
    if full <= 16:
        for r in range(1, min(3, full) + 1):
            for combo in itertools.combinations(range(full), r):
                if len(closure(a, combo)) == full:
                    return combo
    gens: list[int] = []
    cur = set(closure(a, ())) if a.signature.has_constants() else set()
    while len(cur) < full:
        best, best_cl = -1, None
        for e in range(full):
            if e in cur:
                continue
            cl = closure(a, gens + [e])
            if best_cl is None or len(cl) > len(best_cl):
                best, best_cl = e, cl
        gens.append(best)
        cur = set(best_cl)
    return tuple(gens)


def _extend(a: FiniteAlgebra, b: FiniteAlgebra, gens: Sequence[int], images: Sequence[int],
            candidates) -> list[int] | None:
    """Extend a generator assignment to a homomorphism, or return None on conflict."""
    img = [-1] * a.size
    order: list[int] = []

    def assign(x: int, y: int) -> bool:
        cur = img[x]
        if cur == -1:
            if candidates is not None and y not in candidates[x]:
                return False
            img[x] = y
            order.append(x)
            return True
        return cur == y

    ops = list(zip(a.signature.arities, a.lists, b.lists))
    for k, ta, tb in ops:
        if k == 0 and not assign(ta, tb):
            return None
    for g, y in zip(gens, images):
        if not assign(g, y):
            return None
    i = 0
    while i < len(order):
        e = order[i]
        ie = img[e]
        for k, ta, tb in ops:
            if k == 1:
                if not assign(ta[e], tb[ie]):
                    return None
            elif k == 2:
                ra, rb = ta[e], tb[ie]
                for j in range(i + 1):
                    o = order[j]
                    io = img[o]
                    if not assign(ra[o], rb[io]) or not assign(ta[o][e], tb[io][ie]):
                        return None
            elif k > 2:
                known = order[: i + 1]
                for tup in itertools.product(known, repeat=k):
                    if e not in tup:
                        continue
                    x, y = ta, tb
                    for c in tup:
                        x, y = x[c], y[img[c]]
                    if not assign(x, y):
                        return None
        i += 1
    if len(order) != a.size:
        return None
    return img


def homomorphisms(a: FiniteAlgebra, b: FiniteAlgebra, candidates=None) -> Iterator[Homomorphism]:
    """Enumerate every homomorphism ``a -> b`` in a deterministic order.

    ``candidates`` optionally restricts the image of each element to a set.
    A homomorphism is fixed by the images of a generating set; each
    assignment is propagated through the operation tables and pruned on the
    first conflict.
    """
    _check_signature(a, b)
    if candidates is not None:
        candidates = [frozenset(c) for c in candidates]
    gens = generating_set(a)
    choices = [sorted(candidates[g]) if candidates is not None else range(b.size) for g in gens]
    for images in itertools.product(*choices):
        img = _extend(a, b, gens, images, candidates)
        if img is not None:
            yield Homomorphism._trusted(a, b, img)


@lru_cache(maxsize=4096)
def all_homomorphisms(a: FiniteAlgebra, b: FiniteAlgebra) -> tuple[Homomorphism, ...]:
    return tuple(homomorphisms(a, b))


def surjections(a: FiniteAlgebra, b: FiniteAlgebra) -> Iterator[Homomorphism]:
    if b.size > a.size:
        return
    for h in homomorphisms(a, b):
        if h.is_surjective():
            yield h


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> Homomorphism | None:
    if a.size != b.size or a.signature != b.signature:
        return None
    for h in homomorphisms(a, b):
        if h.is_bijective():
            return h
    return None


def is_isomorphic(a: FiniteAlgebra, b: FiniteAlgebra) -> bool:
    return find_isomorphism(a, b) is not None


def hom_from_function(source: FiniteAlgebra, target: FiniteAlgebra, fn) -> Homomorphism:
    return Homomorphism(source, target, tuple(fn(x) for x in source.elements))


def random_homomorphism(a: FiniteAlgebra, b: FiniteAlgebra, rng, attempts: int = 64) -> Homomorphism | None:
    """Homomorphism from random generator images.

    When every attempt conflicts (common for lattices, where most elements
    are generators) a hom is drawn uniformly from the full enumeration;
    None only if there is no homomorphism at all.
    """
    _check_signature(a, b)
    gens = generating_set(a)
    for _ in range(attempts):
        images = [rng.randrange(b.size) for _ in gens]
        img = _extend(a, b, gens, images, None)
        if img is not None:
            return Homomorphism._trusted(a, b, img)
    homs = all_homomorphisms(a, b)
    return rng.choice(homs) if homs else None
