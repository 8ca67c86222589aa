"""Congruence lattices and the modularity / Shifting Lemma / Gumm battery.

Scans over congruence triples report the first failure in a fixed order:
lattice index of ``R``, then ``S``, then ``T``, then elements ``x, y, t, z``
lexicographically.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Iterable, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from . import relcalc
from .algebra import Congruence, FiniteAlgebra, is_compatible
from .errors import HypothesisViolated, InputError
from .partition import Partition, all_partitions

BRUTE_FORCE_CAP = 8


@dataclass(frozen=True)
class ScanResult:
    """Outcome of an exhaustive scan; truthy iff the property holds."""

    holds: bool
    witness: Any = None
    checked: int = 0
    hypothesis_met: bool = True

    def __bool__(self) -> bool:
        return self.holds


# ---------------------------------------------------------------- generation


def congruence_generated(a: FiniteAlgebra, pairs: Iterable[Sequence[int]]) -> Congruence:
    """Least congruence containing ``pairs``.

    Union-find closure: each pair that causes a merge is pushed through every
    basic translation ``op(c1, .., _, .., ck)`` (operations in signature
    order, positions ascending, other arguments lexicographic) until no new
    merge happens.
    """
    n = a.size
    ds = DisjointSet(range(n))
    queue: deque[tuple[int, int]] = deque()
    for x, y in pairs:
        if not (0 <= x < n and 0 <= y < n):
            raise InputError(f"pair ({x}, {y}) out of range for {a.name}")
        if ds.merge(x, y):
            queue.append((x, y))
    ops = [(k, t) for k, t in zip(a.signature.arities, a.tables) if k > 0]
    while queue:
        x, y = queue.popleft()
        for k, t in ops:
            for j in range(k):
                us = np.take(t, x, axis=j).ravel().tolist()
                vs = np.take(t, y, axis=j).ravel().tolist()
                for u, v in zip(us, vs):
                    if u != v and ds.merge(u, v):
                        queue.append((u, v))
    return Congruence._trusted(a, Partition.from_disjoint_set(ds, n))


def principal_congruence(a: FiniteAlgebra, x: int, y: int) -> Congruence:
    return congruence_generated(a, [(x, y)])


def meet(c1: Congruence, c2: Congruence) -> Congruence:
    return c1 & c2


def join(c1: Congruence, c2: Congruence) -> Congruence:
    out = c1 | c2
    assert is_compatible(out.algebra, out.partition), "join of congruences must be a congruence"
    return out


# ------------------------------------------------------------------- lattice


def _lattice_key(p: Partition) -> tuple:
    return (-p.num_blocks, p.block_id)


@dataclass(frozen=True, eq=False)
class CongruenceLattice:
    algebra: FiniteAlgebra
    elements: tuple[Congruence, ...]
    leq: np.ndarray = field(repr=False)

    @classmethod
    def from_partitions(cls, algebra: FiniteAlgebra, parts: Iterable[Partition]) -> "CongruenceLattice":
        uniq = sorted(set(parts), key=_lattice_key)
        elems = tuple(Congruence._trusted(algebra, p) for p in uniq)
        k = len(elems)
        order = np.zeros((k, k), dtype=bool)
        for i, j in itertools.product(range(k), repeat=2):
            order[i, j] = uniq[i].leq(uniq[j])
        order.setflags(write=False)
        return cls(algebra, elems, order)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> Congruence:
        return self.elements[i]

    @cached_property
    def _index(self) -> dict[Partition, int]:
        return {c.partition: i for i, c in enumerate(self.elements)}

    def index(self, c: Congruence | Partition) -> int:
        p = c.partition if isinstance(c, Congruence) else c
        return self._index[p]

    @cached_property
    def meet_table(self) -> np.ndarray:
        return self._table(lambda p, q: p.meet(q))

    @cached_property
    def join_table(self) -> np.ndarray:
        return self._table(lambda p, q: p.join(q))

    def _table(self, op) -> np.ndarray:
        k = len(self)
        t = np.zeros((k, k), dtype=np.intp)
        for i in range(k):
            for j in range(i, k):
                t[i, j] = t[j, i] = self._index[op(self[i].partition, self[j].partition)]
        t.setflags(write=False)
        return t

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self) - 1

    def dump(self) -> dict:
        """Canonical, stable serialisation: block lists plus the order matrix."""
        return {
            "algebra": self.algebra.name,
            "congruences": [[list(b) for b in c.blocks] for c in self.elements],
            "leq": self.leq.astype(int).tolist(),
        }


def brute_force_congruences(a: FiniteAlgebra) -> list[Partition]:
    """Filter every partition of the universe by compatibility (oracle)."""
    return [p for p in all_partitions(a.size) if is_compatible(a, p)]


def principal_join_congruences(a: FiniteAlgebra) -> list[Partition]:
    """All joins of principal congruences, closed to a fixpoint."""
    delta = Partition.discrete(a.size)
    principals = []
    seen = {delta}
    for x, y in itertools.combinations(range(a.size), 2):
        p = principal_congruence(a, x, y).partition
        if p not in seen:
            seen.add(p)
            principals.append(p)
    found = set(seen)
    frontier = sorted(found, key=_lattice_key)
    while frontier:
        new = []
        for c in frontier:
            for p in principals:
                j = c.join(p)
                if j not in found:
                    found.add(j)
                    new.append(j)
        frontier = sorted(new, key=_lattice_key)
    return list(found)


@lru_cache(maxsize=256)
def all_congruences(a: FiniteAlgebra, method: str = "principal") -> CongruenceLattice:
    if method == "principal":
        parts = principal_join_congruences(a)
    elif method == "brute":
        parts = brute_force_congruences(a)
    else:
        raise InputError(f"unknown congruence enumeration method {method!r}")
    return CongruenceLattice.from_partitions(a, parts)


def congruences_agree(a: FiniteAlgebra, cap: int = BRUTE_FORCE_CAP) -> bool | None:
    """Compare both enumeration methods; ``None`` when ``a`` exceeds the cap."""
    if a.size > cap:
        return None
    return set(principal_join_congruences(a)) == set(brute_force_congruences(a))


def _lattice(x: FiniteAlgebra | CongruenceLattice) -> CongruenceLattice:
    return x if isinstance(x, CongruenceLattice) else all_congruences(x)


# ---------------------------------------------------------------- modularity


def is_modular(lat: CongruenceLattice | FiniteAlgebra) -> ScanResult:
    """Check ``x <= z  =>  x v (y ^ z) = (x v y) ^ z`` over all triples."""
    lat = _lattice(lat)
    mt, jt, leq = lat.meet_table, lat.join_table, lat.leq
    k = len(lat)
    checked = 0
    for x in range(k):
        for z in np.flatnonzero(leq[x]):
            lhs = jt[x, mt[:, z]]
            rhs = mt[jt[x, :], z]
            checked += k
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                y = int(bad[0])
                return ScanResult(False, (lat[x], lat[y], lat[int(z)]), checked)
    return ScanResult(True, None, checked)


# ------------------------------------------------------------ Shifting Lemma


def _block_indicator(p: Partition) -> np.ndarray:
    b = np.zeros((p.num_blocks, p.size), dtype=np.int64)
    b[p.labels, np.arange(p.size)] = 1
    return b


def shifting_lemma_witness(r: Congruence, s: Congruence, t: Congruence):
    """First ``(x, y, t, z)`` with (x,y) in R^T, (x,t), (y,z) in S, (t,z) in R but not T."""
    rm, sm, tm = r.matrix, s.matrix, t.matrix
    n = r.algebra.size
    for x, y in itertools.product(range(n), repeat=2):
        if not (rm[x, y] and tm[x, y]):
            continue
        for tt in np.flatnonzero(sm[x]):
            bad = rm[tt] & ~tm[tt] & sm[y]
            if bad.any():
                return (x, y, int(tt), int(np.flatnonzero(bad)[0]))
    return None


def shifting_lemma_holds(a: FiniteAlgebra | CongruenceLattice) -> ScanResult:
    """Scan every congruence triple with ``R ^ S <= T`` for a Shifting Lemma failure.

    A failure exists for a triple iff some pair of S-blocks contains both a
    pair in ``R ^ T`` and a pair in ``R \\ T``; this is tested with block
    indicator products, and the elementwise witness is then recovered.
    """
    lat = _lattice(a)
    mt, leq = lat.meet_table, lat.leq
    k = len(lat)
    inds = [_block_indicator(c.partition) for c in lat]
    mats = [c.matrix for c in lat]
    checked = 0
    for ri in range(k):
        rm = mats[ri]
        for si in range(k):
            m = mt[ri, si]
            b = inds[si]
            for ti in np.flatnonzero(leq[m]):
                checked += 1
                if leq[ri, ti]:
                    continue
                tm = mats[ti]
                inside = (b @ (rm & tm) @ b.T) > 0
                outside = (b @ (rm & ~tm) @ b.T) > 0
                if (inside & outside).any():
                    r, s, t = lat[ri], lat[si], lat[int(ti)]
                    return ScanResult(False, (r, s, t, shifting_lemma_witness(r, s, t)), checked)
    return ScanResult(True, None, checked)


# ------------------------------------------------------ double relations / Gumm


@dataclass(frozen=True, eq=False)
class DoubleRelation:
    """Quadruples ``(x, t, y, z)`` with (x,t), (y,z) in S and (x,y), (t,z) in R.

    ``mask[x, t, y, z]`` marks membership.  The two projections onto R are
    ``(x, y)`` and ``(t, z)``.
    """

    r: Congruence
    s: Congruence
    mask: np.ndarray = field(repr=False)

    @property
    def quads(self) -> set[tuple[int, int, int, int]]:
        return {tuple(int(v) for v in q) for q in np.argwhere(self.mask)}

    def __len__(self) -> int:
        return int(self.mask.sum())


def _quad_mask(rm: np.ndarray, sm: np.ndarray) -> np.ndarray:
    return (sm[:, :, None, None] & sm[None, None, :, :]
            & rm[:, None, :, None] & rm[None, :, None, :])


def double_relation(r: Congruence, s: Congruence) -> DoubleRelation:
    if r.algebra != s.algebra:
        raise InputError("relations live on different algebras")
    return DoubleRelation(r, s, _quad_mask(r.matrix, s.matrix))


def is_discrete_fibration(t: Congruence, s: Congruence, r: Congruence) -> bool:
    """Whether the inclusion ``T□S -> R□S`` over ``T -> R`` is a discrete fibration.

    Both commutative squares (one per projection) must be pullbacks of sets:
    the quadruples of ``R□S`` whose projection lands in ``T`` are exactly
    the quadruples of ``T□S``.
    """
    if not ((r & s) <= t and t <= r):
        raise HypothesisViolated("R^S <= T <= R", f"R={r}, S={s}, T={t}")
    rs = _quad_mask(r.matrix, s.matrix)
    ts = _quad_mask(t.matrix, s.matrix)
    tm = t.matrix
    pulled_first = rs & tm[:, None, :, None]
    pulled_second = rs & tm[None, :, None, :]
    return bool(np.array_equal(pulled_first, ts) and np.array_equal(pulled_second, ts))


def gumm_check(a: FiniteAlgebra | CongruenceLattice) -> ScanResult:
    lat = _lattice(a)
    mt, leq = lat.meet_table, lat.leq
    k = len(lat)
    checked = 0
    for ri in range(k):
        for si in range(k):
            m = mt[ri, si]
            for ti in np.flatnonzero(leq[m] & leq[:, ri]):
                checked += 1
                if ti == ri:
                    continue
                r, s, t = lat[ri], lat[si], lat[int(ti)]
                if not is_discrete_fibration(t, s, r):
                    return ScanResult(False, (r, s, t), checked)
    return ScanResult(True, None, checked)


# ------------------------------------------------------------- permutability


def permutability(r: Congruence, s: Congruence) -> dict[str, bool]:
    """2-permutability ``RS = SR`` and 3-permutability ``RSR = SRS``."""
    if r.algebra != s.algebra:
        raise InputError("relations live on different algebras")
    rr, sr = r.relation, s.relation
    rs = relcalc.compose(rr, sr)
    sr_ = relcalc.compose(sr, rr)
    return {
        "permute2": rs == sr_,
        "permute3": relcalc.compose(rs, rr) == relcalc.compose(sr_, sr),
    }


def _permute_table(lat: CongruenceLattice) -> np.ndarray:
    k = len(lat)
    rels = [c.relation for c in lat]
    comp = {}
    out = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(k):
            comp[i, j] = relcalc.compose(rels[i], rels[j])
    for i in range(k):
        for j in range(k):
            out[i, j] = comp[i, j] == comp[j, i]
    return out


def permutability_scan(a: FiniteAlgebra | CongruenceLattice) -> ScanResult:
    """All congruence pairs 2-permute; the witness is the first pair that does not."""
    lat = _lattice(a)
    table = _permute_table(lat)
    bad = np.argwhere(~table)
    goursat = all(permutability(lat[i], lat[j])["permute3"] for i, j in itertools.combinations(range(len(lat)), 2))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        return ScanResult(False, {"pair": (lat[i], lat[j]), "goursat": goursat}, table.size)
    return ScanResult(True, {"goursat": goursat}, table.size)


def bourn_check(a: FiniteAlgebra | CongruenceLattice, require_shifting: bool = True) -> ScanResult:
    """Scan triples with ``RS = SR`` and ``R^S <= T <= R`` for ``TS != ST``.

    When the algebra fails the Shifting Lemma the scan still runs, but the
    result carries ``hypothesis_met=False`` and any failure is not a
    counterexample.
    """
    lat = _lattice(a)
    hyp = bool(shifting_lemma_holds(lat)) if require_shifting else True
    perm = _permute_table(lat)
    mt, leq = lat.meet_table, lat.leq
    k = len(lat)
    checked = 0
    for ri in range(k):
        for si in range(k):
            if not perm[ri, si]:
                continue
            m = mt[ri, si]
            for ti in np.flatnonzero(leq[m] & leq[:, ri]):
                checked += 1
                if not perm[ti, si]:
                    return ScanResult(False, (lat[ri], lat[si], lat[int(ti)]), checked, hyp)
    return ScanResult(True, None, checked, hyp)


def sl_counterexample_search(algebras: Iterable[FiniteAlgebra]) -> tuple[FiniteAlgebra, ScanResult] | None:
    """First algebra (in the given order) with a Shifting Lemma failure, and its scan."""
    for a in algebras:
        res = shifting_lemma_holds(a)
        if not res:
            return a, res
    return None
