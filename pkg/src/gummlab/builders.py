"""Builders for the test corpus: small groups, lattices and bare sets.

Groups use the signature ``(mul/2, inv/1, e/0)`` with the identity at index
0; lattices use ``(join/2, meet/2)``; bare sets have no operations.  Axioms
are checked when an algebra is built, so a defect here fails loudly at
import or construction time.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .algebra import (
    EMPTY_SIGNATURE,
    GROUP_SIGNATURE,
    LATTICE_SIGNATURE,
    FiniteAlgebra,
    product,
    subalgebra_generated,
)
from .errors import InputError


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InputError(msg)


def _assert_group(g: FiniteAlgebra) -> FiniteAlgebra:
    mul, inv, e = g.tables
    e = int(e)
    n = g.size
    idx = np.arange(n)
    assert np.array_equal(mul[mul[:, :, None], idx[None, None, :]],
                          mul[idx[:, None, None], mul[None, :, :]]), f"{g.name}: mul not associative"
    assert np.array_equal(mul[e], idx) and np.array_equal(mul[:, e], idx), f"{g.name}: bad identity"
    assert np.all(mul[idx, inv] == e) and np.all(mul[inv, idx] == e), f"{g.name}: bad inverses"
    return g


def _assert_lattice(l: FiniteAlgebra) -> FiniteAlgebra:
    join, meet = l.tables
    idx = np.arange(l.size)
    for op in (join, meet):
        assert np.array_equal(op, op.T), f"{l.name}: not commutative"
        assert np.array_equal(op[idx, idx], idx), f"{l.name}: not idempotent"
        assert np.array_equal(op[op[:, :, None], idx[None, None, :]],
                              op[idx[:, None, None], op[None, :, :]]), f"{l.name}: not associative"
    assert np.array_equal(join[idx[:, None], meet], np.broadcast_to(idx[:, None], meet.shape)), \
        f"{l.name}: absorption fails"
    return l


def group_from_mul(name: str, mul) -> FiniteAlgebra:
    """Group from its multiplication table; identity must be element 0."""
    mul = np.asarray(mul, dtype=np.intp)
    n = mul.shape[0]
    inv = np.array([int(np.flatnonzero(mul[a] == 0)[0]) for a in range(n)], dtype=np.intp)
    return _assert_group(FiniteAlgebra(name, n, GROUP_SIGNATURE, (mul, inv, np.array(0))))


def cyclic_group(n: int) -> FiniteAlgebra:
    _require(n >= 1, f"cyclic_group needs n >= 1, got {n}")
    idx = np.arange(n)
    return group_from_mul(f"Z{n}", (idx[:, None] + idx[None, :]) % n)


def dihedral_group(n: int) -> FiniteAlgebra:
    """Symmetries of the n-gon, order 2n; ``r^k s^j`` has index ``j*n + k``."""
    _require(n >= 1, f"dihedral_group needs n >= 1, got {n}")
    size = 2 * n
    mul = np.zeros((size, size), dtype=np.intp)
    for a in range(size):
        j1, k1 = divmod(a, n)
        for b in range(size):
            j2, k2 = divmod(b, n)
            k = (k1 + (-k2 if j1 else k2)) % n
            mul[a, b] = ((j1 + j2) % 2) * n + k
    return group_from_mul(f"D{n}", mul)


def dicyclic_group(n: int) -> FiniteAlgebra:
    """Order 4n: ``a^(2n) = 1``, ``x^2 = a^n``, ``x a x^-1 = a^-1``.

    ``a^k x^j`` has index ``j*2n + k``; ``n = 2`` gives the quaternion group.
    """
    _require(n >= 1, f"dicyclic_group needs n >= 1, got {n}")
    m = 2 * n
    size = 2 * m
    mul = np.zeros((size, size), dtype=np.intp)
    for p in range(size):
        j1, k1 = divmod(p, m)
        for q in range(size):
            j2, k2 = divmod(q, m)
            if j1 == 0:
                k, j = k1 + k2, j2
            elif j2 == 0:
                k, j = k1 - k2, 1
            else:
                k, j = k1 - k2 + n, 0
            mul[p, q] = j * m + k % m
    name = "Q8" if n == 2 else f"Dic{n}"
    return group_from_mul(name, mul)


def quaternion_group_8() -> FiniteAlgebra:
    return dicyclic_group(2)


def symmetric_group(n: int) -> FiniteAlgebra:
    """Permutations of ``n <= 4`` points in lexicographic order; ``(p*q)(i) = p(q(i))``."""
    _require(1 <= n <= 4, f"symmetric_group supports 1 <= n <= 4, got {n}")
    perms = list(itertools.permutations(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    mul = [[pos[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return group_from_mul(f"S{n}", mul)


def alternating_group_4() -> FiniteAlgebra:
    s4 = symmetric_group(4)
    perms = list(itertools.permutations(range(4)))
    three_cycles = [i for i, p in enumerate(perms) if sum(p[k] != k for k in range(4)) == 3]
    a4, _ = subalgebra_generated(s4, three_cycles, name="A4")
    return _assert_group(a4)


def bare_set(n: int) -> FiniteAlgebra:
    _require(n >= 1, f"bare_set needs n >= 1, got {n}")
    return FiniteAlgebra(f"bare{n}", n, EMPTY_SIGNATURE, ())


def lattice_from_order(name: str, leq: Sequence[Sequence[bool]]) -> FiniteAlgebra:
    """Lattice from its order matrix; joins and meets are least upper / greatest lower bounds."""
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]

    def bound(a: int, b: int, upper: bool) -> int:
        rel = leq if upper else leq.T
        common = [c for c in range(n) if rel[a, c] and rel[b, c]]
        best = [c for c in common if all(rel[c, d] for d in common)]
        _require(len(best) == 1, f"{name}: elements {a}, {b} have no unique bound")
        return best[0]

    join = [[bound(a, b, True) for b in range(n)] for a in range(n)]
    meet = [[bound(a, b, False) for b in range(n)] for a in range(n)]
    return _assert_lattice(FiniteAlgebra(name, n, LATTICE_SIGNATURE, (join, meet)))


def chain_lattice(n: int) -> FiniteAlgebra:
    _require(n >= 1, f"chain_lattice needs n >= 1, got {n}")
    idx = np.arange(n)
    return lattice_from_order(f"chain{n}", idx[:, None] <= idx[None, :])


def diamond_M3() -> FiniteAlgebra:
    # 0 bottom, 1-3 atoms, 4 top
    leq = np.eye(5, dtype=bool)
    leq[0, :] = True
    leq[:, 4] = True
    return lattice_from_order("M3", leq)


def pentagon_N5() -> FiniteAlgebra:
    # 0 < 1 < 2 < 4 and 0 < 3 < 4
    leq = np.eye(5, dtype=bool)
    leq[0, :] = True
    leq[:, 4] = True
    leq[1, 2] = True
    return lattice_from_order("N5", leq)


def direct_product(*factors: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    out = factors[0]
    for f in factors[1:]:
        out, _, _ = product(out, f)
    if name is not None:
        out = FiniteAlgebra(name, out.size, out.signature, out.tables)
    return out


def is_abelian(g: FiniteAlgebra) -> bool:
    mul = g.tables[0]
    return bool(np.array_equal(mul, mul.T))


# ------------------------------------------------------------------ registry

_PATTERNS: list[tuple[str, Callable[[int], FiniteAlgebra]]] = [
    (r"Z(\d+)", cyclic_group),
    (r"D(\d+)", dihedral_group),
    (r"Dic(\d+)", dicyclic_group),
    (r"S(\d+)", symmetric_group),
    (r"bare(\d+)", bare_set),
    (r"chain(\d+)", chain_lattice),
]

_FIXED: dict[str, Callable[[], FiniteAlgebra]] = {
    "V4": lambda: direct_product(cyclic_group(2), cyclic_group(2), name="V4"),
    "Q8": quaternion_group_8,
    "A4": alternating_group_4,
    "M3": diamond_M3,
    "N5": pentagon_N5,
    "Z2^3": lambda: direct_product(*[cyclic_group(2)] * 3, name="Z2^3"),
    "Z2^4": lambda: direct_product(*[cyclic_group(2)] * 4, name="Z2^4"),
    "S3xZ2": lambda: direct_product(symmetric_group(3), cyclic_group(2), name="S3xZ2"),
    "Z2xZ4": lambda: direct_product(cyclic_group(2), cyclic_group(4), name="Z2xZ4"),
    "Z3xZ3": lambda: direct_product(cyclic_group(3), cyclic_group(3), name="Z3xZ3"),
    "Z2xZ6": lambda: direct_product(cyclic_group(2), cyclic_group(6), name="Z2xZ6"),
    "Z2xQ8": lambda: direct_product(cyclic_group(2), quaternion_group_8(), name="Z2xQ8"),
    "Z2xD4": lambda: direct_product(cyclic_group(2), dihedral_group(4), name="Z2xD4"),
    "Z4xZ4": lambda: direct_product(cyclic_group(4), cyclic_group(4), name="Z4xZ4"),
    "chain2^2": lambda: direct_product(chain_lattice(2), chain_lattice(2), name="chain2^2"),
    "chain2xchain3": lambda: direct_product(chain_lattice(2), chain_lattice(3), name="chain2xchain3"),
}


@lru_cache(maxsize=None)
def builtin(name: str) -> FiniteAlgebra:
    """Resolve a corpus name such as ``Z4``, ``S3xZ2``, ``bare4`` or ``N5``."""
    if name in _FIXED:
        return _FIXED[name]()
    for pat, fn in _PATTERNS:
        m = re.fullmatch(pat, name)
        if m:
            return fn(int(m.group(1)))
    raise InputError(f"unknown builtin algebra {name!r}")


def builtin_names() -> list[str]:
    return sorted(_FIXED) + ["Z<n>", "D<n>", "Dic<n>", "S<n>", "bare<n>", "chain<n>"]


# Versioned catalogs.  Changing these lists changes suite output.
CATALOG_VERSION = 1

GALOIS_CATALOG = ("Z2", "Z3", "Z4", "V4", "S3", "Z6", "Q8", "D4", "Z8", "Z2^3", "S3xZ2")

# every group of order <= 12, up to isomorphism
SMALL_GROUPS = (
    "Z1", "Z2", "Z3", "Z4", "V4", "Z5", "Z6", "S3", "Z7",
    "Z8", "Z2xZ4", "Z2^3", "D4", "Q8", "Z9", "Z3xZ3", "Z10", "D5",
    "Z11", "Z12", "Z2xZ6", "A4", "D6", "Dic3",
)

ORDER16_GROUPS = ("Z16", "Z4xZ4", "Z2^4", "D8", "Dic4", "Z2xQ8", "Z2xD4")

LATTICES = ("chain1", "chain2", "chain3", "chain4", "chain5", "chain6",
            "chain2^2", "chain2xchain3", "M3", "N5")

BARE_SETS = ("bare1", "bare2", "bare3", "bare4", "bare5")

CORPUS = SMALL_GROUPS + ORDER16_GROUPS + LATTICES + BARE_SETS


def corpus(names: Sequence[str] = CORPUS, max_size: int | None = None) -> list[FiniteAlgebra]:
    out = [builtin(n) for n in names]
    if max_size is not None:
        out = [a for a in out if a.size <= max_size]
    return out


def galois_catalog() -> list[FiniteAlgebra]:
    return [builtin(n) for n in GALOIS_CATALOG]


def group_corpus(max_order: int = 8) -> list[FiniteAlgebra]:
    return [builtin(n) for n in ("Z1",) + GALOIS_CATALOG if builtin(n).size <= max_order]
