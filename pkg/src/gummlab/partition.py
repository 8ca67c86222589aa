"""Set partitions of ``{0..n-1}`` in canonical (restricted growth) form."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .errors import InputError
from .relcalc import BinRel


def canonical_labels(labels: Sequence[int]) -> tuple[int, ...]:
    """Renumber arbitrary labels so blocks are numbered by least element."""
    seen: dict[int, int] = {}
    out = []
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """An equivalence relation stored as a block-id array.

    ``block_id[i]`` is the index of the block containing ``i``; blocks are
    numbered ascending by their least element, so equal partitions compare
    and hash equal.
    """

    block_id: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.block_id:
            raise InputError("partition carrier must be non-empty")
        if canonical_labels(self.block_id) != tuple(self.block_id):
            raise InputError(f"block ids {self.block_id} are not in canonical form")

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        return cls(canonical_labels(labels))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int) -> "Partition":
        labels = [-1] * n
        for k, block in enumerate(blocks):
            for a in block:
                if not 0 <= a < n:
                    raise InputError(f"element {a} out of range for carrier of size {n}")
                if labels[a] != -1:
                    raise InputError(f"element {a} appears in two blocks")
                labels[a] = k
        missing = [a for a, lab in enumerate(labels) if lab == -1]
        if missing:
            raise InputError(f"elements {missing} are not covered by any block")
        return cls.from_labels(labels)

    @classmethod
    def from_relation(cls, rel: BinRel) -> "Partition":
        if not rel.is_equivalence():
            raise InputError("relation is not an equivalence relation")
        labels = []
        for row in rel.rows:
            labels.append((row & -row).bit_length() - 1)
        return cls.from_labels(labels)

    @classmethod
    def from_disjoint_set(cls, ds: DisjointSet, n: int) -> "Partition":
        return cls.from_labels([ds[i] for i in range(n)])

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @property
    def size(self) -> int:
        return len(self.block_id)

    @cached_property
    def num_blocks(self) -> int:
        return max(self.block_id) + 1

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for a, k in enumerate(self.block_id):
            out[k].append(a)
        return tuple(tuple(b) for b in out)

    @cached_property
    def representatives(self) -> tuple[int, ...]:
        return tuple(b[0] for b in self.blocks)

    @cached_property
    def labels(self) -> np.ndarray:
        arr = np.array(self.block_id, dtype=np.intp)
        arr.setflags(write=False)
        return arr

    @cached_property
    def matrix(self) -> np.ndarray:
        lab = self.labels
        m = lab[:, None] == lab[None, :]
        m.setflags(write=False)
        return m

    @cached_property
    def relation(self) -> BinRel:
        masks = [0] * self.num_blocks
        for a, k in enumerate(self.block_id):
            masks[k] |= 1 << a
        return BinRel(self.size, self.size, tuple(masks[k] for k in self.block_id))

    def related(self, a: int, b: int) -> bool:
        return self.block_id[a] == self.block_id[b]

    def is_discrete(self) -> bool:
        return self.num_blocks == self.size

    def is_indiscrete(self) -> bool:
        return self.num_blocks == 1

    def leq(self, other: "Partition") -> bool:
        """Refinement order: every block of ``self`` lies inside a block of ``other``."""
        self._check(other)
        seen: dict[int, int] = {}
        for a, b in zip(self.block_id, other.block_id):
            if seen.setdefault(a, b) != b:
                return False
        return True

    def meet(self, other: "Partition") -> "Partition":
        self._check(other)
        return Partition.from_labels(list(zip(self.block_id, other.block_id)))

    def join(self, other: "Partition") -> "Partition":
        self._check(other)
        ds = DisjointSet(range(self.size))
        for part in (self, other):
            for block in part.blocks:
                for a in block[1:]:
                    ds.merge(block[0], a)
        return Partition.from_disjoint_set(ds, self.size)

    def _check(self, other: "Partition") -> None:
        if self.size != other.size:
            raise InputError(f"carrier mismatch: {self.size} vs {other.size}")

    def __str__(self) -> str:
        return " | ".join(",".join(map(str, b)) for b in self.blocks)


def all_partitions(n: int) -> Iterator[Partition]:
    """Every partition of an ``n``-set, as restricted growth strings in lex order."""
    if n < 1:
        raise InputError("carrier must be non-empty")
    rgs = [0] * n

    def rec(i: int, top: int) -> Iterator[Partition]:
        if i == n:
            yield Partition(tuple(rgs))
            return
        for k in range(top + 2):
            rgs[i] = k
            yield from rec(i + 1, max(top, k))

    rgs[0] = 0
    yield from rec(1, 0)
