"""Galois structure of groups relative to abelian groups.

The reflector sends a group ``G`` to ``G / [G, G]`` with unit the quotient
map.  Extensions are surjective group homomorphisms ``f: X -> Y``; the
naturality square of ``f`` is oriented as::

    X --eta_X--> IX
    |            |
    f            If
    v            v
    Y --eta_Y--> IY
"""

from __future__ import annotations

import itertools
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .algebra import (
    GROUP_SIGNATURE,
    FiniteAlgebra,
    Homomorphism,
    all_homomorphisms,
    closure,
    homomorphisms,
    identity,
    quotient,
    surjections,
)
from .builders import galois_catalog, is_abelian
from .congruence import congruence_generated
from .diagram import Cube, Square, cube_check, is_pullback, is_pushout, mediator, pullback
from .errors import HypothesisViolated, InputError, NotApplicable
from .report import CheckReport


def _require_group(g: FiniteAlgebra) -> None:
    if g.signature != GROUP_SIGNATURE:
        raise InputError(f"{g.name} is not a group (signature {g.signature.operations})")


def _require_surjective(f: Homomorphism) -> None:
    if not f.is_surjective():
        raise HypothesisViolated("f surjective", repr(f))


# ---------------------------------------------------------------- reflector


class Reflection(ABC):
    """A reflector onto a Birkhoff subcategory, given by its unit components."""

    name = "reflection"

    @abstractmethod
    def unit(self, a: FiniteAlgebra) -> Homomorphism:
        """The unit component ``eta_A: A -> IA`` (surjective)."""

    def reflect_obj(self, a: FiniteAlgebra) -> tuple[FiniteAlgebra, Homomorphism]:
        eta = self.unit(a)
        return eta.target, eta

    def reflect_hom(self, f: Homomorphism) -> Homomorphism:
        """``If``, the unique map with ``If∘eta_X = eta_Y∘f``."""
        ex, ey = self.unit(f.source), self.unit(f.target)
        out = [-1] * ex.target.size
        for a in range(f.source.size):
            out[ex.map[a]] = ey.map[f.map[a]]
        return Homomorphism(ex.target, ey.target, out)

    def is_reflected(self, a: FiniteAlgebra) -> bool:
        return self.unit(a).is_bijective()


class Abelianization(Reflection):
    name = "abelianization"

    def unit(self, a: FiniteAlgebra) -> Homomorphism:
        return abelianize(a)[1]

    def is_reflected(self, a: FiniteAlgebra) -> bool:
        return is_abelian(a)


ABELIANIZATION = Abelianization()


@lru_cache(maxsize=1024)
def abelianize(g: FiniteAlgebra) -> tuple[FiniteAlgebra, Homomorphism]:
    """``G / Cg{(xy, yx)}`` and its quotient map."""
    _require_group(g)
    mul = g.lists[0]
    pairs = [(mul[x][y], mul[y][x]) for x, y in itertools.combinations(range(g.size), 2)]
    theta = congruence_generated(g, pairs)
    return quotient(g, theta, name=f"{g.name}^ab")


# ------------------------------------------------------------ group helpers


def center(g: FiniteAlgebra) -> tuple[int, ...]:
    _require_group(g)
    mul = g.tables[0]
    return tuple(int(z) for z in range(g.size) if (mul[z] == mul[:, z]).all())


def commutator_subgroup(g: FiniteAlgebra) -> tuple[int, ...]:
    """Subgroup generated by all commutators ``x y x^-1 y^-1``."""
    _require_group(g)
    mul, inv = g.lists[0], g.lists[1]
    comms = {mul[mul[x][y]][mul[inv[x]][inv[y]]] for x in range(g.size) for y in range(g.size)}
    return closure(g, comms)


def kernel_elements(f: Homomorphism) -> tuple[int, ...]:
    e = int(f.target.tables[2])
    return tuple(a for a in range(f.source.size) if f.map[a] == e)


def find_section(f: Homomorphism) -> Homomorphism | None:
    """First homomorphism ``s`` with ``f∘s = 1``, by exhaustive search."""
    cands = [[c for c in range(f.source.size) if f.map[c] == b] for b in range(f.target.size)]
    if any(not c for c in cands):
        return None
    return next(homomorphisms(f.target, f.source, cands), None)


def is_split(f: Homomorphism) -> bool:
    return find_section(f) is not None


# ---------------------------------------------------------- classification


def naturality_square(f: Homomorphism, refl: Reflection = ABELIANIZATION) -> Square:
    return Square(refl.unit(f.source), f, refl.reflect_hom(f), refl.unit(f.target))


def birkhoff_pushout_check(f: Homomorphism, refl: Reflection = ABELIANIZATION) -> bool:
    _require_surjective(f)
    return is_pushout(naturality_square(f, refl))


def is_trivial_extension(f: Homomorphism, refl: Reflection = ABELIANIZATION) -> bool:
    _require_surjective(f)
    return is_pullback(naturality_square(f, refl))


def is_normal_extension(f: Homomorphism, refl: Reflection = ABELIANIZATION) -> bool:
    """The first projection of the kernel pair of ``f`` is a trivial extension."""
    _require_surjective(f)
    _, pi1, _ = pullback(f, f)
    return is_trivial_extension(pi1, refl)


def kernel_is_central(f: Homomorphism) -> bool:
    """Group-theoretic test: ``[K, X] = 1`` for the kernel ``K`` of ``f``."""
    mul = f.source.tables[0]
    return all((mul[k] == mul[:, k]).all() for k in kernel_elements(f))


def pulled_back_extension(f: Homomorphism, y: Homomorphism):
    """Pullback of ``f: X -> Y`` along ``y: Z -> Y``; returns ``(P, x, phi)``."""
    return pullback(f, y)


def candidate_witnesses(f: Homomorphism, catalog: Sequence[FiniteAlgebra] | None = None,
                        max_order: int = 16) -> Iterator[Homomorphism]:
    """Surjections ``y: Z -> Y`` tried by the bounded witness search, in order.

    The identity of ``Y`` and ``f`` itself come first, then surjections from
    catalog groups of order at most ``max_order``.
    """
    yield identity(f.target)
    yield f
    for z in catalog if catalog is not None else galois_catalog():
        if z.size <= max_order and z.size >= f.target.size:
            yield from surjections(z, f.target)


def witness_search(f: Homomorphism, catalog: Sequence[FiniteAlgebra] | None = None,
                   max_order: int = 16, refl: Reflection = ABELIANIZATION) -> Homomorphism | None:
    """Bounded search for ``y`` along which ``f`` pulls back to a trivial extension.

    A ``None`` result only means no witness among the candidates; it does not
    refute centrality.
    """
    _require_surjective(f)
    for y in candidate_witnesses(f, catalog, max_order):
        _, _, phi = pulled_back_extension(f, y)
        if is_trivial_extension(phi, refl):
            return y
    return None


@dataclass
class CentralityVerdict:
    by_normal: bool | None = None
    by_kernel_center: bool | None = None
    witness: Homomorphism | None = None
    witness_searched: bool = False

    @property
    def agree(self) -> bool | None:
        if self.by_normal is None or self.by_kernel_center is None:
            return None
        return self.by_normal == self.by_kernel_center


def is_central_extension(f: Homomorphism, strategy: str = "all",
                         catalog: Sequence[FiniteAlgebra] | None = None) -> CentralityVerdict:
    """Decide centrality of ``f`` by one or more strategies.

    ``by_normal`` uses normality (central and normal extensions coincide
    here); ``by_kernel_center`` checks ``[K, X] = 1``; ``witness_search``
    runs the bounded search for a trivialising ``y``.
    """
    _require_surjective(f)
    if strategy not in ("all", "by_normal", "by_kernel_center", "witness_search"):
        raise InputError(f"unknown strategy {strategy!r}")
    out = CentralityVerdict()
    if strategy in ("all", "by_normal"):
        out.by_normal = is_normal_extension(f)
    if strategy in ("all", "by_kernel_center"):
        out.by_kernel_center = kernel_is_central(f)
    if strategy in ("all", "witness_search"):
        out.witness = witness_search(f, catalog)
        out.witness_searched = True
    return out


def classify(f: Homomorphism, catalog: Sequence[FiniteAlgebra] | None = None) -> CheckReport:
    """Full classification report for one homomorphism of groups."""
    _require_group(f.source)
    surjective = f.is_surjective()
    report = CheckReport("classify", f"{f.source.name} -> {f.target.name}", [("f surjective", surjective)])
    if not surjective:
        report.note = "only surjections are extensions"
        return report
    central = is_central_extension(f, "all", catalog)
    trivial = is_trivial_extension(f)
    section = find_section(f)
    report.facts.update({
        "surjective": True,
        "split": section is not None,
        "trivial": trivial,
        "normal": central.by_normal,
        "central(by_normal)": central.by_normal,
        "central(by_kernel_center)": central.by_kernel_center,
        "witness (bounded search)": central.witness,
        "agree(by_normal, by_kernel_center)": central.agree,
        "trivial implies normal": (not trivial) or bool(central.by_normal),
        "witness found iff normal": (central.witness is not None) == bool(central.by_normal),
    })
    report.verdict = bool(central.agree and report.facts["trivial implies normal"]
                          and report.facts["witness found iff normal"])
    if not report.verdict:
        report.witness = "classification strategies disagree"
    return report


# ------------------------------------------------------------- theorem cube


def extension_cube(f: Homomorphism, s: Homomorphism, y: Homomorphism,
                   refl: Reflection = ABELIANIZATION) -> Cube:
    """The cube over the pullback of split ``f`` (section ``s``) along ``y``."""
    p_alg, x, phi = pulled_back_extension(f, y)
    sigma = mediator(x, phi, s @ y, identity(y.source))
    unit, rh = refl.unit, refl.reflect_hom
    return Cube(
        x=x, a=unit(p_alg), u=unit(f.source), n=rh(x),
        y=y, b=unit(y.source), v=unit(f.target), m=rh(y),
        phi=phi, f=f, g=rh(phi), w=rh(f),
        sigma=sigma, s=s, t=rh(sigma), i=rh(s),
    )


def split_central_check(f: Homomorphism, catalog: Sequence[FiniteAlgebra] | None = None) -> CheckReport:
    """A central split extension is trivial; records the supporting cube check."""
    _require_surjective(f)
    section = find_section(f)
    if section is None:
        raise NotApplicable(f"{f.source.name} -> {f.target.name} is not split")
    if not kernel_is_central(f):
        raise NotApplicable(f"{f.source.name} -> {f.target.name} is not central")
    y = witness_search(f, catalog)
    if y is None:
        raise NotApplicable("no trivialising witness found by the bounded search")
    cube = extension_cube(f, section, y)
    cube_report = cube_check(cube, subject=f"{f.source.name} -> {f.target.name}")
    trivial = is_trivial_extension(f)
    report = CheckReport("split-central", f"{f.source.name} -> {f.target.name}", [
        ("f surjective", True), ("f split", True), ("f central", True),
    ])
    report.facts.update({
        "section": section,
        "witness y": y,
        "cube verdict": cube_report.verdict,
        "cube facts": cube_report.facts,
        "f is a trivial extension": trivial,
    })
    report.verdict = bool(trivial and cube_report.verdict)
    if not report.verdict:
        report.witness = {"trivial": trivial, "cube": cube_report.verdict}
    return report


# ------------------------------------------------------------ admissibility


def _inverse(iso: Homomorphism) -> Homomorphism:
    inv = [0] * iso.target.size
    for a, b in enumerate(iso.map):
        inv[b] = a
    return Homomorphism(iso.target, iso.source, inv)


def admissibility_rectangle(sq: Square, refl: Reflection = ABELIANIZATION):
    """Split a pullback square ``A -> U`` over ``B -> V`` through the reflections of A and B."""
    n, phi, w, m = sq.edges
    eta_u_inv = _inverse(refl.unit(n.target))
    eta_v_inv = _inverse(refl.unit(m.target))
    left = naturality_square(phi, refl)
    right = Square(eta_u_inv @ refl.reflect_hom(n), refl.reflect_hom(phi), w,
                   eta_v_inv @ refl.reflect_hom(m))
    return left, right


def admissibility_check(sq: Square, refl: Reflection = ABELIANIZATION) -> bool:
    """The reflector sends this pullback square to a pullback square.

    ``sq`` is ``A -n-> U`` over ``B -m-> V`` with vertical ``phi`` and ``w``;
    ``w`` must be a surjection between reflected (abelian) groups.
    """
    n, phi, w, m = sq.edges
    if not is_pullback(sq):
        raise HypothesisViolated("square is a pullback")
    if not (w.is_surjective() and refl.is_reflected(w.source) and refl.is_reflected(w.target)):
        raise HypothesisViolated("w is a surjection between abelian groups")
    reflected = Square(refl.reflect_hom(n), refl.reflect_hom(phi), refl.reflect_hom(w), refl.reflect_hom(m))
    return is_pullback(reflected)


def admissibility_report(sq: Square, refl: Reflection = ABELIANIZATION) -> CheckReport:
    report = CheckReport("admissibility", f"{sq.left.source.name} over {sq.right.target.name}")
    verdict = admissibility_check(sq, refl)
    left, right = admissibility_rectangle(sq, refl)
    report.facts.update({
        "reflected square is a pullback": verdict,
        "naturality square of phi is a pullback": is_pullback(left),
        "reflected right square is a pullback": is_pullback(right),
    })
    report.verdict = all(report.facts.values())
    if not report.verdict:
        report.witness = [k for k, v in report.facts.items() if not v]
    return report


# ------------------------------------------------------------------- scans


def catalog_surjections(catalog: Sequence[FiniteAlgebra] | None = None) -> list[Homomorphism]:
    cat = list(catalog) if catalog is not None else galois_catalog()
    out = []
    for x_alg in cat:
        for y_alg in cat:
            out.extend(surjections(x_alg, y_alg))
    return out


@dataclass
class ScanSummary:
    name: str
    total: int = 0
    failures: list = None  # type: ignore[assignment]
    skipped: int = 0

    def __post_init__(self) -> None:
        if self.failures is None:
            self.failures = []

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        from .report import plain
        return {"name": self.name, "total": self.total, "skipped": self.skipped,
                "failures": plain(self.failures[:10]), "failure_count": len(self.failures),
                "passed": self.passed}


def central_normal_scan(catalog: Sequence[FiniteAlgebra] | None = None,
                        surjs: Iterable[Homomorphism] | None = None) -> ScanSummary:
    """Over catalog surjections, kernel-centre centrality agrees with normality."""
    summary = ScanSummary("central-normal")
    for f in surjs if surjs is not None else catalog_surjections(catalog):
        summary.total += 1
        central = kernel_is_central(f)
        normal = is_normal_extension(f)
        if central != normal:
            summary.failures.append({"f": f, "central": central, "normal": normal})
    return summary


def birkhoff_scan(catalog: Sequence[FiniteAlgebra] | None = None,
                  surjs: Iterable[Homomorphism] | None = None) -> ScanSummary:
    summary = ScanSummary("birkhoff-pushout")
    for f in surjs if surjs is not None else catalog_surjections(catalog):
        summary.total += 1
        if not birkhoff_pushout_check(f):
            summary.failures.append(f)
    return summary


def split_central_scan(catalog: Sequence[FiniteAlgebra] | None = None,
                       surjs: Iterable[Homomorphism] | None = None) -> ScanSummary:
    """Every central split surjection is trivial (cube check included)."""
    summary = ScanSummary("split-central")
    for f in surjs if surjs is not None else catalog_surjections(catalog):
        if not (kernel_is_central(f) and is_split(f)):
            summary.skipped += 1
            continue
        summary.total += 1
        report = split_central_check(f, catalog)
        if not report.verdict:
            summary.failures.append({"f": f, "report": report.to_dict()})
    return summary


def admissibility_squares(seed: int, budget: int,
                          catalog: Sequence[FiniteAlgebra] | None = None) -> list[Square]:
    """Seeded sample of pullback squares ``B x_V U`` with ``w: U -> V`` abelian and onto."""
    cat = list(catalog) if catalog is not None else galois_catalog()
    abelian = [g for g in cat if is_abelian(g)]
    ws = [w for u in abelian for v in abelian for w in surjections(u, v)]
    rng = random.Random(seed)
    out = []
    for _ in range(budget):
        w = rng.choice(ws)
        b_alg = rng.choice(cat)
        ms = all_homomorphisms(b_alg, w.target)
        m = rng.choice(ms)
        _, proj_b, proj_u = pullback(m, w)
        out.append(Square(proj_u, proj_b, w, m))
    return out


def admissibility_scan(seed: int = 1, budget: int = 200,
                       catalog: Sequence[FiniteAlgebra] | None = None) -> ScanSummary:
    summary = ScanSummary("admissibility")
    for sq in admissibility_squares(seed, budget, catalog):
        summary.total += 1
        if not admissibility_check(sq):
            summary.failures.append({"n": sq.top, "m": sq.bottom, "w": sq.right})
    return summary


# names used by the command-line contract
theorem53_check = split_central_check
cor54_scan = central_normal_scan
