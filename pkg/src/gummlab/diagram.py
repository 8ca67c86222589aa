"""Commutative squares, rectangles and cubes of finite algebras.

Orientation used everywhere::

    P --top--> X
    |          |
   left      right
    v          v
    Z -bottom> Y

A rectangle glues ``square1`` and ``square2`` along ``square1.right ==
square2.left``.  Pullback verdicts compare the apex with the canonical
pullback through the comparison map ``p -> (top(p), left(p))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import relcalc
from .algebra import (
    GROUP_SIGNATURE,
    LATTICE_SIGNATURE,
    FiniteAlgebra,
    Homomorphism,
    all_homomorphisms,
    homomorphisms,
    identity,
    is_homomorphism,
    kernel_pair,
    quotient,
)
from .congruence import brute_force_congruences, congruence_generated
from .errors import HypothesisViolated, InputError
from .report import CheckReport

MODULAR_SIGNATURES = (GROUP_SIGNATURE, LATTICE_SIGNATURE)


# ----------------------------------------------------------------- pullbacks


def pullback(f: Homomorphism, g: Homomorphism, name: str | None = None):
    """Canonical pullback of ``f: X -> Y`` and ``g: Z -> Y``.

    Elements are the pairs ``(x, z)`` with ``f(x) == g(z)`` in lexicographic
    order.  Returns ``(P, proj_X, proj_Z)``.
    """
    if f.target != g.target:
        raise InputError("pullback needs a common codomain")
    x_alg, z_alg = f.source, g.source
    if x_alg.signature != z_alg.signature:
        raise InputError("signature mismatch")
    nz = z_alg.size
    fa, ga = f.array, g.array
    xs, zs = np.nonzero(fa[:, None] == ga[None, :])
    m = xs.size
    lookup = np.full(x_alg.size * nz, -1, dtype=np.intp)
    lookup[xs * nz + zs] = np.arange(m)
    tables = []
    for k, tx, tz in zip(x_alg.signature.arities, x_alg.tables, z_alg.tables):
        if k == 0:
            tables.append(lookup[int(tx) * nz + int(tz)])
            continue
        px = tx[np.ix_(*([xs] * k))]
        pz = tz[np.ix_(*([zs] * k))]
        tables.append(lookup[px * nz + pz])
    p = FiniteAlgebra(name or f"{x_alg.name}*{z_alg.name}", m, x_alg.signature, tuple(tables))
    return p, Homomorphism._trusted(p, x_alg, xs), Homomorphism._trusted(p, z_alg, zs)


def mediator(p1: Homomorphism, p2: Homomorphism, m1: Homomorphism, m2: Homomorphism) -> Homomorphism:
    """The map ``k: W -> P`` with ``p1∘k = m1`` and ``p2∘k = m2`` (P a canonical pullback)."""
    index = {(a, b): i for i, (a, b) in enumerate(zip(p1.map, p2.map))}
    try:
        images = [index[(a, b)] for a, b in zip(m1.map, m2.map)]
    except KeyError as exc:
        raise InputError(f"pair {exc.args[0]} is not in the pullback") from None
    return Homomorphism(m1.source, p1.source, images)


def kernel_pair_object(f: Homomorphism):
    """``R_f`` as an algebra with its two projections."""
    return pullback(f, f, name=f"R({f.source.name})")


# -------------------------------------------------------------------- square


@dataclass(frozen=True)
class Square:
    top: Homomorphism
    left: Homomorphism
    right: Homomorphism
    bottom: Homomorphism

    def __post_init__(self) -> None:
        if self.top.source != self.left.source:
            raise InputError("top and left must share their source")
        if self.top.target != self.right.source:
            raise InputError("right must start where top ends")
        if self.left.target != self.bottom.source:
            raise InputError("bottom must start where left ends")
        if self.right.target != self.bottom.target:
            raise InputError("right and bottom must share their target")
        if (self.right @ self.top).map != (self.bottom @ self.left).map:
            raise InputError("square does not commute")

    @property
    def edges(self) -> tuple[Homomorphism, ...]:
        return (self.top, self.left, self.right, self.bottom)

    def all_surjective(self) -> bool:
        return all(e.is_surjective() for e in self.edges)


def identity_square(a: FiniteAlgebra) -> Square:
    i = identity(a)
    return Square(i, i, i, i)


def is_pullback(sq: Square) -> bool:
    """Comparison map from the apex to the canonical pullback is bijective."""
    pairs = set(zip(sq.top.map, sq.left.map))
    if len(pairs) != sq.top.source.size:
        return False
    right, bottom = np.bincount(sq.right.array, minlength=sq.right.target.size), \
        np.bincount(sq.bottom.array, minlength=sq.bottom.target.size)
    return len(pairs) == int(right @ bottom)


def _require_surjective(sq: Square, what: str) -> None:
    names = ("top", "left", "right", "bottom")
    for nm, e in zip(names, sq.edges):
        if not e.is_surjective():
            raise HypothesisViolated(f"{what}: all edges surjective", f"{nm} edge is not surjective")


def pushout_generators(sq: Square) -> relcalc.BinRel:
    """The image of the left kernel pair along the top edge, ``top(R_left)``."""
    return relcalc.rel_image(sq.top, kernel_pair(sq.left).relation)


def is_pushout(sq: Square) -> bool:
    """Pushout test for a square of surjections: ``R_right = Cg(top(R_left))``."""
    _require_surjective(sq, "pushout")
    generated = congruence_generated(sq.top.target, pushout_generators(sq).pairs())
    return kernel_pair(sq.right).partition == generated.partition


def pushout_by_cocones(sq: Square) -> bool:
    """Universal-property oracle for pushouts of surjections.

    Cocones are tested into every quotient ``X/θ`` (θ from brute-force
    partition filtering), with all maps found by exhaustive hom enumeration.
    Since the true pushout is such a quotient, this decides the question.
    Intended for carriers of size <= 6.
    """
    _require_surjective(sq, "pushout")
    x_alg = sq.top.target
    for theta in brute_force_congruences(x_alg):
        w, _ = quotient(x_alg, theta)
        for g in all_homomorphisms(x_alg, w):
            # h is forced on Z since left is onto
            h_map: dict[int, int] = {}
            ok = True
            for p in range(sq.top.source.size):
                zv, wv = sq.left.map[p], g.map[sq.top.map[p]]
                if h_map.setdefault(zv, wv) != wv:
                    ok = False
                    break
            if not ok:
                continue
            h = [h_map[z] for z in range(sq.left.target.size)]
            if not is_homomorphism(sq.left.target, w, h):
                continue
            # mediator k: Y -> W forced by k∘right = g
            k_map: dict[int, int] = {}
            for xv in range(x_alg.size):
                yv = sq.right.map[xv]
                if k_map.setdefault(yv, g.map[xv]) != g.map[xv]:
                    return False
            k = [k_map[y] for y in range(sq.right.target.size)]
            if not is_homomorphism(sq.right.target, w, k):
                return False
            if any(k[sq.bottom.map[z]] != h[z] for z in range(len(h))):
                return False
    return True


def pullback_mediators(sq: Square, w: FiniteAlgebra) -> Iterator[int]:
    """For each cone from ``w`` over the cospan, yield how many mediators it has."""
    x_alg, z_alg = sq.top.target, sq.left.target
    for g in all_homomorphisms(w, x_alg):
        for h in all_homomorphisms(w, z_alg):
            if (sq.right @ g).map != (sq.bottom @ h).map:
                continue
            count = 0
            for k in all_homomorphisms(w, sq.top.source):
                if (sq.top @ k).map == g.map and (sq.left @ k).map == h.map:
                    count += 1
            yield count


def is_right_saturated(sq: Square) -> bool:
    """The map induced by ``top`` from ``R_left`` to ``R_right`` is onto."""
    _require_surjective(sq, "right saturation")
    return pushout_generators(sq) == kernel_pair(sq.right).relation


# ----------------------------------------------------------------- rectangle


@dataclass(frozen=True)
class Rectangle:
    square1: Square
    square2: Square

    def __post_init__(self) -> None:
        if self.square1.right != self.square2.left:
            raise InputError("squares must share the middle vertical edge")

    @property
    def whole(self) -> Square:
        return Square(
            self.square2.top @ self.square1.top,
            self.square1.left,
            self.square2.right,
            self.square2.bottom @ self.square1.bottom,
        )

    def is_nontrivial(self) -> bool:
        edges = self.square1.edges + self.square2.edges
        return not all(e.is_bijective() for e in edges)


def identity_rectangle(a: FiniteAlgebra) -> Rectangle:
    sq = identity_square(a)
    return Rectangle(sq, sq)


def _clauses_or_raise(report: CheckReport) -> None:
    clause = report.failed_clause
    if clause is not None:
        raise HypothesisViolated(clause, report.subject)


def _variety_clause(*algebras: FiniteAlgebra) -> tuple[str, bool]:
    return ("congruence-modular variety (groups or lattices)",
            all(a.signature in MODULAR_SIGNATURES for a in algebras))


def _permute(r: relcalc.BinRel, s: relcalc.BinRel) -> bool:
    return relcalc.compose(r, s) == relcalc.compose(s, r)


def _finish(report: CheckReport, conclusions: dict[str, bool]) -> CheckReport:
    report.facts.update(conclusions)
    failed = [k for k, v in report.facts.items() if v is False]
    report.verdict = not failed
    report.witness = failed or None
    report.normalise()
    return report


def split_rectangle_check(rect: Rectangle, sigma: Homomorphism, s: Homomorphism, subject: str = "") -> CheckReport:
    """Split-epi rectangle check: both squares are pullbacks.

    Hypotheses: the whole rectangle is a pullback, the left square has
    vertical split epis (with sections commuting with the horizontal edges)
    and horizontal surjections.  Also records the relational identities used
    along the way.
    """
    sq1, sq2 = rect.square1, rect.square2
    x, phi, f, y = sq1.top, sq1.left, sq1.right, sq1.bottom
    u = sq2.top
    shapes_ok = (sigma.source == phi.target and sigma.target == phi.source
                 and s.source == f.target and s.target == f.source)
    report = CheckReport("split-rectangle", subject, [
        ("whole rectangle is a pullback", is_pullback(rect.whole)),
        ("sections have the right shape", shapes_ok),
        ("left vertical edge split by sigma", shapes_ok and (phi @ sigma).is_identity()),
        ("middle vertical edge split by s", shapes_ok and (f @ s).is_identity()),
        ("sections commute: x∘sigma = s∘y", shapes_ok and (x @ sigma).map == (s @ y).map),
        ("horizontal edges of square 1 surjective", x.is_surjective() and y.is_surjective()),
        _variety_clause(x.source, x.target, y.source, y.target, u.target),
    ])
    _clauses_or_raise(report)

    r_ux = kernel_pair(u @ x).relation
    r_phi = kernel_pair(phi).relation
    r_x = kernel_pair(x).relation
    r_y = kernel_pair(y).relation
    report.facts.update({
        "R_ux ^ R_phi = Delta": relcalc.meet(r_ux, r_phi) == relcalc.BinRel.identity(x.source.size),
        "R_ux R_phi = R_phi R_ux": _permute(r_ux, r_phi),
        "R_x R_phi = R_phi R_x": _permute(r_x, r_phi),
        "phi(R_x) = R_y": relcalc.rel_image(phi, r_x) == r_y,
        "phi x° = y° f": relcalc.compose(relcalc.of_hom_op(x), relcalc.of_hom(phi))
        == relcalc.compose(relcalc.of_hom(f), relcalc.of_hom_op(y)),
    })
    return _finish(report, {
        "square 1 is a pullback": is_pullback(sq1),
        "square 2 is a pullback": is_pullback(sq2),
    })


def pushout_rectangle_check(rect: Rectangle, subject: str = "") -> CheckReport:
    """Pushout rectangle check: both squares are pullbacks.

    Hypotheses: the whole rectangle is a pullback and the left square is a
    pushout of surjections.  Records ``R_x R_phi = R_phi R_x``, that
    ``R = x(R_phi)`` is transitive, and that ``R = R_f``.
    """
    sq1, sq2 = rect.square1, rect.square2
    x, phi, f = sq1.top, sq1.left, sq1.right
    surj = sq1.all_surjective()
    report = CheckReport("pushout-rectangle", subject, [
        ("whole rectangle is a pullback", is_pullback(rect.whole)),
        ("left square edges surjective", surj),
        ("left square is a pushout", surj and is_pushout(sq1)),
        _variety_clause(x.source, x.target, sq2.top.target),
    ])
    _clauses_or_raise(report)

    r = pushout_generators(sq1)
    r_x = kernel_pair(x).relation
    r_phi = kernel_pair(phi).relation
    report.facts.update({
        "R_x R_phi = R_phi R_x": _permute(r_x, r_phi),
        "RR = R": relcalc.compose(r, r) == r,
        "R = R_f": r == kernel_pair(f).relation,
    })
    return _finish(report, {
        "square 1 is a pullback": is_pullback(sq1),
        "square 2 is a pullback": is_pullback(sq2),
    })


# ---------------------------------------------------------------------- cube


@dataclass(frozen=True)
class Cube:
    """A cube of vertical split epis between a top and a bottom face.

    Top face ``P -x-> X``, ``P -a-> A``, ``X -u-> U``, ``A -n-> U``; bottom
    face ``Z -y-> Y``, ``Z -b-> B``, ``Y -v-> V``, ``B -m-> V``; vertical
    edges ``phi, f, g, w`` with sections ``sigma, s, t, i``.
    """

    x: Homomorphism
    a: Homomorphism
    u: Homomorphism
    n: Homomorphism
    y: Homomorphism
    b: Homomorphism
    v: Homomorphism
    m: Homomorphism
    phi: Homomorphism
    f: Homomorphism
    g: Homomorphism
    w: Homomorphism
    sigma: Homomorphism
    s: Homomorphism
    t: Homomorphism
    i: Homomorphism

    def __post_init__(self) -> None:
        for face in ("top", "bottom", "back", "front", "left", "right"):
            getattr(self, face)
        for epi, sec in self.splittings:
            if sec.source != epi.target or sec.target != epi.source:
                raise InputError("section has the wrong shape")

    @property
    def top(self) -> Square:
        return Square(self.x, self.a, self.u, self.n)

    @property
    def bottom(self) -> Square:
        return Square(self.y, self.b, self.v, self.m)

    @property
    def back(self) -> Square:
        return Square(self.x, self.phi, self.f, self.y)

    @property
    def front(self) -> Square:
        return Square(self.n, self.g, self.w, self.m)

    @property
    def left(self) -> Square:
        return Square(self.a, self.phi, self.g, self.b)

    @property
    def right(self) -> Square:
        return Square(self.u, self.f, self.w, self.v)

    @property
    def splittings(self) -> tuple[tuple[Homomorphism, Homomorphism], ...]:
        return ((self.phi, self.sigma), (self.f, self.s), (self.g, self.t), (self.w, self.i))

    @property
    def horizontal(self) -> tuple[Homomorphism, ...]:
        return (self.x, self.a, self.u, self.n, self.y, self.b, self.v, self.m)


def identity_cube(a: FiniteAlgebra) -> Cube:
    i = identity(a)
    return Cube(*([i] * 16))


def kernel_rectangle(cube: Cube):
    """Kernel pairs of ``a, u, b, v`` and the induced maps between them.

    Returns ``(rectangle, sigma_bar, s_bar)`` where the rectangle is
    ``R_a -> R_u -> X`` over ``R_b -> R_v -> Y``.
    """
    ra, a1, a2 = kernel_pair_object(cube.a)
    ru, u1, u2 = kernel_pair_object(cube.u)
    rb, b1, b2 = kernel_pair_object(cube.b)
    rv, v1, v2 = kernel_pair_object(cube.v)
    x_bar = mediator(u1, u2, cube.x @ a1, cube.x @ a2)
    phi_bar = mediator(b1, b2, cube.phi @ a1, cube.phi @ a2)
    f_bar = mediator(v1, v2, cube.f @ u1, cube.f @ u2)
    y_bar = mediator(v1, v2, cube.y @ b1, cube.y @ b2)
    sigma_bar = mediator(a1, a2, cube.sigma @ b1, cube.sigma @ b2)
    s_bar = mediator(u1, u2, cube.s @ v1, cube.s @ v2)
    rect = Rectangle(Square(x_bar, phi_bar, f_bar, y_bar), Square(u1, f_bar, cube.f, v1))
    return rect, sigma_bar, s_bar


def cube_check(cube: Cube, subject: str = "") -> CheckReport:
    """Cube check: front and right faces are pullbacks.

    Hypotheses: left and back faces are pullbacks, top and bottom faces are
    right saturated, vertical edges are split by sections that commute with
    the horizontal edges, and horizontal edges are surjective.
    """
    c = cube
    surj = all(h.is_surjective() for h in c.horizontal)
    split = all((e @ sec).is_identity() for e, sec in c.splittings)
    sections_commute = ((c.x @ c.sigma).map == (c.s @ c.y).map
                        and (c.a @ c.sigma).map == (c.t @ c.b).map
                        and (c.u @ c.s).map == (c.i @ c.v).map
                        and (c.n @ c.t).map == (c.i @ c.m).map)
    report = CheckReport("cube", subject, [
        ("horizontal edges surjective", surj),
        ("vertical edges split", split),
        ("sections commute with horizontal edges", sections_commute),
        ("left face is a pullback", is_pullback(c.left)),
        ("back face is a pullback", is_pullback(c.back)),
        ("top face right saturated", surj and is_right_saturated(c.top)),
        ("bottom face right saturated", surj and is_right_saturated(c.bottom)),
        _variety_clause(c.x.source, c.x.target, c.a.target, c.u.target),
    ])
    _clauses_or_raise(report)

    rect, sigma_bar, s_bar = kernel_rectangle(cube)
    kernel_report = split_rectangle_check(rect, sigma_bar, s_bar, subject=f"kernel pairs of {subject}")
    report.facts.update({
        "kernel rectangle size": [rect.square1.top.source.size, rect.square1.top.target.size,
                                  rect.square2.top.target.size],
        "kernel rectangle: x_bar, y_bar surjective": rect.square1.top.is_surjective()
        and rect.square1.bottom.is_surjective(),
        "kernel rectangle: back square pullback": kernel_report.facts["square 1 is a pullback"],
        "kernel rectangle: right square pullback": kernel_report.facts["square 2 is a pullback"],
    })
    return _finish(report, {
        "front face is a pullback": is_pullback(c.front),
        "right face is a pullback": is_pullback(c.right),
    })


def split_rectangle_sections(rect: Rectangle):
    """Search sections for the left square of a rectangle: ``(sigma, s)`` or None.

    ``s`` ranges over all sections of the middle edge; for each, a section
    ``sigma`` of the left edge with ``x∘sigma = s∘y`` is searched.
    """
    x, phi, f, y = rect.square1.edges[0], rect.square1.left, rect.square1.right, rect.square1.bottom
    f_cands = [[c for c in range(f.source.size) if f.map[c] == b] for b in range(f.target.size)]
    for s in homomorphisms(f.target, f.source, f_cands):
        cands = [[p for p in range(phi.source.size) if phi.map[p] == z and x.map[p] == s.map[y.map[z]]]
                 for z in range(phi.target.size)]
        if any(not c for c in cands):
            continue
        for sigma in homomorphisms(phi.target, phi.source, cands):
            return sigma, s
    return None


# names used by the command-line contract
prop41_check = split_rectangle_check
prop42_check = pushout_rectangle_check
