from __future__ import annotations

import itertools

import pytest

from gummlab import relcalc as rc
from gummlab.algebra import Congruence, Homomorphism, identity, kernel_pair, quotient, trivial_algebra
from gummlab.builders import builtin
from gummlab.congruence import all_congruences
from gummlab.diagram import (
    Cube,
    Rectangle,
    Square,
    cube_check,
    identity_cube,
    identity_rectangle,
    identity_square,
    is_pullback,
    is_pushout,
    is_right_saturated,
    mediator,
    prop41_check,
    prop42_check,
    pullback,
    pullback_mediators,
    pushout_by_cocones,
    pushout_rectangle_check,
    split_rectangle_check,
)
from gummlab.errors import HypothesisViolated, InputError
from gummlab.generate import cube_catalog, hand_rectangles


def h(src, tgt, fn):
    a, b = builtin(src), builtin(tgt)
    return Homomorphism(a, b, [fn(x) for x in range(a.size)])


def mod2():
    return h("Z4", "Z2", lambda a: a % 2)


def pullback_square(f, g):
    p, px, pz = pullback(f, g)
    return Square(px, pz, f, g)


# ---------------------------------------------------------------- pullbacks


def test_pullback_examples():
    z4 = builtin("Z4")
    p, px, pz = pullback(identity(z4), identity(z4))
    assert p.size == 4 and px.is_bijective() and pz.is_bijective()
    one = trivial_algebra(z4.signature)
    to_one = Homomorphism(z4, one, [0] * 4)
    s3_one = Homomorphism(builtin("S3"), one, [0] * 6)
    p, _, _ = pullback(to_one, s3_one)
    assert p.size == 24
    p, px, pz = pullback(mod2(), mod2())
    assert p.size == 8
    assert all(x % 2 == z % 2 for x, z in zip(px.map, pz.map))


def test_pullback_requires_common_codomain():
    with pytest.raises(InputError):
        pullback(mod2(), identity(builtin("Z4")))


def test_is_pullback_examples():
    assert is_pullback(pullback_square(mod2(), mod2()))
    assert is_pullback(identity_square(builtin("S3")))
    # the diagonal subgroup {(a, a)} of the order-8 pullback is a proper cone apex
    z4 = builtin("Z4")
    assert not is_pullback(Square(identity(z4), identity(z4), mod2(), mod2()))


def test_square_must_commute():
    z4 = builtin("Z4")
    with pytest.raises(InputError):
        Square(identity(z4), h("Z4", "Z4", lambda a: (2 * a) % 4), identity(z4), identity(z4))


def test_mediator():
    p, px, pz = pullback(mod2(), mod2())
    z4 = builtin("Z4")
    k = mediator(px, pz, identity(z4), identity(z4))
    assert (px @ k).is_identity() and (pz @ k).is_identity()
    with pytest.raises(InputError):
        mediator(px, pz, identity(z4), h("Z4", "Z4", lambda a: (2 * a) % 4))


COSPANS = [
    (("Z4", "Z2", lambda a: a % 2), ("Z2", "Z2", lambda a: a)),
    (("S3", "Z2", lambda a: int(a in (1, 2, 5))), ("Z2", "Z2", lambda a: a)),
    (("V4", "Z2", lambda a: a // 2), ("Z4", "Z2", lambda a: a % 2)),
    (("chain3", "chain2", lambda a: int(a == 2)), ("chain2", "chain2", lambda a: a)),
    (("bare3", "bare2", lambda a: min(a, 1)), ("bare2", "bare2", lambda a: a)),
]
CONE_SOURCES = ["Z1", "Z2", "Z3", "bare1", "bare2", "chain2", "chain1"]


@pytest.mark.parametrize("cospan", COSPANS)
def test_pullback_universal_property(cospan):
    f, g = h(*cospan[0]), h(*cospan[1])
    sq = pullback_square(f, g)
    assert is_pullback(sq)
    for w in CONE_SOURCES:
        w_alg = builtin(w)
        if w_alg.signature != f.source.signature:
            continue
        assert all(c == 1 for c in pullback_mediators(sq, w_alg))


def test_non_pullback_has_cone_without_unique_mediator():
    z4 = builtin("Z4")
    sq = Square(identity(z4), identity(z4), mod2(), mod2())
    counts = list(pullback_mediators(sq, builtin("Z4")))
    assert any(c != 1 for c in counts)


# ------------------------------------------------------------------ pushouts


def _span_square(p_name, alpha, beta, gamma):
    """Square of quotient maps P -> P/alpha, P -> P/beta, both onto P/gamma."""
    a = builtin(p_name)
    qa, pa = quotient(a, alpha)
    qb, pb = quotient(a, beta)
    qg, pg = quotient(a, gamma)
    right = [0] * qa.size
    bottom = [0] * qb.size
    for e in range(a.size):
        right[pa.map[e]] = pg.map[e]
        bottom[pb.map[e]] = pg.map[e]
    return Square(pa, pb, Homomorphism(qa, qg, right), Homomorphism(qb, qg, bottom))


PUSHOUT_ALGEBRAS = ["Z4", "V4", "S3", "Z6", "chain3", "N5", "M3", "bare3", "bare4", "chain2^2"]


@pytest.mark.parametrize("name", PUSHOUT_ALGEBRAS)
def test_is_pushout_matches_join_and_cocone_oracle(name):
    lat = list(all_congruences(builtin(name)))
    for alpha, beta, gamma in itertools.product(lat, repeat=3):
        if not ((alpha | beta) <= gamma):
            continue
        sq = _span_square(name, alpha, beta, gamma)
        expected = gamma == (alpha | beta)
        assert is_pushout(sq) == expected
        assert pushout_by_cocones(sq) == expected


def test_pushout_examples():
    assert is_pushout(identity_square(builtin("S3")))
    z4 = builtin("Z4")
    delta = Congruence.from_blocks(z4, [[0], [1], [2], [3]])
    half = Congruence.from_blocks(z4, [[0, 2], [1, 3]])
    nabla = Congruence.from_blocks(z4, [[0, 1, 2, 3]])
    assert is_pushout(_span_square("Z4", delta, half, half))
    assert not is_pushout(_span_square("Z4", delta, half, nabla))


def test_pushout_needs_surjections():
    emb = h("Z2", "Z4", lambda a: 2 * a)
    sq = Square(emb, identity(builtin("Z2")), identity(builtin("Z4")), emb)
    with pytest.raises(HypothesisViolated):
        is_pushout(sq)
    with pytest.raises(HypothesisViolated):
        is_right_saturated(sq)


# -------------------------------------------------------- right saturation


def test_right_saturation_examples():
    assert is_right_saturated(identity_square(builtin("Q8")))
    z4 = builtin("Z4")
    one = trivial_algebra(z4.signature)
    to_one_z2 = Homomorphism(builtin("Z2"), one, [0, 0])
    to_one_z4 = Homomorphism(z4, one, [0] * 4)
    sq = Square(mod2(), identity(z4), to_one_z2, to_one_z4)
    assert not is_right_saturated(sq)


@pytest.mark.parametrize("name", ["Z4", "V4", "S3", "Z6", "Q8", "D4"])
def test_group_pushouts_are_right_saturated(name):
    lat = list(all_congruences(builtin(name)))
    for alpha, beta in itertools.product(lat, repeat=2):
        sq = _span_square(name, alpha, beta, alpha | beta)
        assert is_pushout(sq) and is_right_saturated(sq)


# ------------------------------------------------------------- rectangles


def test_rectangle_shared_edge():
    sq1 = identity_square(builtin("Z2"))
    with pytest.raises(InputError):
        Rectangle(sq1, identity_square(builtin("Z3")))


def test_identity_rectangle_passes_both_checks():
    rect = identity_rectangle(builtin("S3"))
    i = identity(builtin("S3"))
    rep = split_rectangle_check(rect, i, i)
    assert rep.verdict is True
    assert pushout_rectangle_check(rect).verdict is True


@pytest.mark.parametrize("inst", hand_rectangles("split"), ids=lambda i: i.label)
def test_split_hand_rectangles(inst):
    rep = split_rectangle_check(inst.rect, inst.sigma, inst.s)
    assert rep.verdict is True
    for fact in ("phi x° = y° f", "phi(R_x) = R_y", "R_ux ^ R_phi = Delta", "square 1 is a pullback",
                 "square 2 is a pullback"):
        assert rep.facts[fact] is True
    # independent relational check of phi x° = y° f via pair sets
    sq = inst.rect.square1
    lhs = {(a, sq.left.map[p]) for p in range(sq.top.source.size) for a in [sq.top.map[p]]}
    rhs = {(c, z) for c in range(sq.right.source.size) for z in range(sq.bottom.source.size)
           if sq.right.map[c] == sq.bottom.map[z]}
    assert lhs == rhs
    assert rc.rel_image(sq.left, kernel_pair(sq.top).relation) == kernel_pair(sq.bottom).relation


@pytest.mark.parametrize("inst", hand_rectangles("pushout"), ids=lambda i: i.label)
def test_pushout_hand_rectangles(inst):
    rep = pushout_rectangle_check(inst.rect)
    assert rep.verdict is True
    assert rep.facts["RR = R"] is True and rep.facts["R = R_f"] is True


def test_split_check_rejects_non_split_left_column():
    z4, z2 = builtin("Z4"), builtin("Z2")
    i4, i2 = identity(z4), identity(z2)
    rect = Rectangle(Square(i4, mod2(), mod2(), i2), Square(i4, mod2(), mod2(), i2))
    bogus = Homomorphism(z2, z4, [0, 2])
    with pytest.raises(HypothesisViolated) as exc:
        split_rectangle_check(rect, bogus, bogus)
    assert "split" in str(exc.value)


def test_checks_reject_non_pullback_rectangle():
    z4 = builtin("Z4")
    i4 = identity(z4)
    rect = Rectangle(identity_square(z4), Square(i4, i4, mod2(), mod2()))
    assert not is_pullback(rect.whole)
    with pytest.raises(HypothesisViolated) as exc:
        pushout_rectangle_check(rect)
    assert "whole rectangle" in str(exc.value)
    with pytest.raises(HypothesisViolated):
        split_rectangle_check(rect, i4, i4)


def test_contract_aliases():
    assert prop41_check is split_rectangle_check
    assert prop42_check is pushout_rectangle_check


# -------------------------------------------------------------------- cubes


def test_identity_cube_passes():
    assert cube_check(identity_cube(builtin("S3"))).verdict is True


@pytest.mark.parametrize("label,cube", cube_catalog(), ids=[c[0] for c in cube_catalog()])
def test_cube_catalog(label, cube):
    rep = cube_check(cube, subject=label)
    assert rep.verdict is True
    assert rep.facts["kernel rectangle: back square pullback"] is True


def _to_one(name):
    a = builtin(name)
    return Homomorphism(a, trivial_algebra(a.signature), [0] * a.size)


def _from_one(name):
    a = builtin(name)
    return Homomorphism(trivial_algebra(a.signature), a, [0])


def test_cube_with_non_pullback_back_face():
    # bottom face trivial; back face x: V4 -> Z2 over 1 -> 1 is not a pullback
    one = identity(trivial_algebra(builtin("Z2").signature))
    half = h("V4", "Z2", lambda a: a // 2)
    cube = Cube(x=half, a=identity(builtin("V4")), u=identity(builtin("Z2")), n=half,
                y=one, b=one, v=one, m=one,
                phi=_to_one("V4"), f=_to_one("Z2"), g=_to_one("V4"), w=_to_one("Z2"),
                sigma=_from_one("V4"), s=_from_one("Z2"), t=_from_one("V4"), i=_from_one("Z2"))
    assert is_pullback(cube.left) and not is_pullback(cube.back)
    with pytest.raises(HypothesisViolated) as exc:
        cube_check(cube)
    assert "back face" in str(exc.value)
