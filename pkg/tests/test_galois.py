from __future__ import annotations

import itertools

import pytest
from oracles import commutes, normal_subgroups

from gummlab import galois as G
from gummlab.algebra import Homomorphism, all_homomorphisms, identity, is_isomorphic, kernel_pair
from gummlab.builders import builtin, galois_catalog, is_abelian
from gummlab.diagram import Square, is_pullback, pullback
from gummlab.errors import HypothesisViolated, InputError, NotApplicable


def h(src, tgt, fn):
    a, b = builtin(src), builtin(tgt)
    return Homomorphism(a, b, [fn(x) for x in range(a.size)])


def sign():
    return h("S3", "Z2", lambda a: int(a in (1, 2, 5)))


def proj_s3():
    return h("S3xZ2", "S3", lambda a: a // 2)


def q8_mod_center():
    q8 = builtin("Q8")
    z = G.center(q8)
    for f in all_homomorphisms(q8, builtin("V4")):
        if f.is_surjective() and G.kernel_elements(f) == z:
            return f
    raise AssertionError("no Q8 -> V4 with kernel the centre")


def derived_subgroup_naive(g):
    """Smallest normal subgroup with abelian quotient, from the subset oracle."""
    mul, inv = g.lists[0], g.lists[1]
    comms = {mul[mul[x][y]][mul[inv[x]][inv[y]]] for x in range(g.size) for y in range(g.size)}
    return min((n for n in normal_subgroups(g) if comms <= n), key=len)


# ---------------------------------------------------------- abelianization


def test_abelianize_examples():
    a, eta = G.abelianize(builtin("Z4"))
    assert eta.is_bijective()
    a, eta = G.abelianize(builtin("S3"))
    assert a.size == 2
    a, eta = G.abelianize(builtin("Q8"))
    assert is_isomorphic(a, builtin("V4"))
    with pytest.raises(InputError):
        G.abelianize(builtin("chain3"))


@pytest.mark.parametrize("g", [a.name for a in galois_catalog()] + ["A4", "D6", "Dic3", "Z2xD4"])
def test_abelianize_matches_derived_subgroup_oracle(g):
    grp = builtin(g)
    a, eta = G.abelianize(grp)
    derived = derived_subgroup_naive(grp)
    assert set(G.kernel_elements(eta)) == set(derived) == set(G.commutator_subgroup(grp))
    assert a.size * len(derived) == grp.size
    assert is_abelian(a) and eta.is_surjective()
    # idempotent: reflecting the reflection is an isomorphism
    assert G.abelianize(a)[1].is_bijective()


def test_reflection_interface():
    refl = G.ABELIANIZATION
    obj, eta = refl.reflect_obj(builtin("S3"))
    assert obj.size == 2 and eta.is_surjective()
    assert refl.is_reflected(builtin("V4")) and not refl.is_reflected(builtin("S3"))


@pytest.mark.parametrize("src,tgt", list(itertools.product(["Z4", "V4", "S3", "Q8", "D4", "Z6"], repeat=2)))
def test_unit_is_natural(src, tgt):
    refl = G.ABELIANIZATION
    for f in all_homomorphisms(builtin(src), builtin(tgt)):
        lhs = refl.reflect_hom(f) @ refl.unit(f.source)
        rhs = refl.unit(f.target) @ f
        assert lhs.map == rhs.map


# ------------------------------------------------------------ group helpers


def test_group_helpers():
    assert G.center(builtin("V4")) == (0, 1, 2, 3)
    assert G.center(builtin("S3")) == (0,)
    assert len(G.center(builtin("Q8"))) == 2
    s = G.find_section(sign())
    assert s is not None and (sign() @ s).is_identity()
    assert s.map == (0, 1)
    assert G.find_section(h("Z4", "Z2", lambda a: a % 2)) is None
    assert G.is_split(proj_s3()) and not G.is_split(h("Z4", "Z2", lambda a: a % 2))


@pytest.mark.parametrize("g", [a.name for a in galois_catalog()])
def test_center_matches_commuting_elements(g):
    grp = builtin(g)
    expected = tuple(z for z in range(grp.size) if all(commutes(grp, z, x) for x in range(grp.size)))
    assert G.center(grp) == expected


# ---------------------------------------------------------- naturality square


def test_naturality_square_examples():
    s3 = builtin("S3")
    sq = G.naturality_square(identity(s3))
    assert is_pullback(sq)
    sq = G.naturality_square(sign())
    assert kernel_pair(sq.top) == kernel_pair(sign())
    assert sq.right.is_bijective()
    assert sq.left == sign()
    sq = G.naturality_square(proj_s3())
    assert is_isomorphic(sq.top.target, builtin("V4"))


def test_extension_examples():
    s3 = builtin("S3")
    idf = identity(s3)
    for pred in (G.birkhoff_pushout_check, G.is_trivial_extension, G.is_normal_extension):
        assert pred(idf)
    assert G.birkhoff_pushout_check(sign())
    assert G.is_trivial_extension(proj_s3())
    assert not G.is_trivial_extension(sign())
    assert G.is_normal_extension(h("Z4", "Z2", lambda a: a % 2))
    assert not G.is_normal_extension(sign())
    with pytest.raises(HypothesisViolated):
        G.is_trivial_extension(h("Z2", "Z4", lambda a: 2 * a))


def test_central_extension_examples():
    v = G.is_central_extension(identity(builtin("Q8")))
    assert v.by_normal and v.by_kernel_center and v.witness is not None and v.agree
    v = G.is_central_extension(q8_mod_center())
    assert v.by_normal and v.by_kernel_center and v.witness is not None
    v = G.is_central_extension(sign())
    assert v.by_normal is False and v.by_kernel_center is False and v.witness is None
    v = G.is_central_extension(sign(), strategy="by_kernel_center")
    assert v.by_normal is None and v.agree is None and not v.witness_searched
    with pytest.raises(InputError):
        G.is_central_extension(sign(), strategy="guess")


def test_classify_reports():
    rep = G.classify(sign())
    f = rep.facts
    assert rep.verdict is True
    assert f["split"] and not f["trivial"] and not f["normal"] and not f["central(by_kernel_center)"]
    rep = G.classify(proj_s3())
    assert rep.facts["trivial"] and rep.facts["central(by_normal)"]
    rep = G.classify(h("Z2", "Z4", lambda a: 2 * a))
    assert rep.verdict is None


# -------------------------------------------------------- split central


def test_split_central_examples():
    rep = G.split_central_check(identity(builtin("S3")))
    assert rep.verdict and rep.facts["f is a trivial extension"]
    rep = G.split_central_check(proj_s3())
    assert rep.verdict and rep.facts["cube verdict"] is True
    with pytest.raises(NotApplicable):
        G.split_central_check(sign())
    with pytest.raises(NotApplicable):
        G.split_central_check(h("Z4", "Z2", lambda a: a % 2))
    assert G.theorem53_check is G.split_central_check
    assert G.cor54_scan is G.central_normal_scan


# ---------------------------------------------------------- admissibility


def test_admissibility_examples():
    assert G.admissibility_check(Square(*[identity(builtin("Z4"))] * 4))
    w = h("Z4", "Z2", lambda a: a % 2)
    a_alg, pb, pu = pullback(sign(), w)
    assert a_alg.size == 12
    sq = Square(pu, pb, w, sign())
    assert G.admissibility_check(sq)
    rep = G.admissibility_report(sq)
    assert rep.verdict is True


def test_admissibility_projection_scan():
    w = h("V4", "Z2", lambda a: a // 2)
    for b in galois_catalog():
        for m in all_homomorphisms(b, w.target):
            _, pb, pu = pullback(m, w)
            assert G.admissibility_check(Square(pu, pb, w, m))


def test_admissibility_hypotheses():
    z4 = builtin("Z4")
    w = h("Z4", "Z2", lambda a: a % 2)
    with pytest.raises(HypothesisViolated):
        G.admissibility_check(Square(identity(z4), identity(z4), w, w))
    s3 = builtin("S3")
    with pytest.raises(HypothesisViolated):
        G.admissibility_check(Square(*[identity(s3)] * 4))


# ---------------------------------------------------------------- invariants


SURJS = G.catalog_surjections()


def test_catalog_surjection_count_is_stable():
    assert len(SURJS) == 328


def test_implication_chain_and_agreement():
    for f in SURJS:
        trivial = G.is_trivial_extension(f)
        normal = G.is_normal_extension(f)
        central = G.kernel_is_central(f)
        assert (not trivial or normal) and (not normal or central)
        assert normal == central
        assert G.birkhoff_pushout_check(f)


def test_witnesses_are_valid_and_exist_for_normal():
    for f in SURJS[::7]:
        y = G.witness_search(f)
        if y is not None:
            _, _, phi = G.pulled_back_extension(f, y)
            assert G.is_trivial_extension(phi) and y.is_surjective() and y.target == f.target
        assert (y is not None) == G.is_normal_extension(f)


def test_scans_are_clean():
    assert G.central_normal_scan(surjs=SURJS).passed
    assert G.birkhoff_scan(surjs=SURJS).passed
    summary = G.split_central_scan(surjs=SURJS)
    assert summary.passed and summary.total > 0
    assert G.admissibility_scan(seed=3, budget=100).passed
    assert G.central_normal_scan(catalog=[]).total == 0
    one = G.central_normal_scan(surjs=[identity(builtin("Z3"))])
    assert one.passed and one.total == 1
