from __future__ import annotations

import itertools

import pytest
from oracles import blocks_to_pairs, congruences_naive, normal_subgroups

from gummlab import congruence as C
from gummlab.algebra import Congruence
from gummlab.builders import CORPUS, builtin, corpus
from gummlab.errors import HypothesisViolated, InputError
from gummlab.partition import Partition


def cg(name, blocks):
    a = builtin(name)
    return Congruence.from_blocks(a, blocks)


# --------------------------------------------------------------- generation


def test_principal_congruence_examples():
    z4 = builtin("Z4")
    assert C.principal_congruence(z4, 1, 1).partition.is_discrete()
    assert C.principal_congruence(builtin("bare4"), 0, 1).blocks == ((0, 1), (2,), (3,))
    assert C.principal_congruence(z4, 0, 2).blocks == ((0, 2), (1, 3))


@pytest.mark.parametrize("name", ["Z4", "S3", "V4", "N5", "M3", "chain3", "bare3", "Q8"])
def test_principal_is_least_congruence_containing_pair(name):
    a = builtin(name)
    congs = congruences_naive(a)
    for x, y in itertools.combinations(range(a.size), 2):
        least = set.intersection(*[c for c in congs if (x, y) in c])
        assert set(C.principal_congruence(a, x, y).relation.pairs()) == least


def test_congruence_generated_examples():
    z4 = builtin("Z4")
    assert C.congruence_generated(z4, []).partition.is_discrete()
    assert C.congruence_generated(z4, [(0, 1)]).partition.is_indiscrete()
    assert C.congruence_generated(z4, [(0, 2)]) == C.principal_congruence(z4, 0, 2)
    with pytest.raises(InputError):
        C.congruence_generated(z4, [(0, 4)])


def test_all_congruences_examples():
    assert len(C.all_congruences(builtin("Z1"))) == 1
    assert len(C.all_congruences(builtin("Z4"))) == 3
    assert len(C.all_congruences(builtin("bare4"))) == 15
    with pytest.raises(InputError):
        C.all_congruences(builtin("Z4"), method="bogus")


ORACLE_NAMES = [n for n in CORPUS if builtin(n).size <= 6]


@pytest.mark.parametrize("name", ORACLE_NAMES)
def test_congruences_match_naive_oracle(name):
    a = builtin(name)
    ours = {frozenset(c.relation.pairs()) for c in C.all_congruences(a)}
    assert ours == {frozenset(c) for c in congruences_naive(a)}


@pytest.mark.parametrize("name", [n for n in CORPUS if builtin(n).size <= C.BRUTE_FORCE_CAP])
def test_principal_join_agrees_with_brute_force(name):
    assert C.congruences_agree(builtin(name)) is True


def test_congruences_agree_above_cap_is_none():
    assert C.congruences_agree(builtin("Z12")) is None


# normal-subgroup counts, frozen from the brute-force subset oracle
NORMAL_COUNTS = {"Z4": 3, "V4": 5, "S3": 3, "Q8": 6, "D4": 6, "A4": 3, "Z6": 4}


@pytest.mark.parametrize("name,count", sorted(NORMAL_COUNTS.items()))
def test_group_congruences_biject_with_normal_subgroups(name, count):
    g = builtin(name)
    assert len(normal_subgroups(g)) == count
    lat = C.all_congruences(g)
    assert len(lat) == count
    classes = {frozenset(blk) for c in lat for blk in c.blocks if 0 in blk}
    assert classes == set(normal_subgroups(g))


# ------------------------------------------------------------ lattice ops


def test_meet_join_examples():
    v4 = builtin("V4")
    lat = C.all_congruences(v4)
    atoms = [c for c in lat if len(c.blocks) == 2]
    assert len(atoms) == 3
    assert C.join(atoms[0], atoms[1]).partition.is_indiscrete()
    theta = atoms[0]
    assert C.meet(theta, Congruence.nabla(v4)) == theta
    assert C.join(theta, Congruence.delta(v4)) == theta
    r, s = cg("bare4", [[0, 1], [2, 3]]), cg("bare4", [[0, 2], [1, 3]])
    assert C.meet(r, s).partition.is_discrete()
    with pytest.raises(InputError):
        C.meet(r, Congruence.delta(builtin("Z4")))


def test_lattice_tables_and_bounds():
    lat = C.all_congruences(builtin("S3"))
    assert lat[lat.bottom].partition.is_discrete()
    assert lat[lat.top].partition.is_indiscrete()
    jt, mt = lat.join_table, lat.meet_table
    for i, j in itertools.product(range(len(lat)), repeat=2):
        assert lat[jt[i, j]] == (lat[i] | lat[j])
        assert lat[mt[i, j]] == (lat[i] & lat[j])
    dump = lat.dump()
    assert dump["algebra"] == "S3" and len(dump["congruences"]) == 3
    assert dump["congruences"][0] == [[0], [1], [2], [3], [4], [5]]


# --------------------------------------------------------------- modularity


def test_is_modular_examples():
    assert C.is_modular(builtin("Z8"))  # chain lattice of subgroups
    assert C.is_modular(builtin("V4"))
    res = C.is_modular(builtin("bare4"))
    assert not res
    x, y, z = res.witness
    assert x <= z
    assert (x | (y & z)) != ((x | y) & z)


# ---------------------------------------------------------- Shifting Lemma


def test_shifting_lemma_examples():
    assert C.shifting_lemma_holds(builtin("Z1"))
    for g in ("Z4", "V4", "S3", "Q8", "D4", "A4"):
        assert C.shifting_lemma_holds(builtin(g))


def test_shifting_lemma_bare4_grid():
    # points x=0, y=1, t=2, z=3
    r = cg("bare4", [[0, 1], [2, 3]])
    s = cg("bare4", [[0, 2], [1, 3]])
    t = cg("bare4", [[0, 1], [2], [3]])
    assert (r & s) <= t
    assert C.shifting_lemma_witness(r, s, t) == (0, 1, 2, 3)
    res = C.shifting_lemma_holds(builtin("bare4"))
    assert not res
    rw, sw, tw, (x, y, tt, z) = res.witness
    assert (rw & sw) <= tw
    assert rw.related(x, y) and tw.related(x, y) and sw.related(x, tt) and sw.related(y, z)
    assert rw.related(tt, z) and not tw.related(tt, z)


def _sl_naive(a):
    lat = list(C.all_congruences(a))
    n = a.size
    for r, s, t in itertools.product(lat, repeat=3):
        if not (r & s) <= t:
            continue
        for x, y, tt, z in itertools.product(range(n), repeat=4):
            if (r.related(x, y) and t.related(x, y) and s.related(x, tt) and s.related(y, z)
                    and r.related(tt, z) and not t.related(tt, z)):
                return False
    return True


@pytest.mark.parametrize("name", ["bare3", "bare4", "chain3", "N5", "M3", "Z4", "S3", "chain2^2"])
def test_shifting_lemma_matches_naive_scan(name):
    a = builtin(name)
    assert bool(C.shifting_lemma_holds(a)) == _sl_naive(a)


# ---------------------------------------------------- double relations / Gumm


def test_double_relation_examples():
    z3 = builtin("Z3")
    d = C.double_relation(Congruence.delta(z3), Congruence.delta(z3))
    assert d.quads == {(x, x, x, x) for x in range(3)}
    d = C.double_relation(Congruence.nabla(z3), Congruence.nabla(z3))
    assert len(d) == 3 ** 4
    z2 = builtin("Z2")
    assert len(C.double_relation(Congruence.nabla(z2), Congruence.nabla(z2))) == 16


def test_double_relation_membership_invariant():
    r = cg("bare4", [[0, 1], [2, 3]])
    s = cg("bare4", [[0, 2], [1, 3]])
    d = C.double_relation(r, s)
    for x, t, y, z in d.quads:
        assert s.related(x, t) and s.related(y, z) and r.related(x, y) and r.related(t, z)
    brute = {q for q in itertools.product(range(4), repeat=4)
             if s.related(q[0], q[1]) and s.related(q[2], q[3]) and r.related(q[0], q[2]) and r.related(q[1], q[3])}
    assert d.quads == brute


def test_discrete_fibration_examples():
    r = cg("bare4", [[0, 1], [2, 3]])
    s = cg("bare4", [[0, 2], [1, 3]])
    t = cg("bare4", [[0, 1], [2], [3]])
    assert C.is_discrete_fibration(r, s, r)
    assert not C.is_discrete_fibration(t, s, r)
    with pytest.raises(HypothesisViolated):
        C.is_discrete_fibration(r, s, t)


def test_gumm_check_examples():
    assert C.gumm_check(builtin("Z1"))
    assert C.gumm_check(builtin("S3")) and C.gumm_check(builtin("N5"))
    assert not C.gumm_check(builtin("bare4"))


SMALL_CORPUS = [a.name for a in corpus(max_size=8)]


@pytest.mark.parametrize("name", SMALL_CORPUS)
def test_modular_implies_sl_and_gumm_iff_sl(name):
    a = builtin(name)
    lat = C.all_congruences(a)
    sl = bool(C.shifting_lemma_holds(lat))
    if C.is_modular(lat):
        assert sl
    assert bool(C.gumm_check(lat)) == sl


# ------------------------------------------------------------ permutability


def test_permutability_examples():
    r = cg("chain3", [[0, 1], [2]])
    assert C.permutability(r, r) == {"permute2": True, "permute3": True}
    s = cg("chain3", [[0], [1, 2]])
    assert not C.permutability(r, s)["permute2"]
    lat = list(C.all_congruences(builtin("S3")))
    assert all(C.permutability(x, y)["permute2"] for x in lat for y in lat)


@pytest.mark.parametrize("name", SMALL_CORPUS)
def test_permute2_implies_permute3(name):
    lat = list(C.all_congruences(builtin(name)))
    for x, y in itertools.product(lat, repeat=2):
        p = C.permutability(x, y)
        assert p["permute3"] or not p["permute2"]


def test_permutability_scan():
    assert C.permutability_scan(builtin("Q8"))
    res = C.permutability_scan(builtin("chain3"))
    assert not res and "pair" in res.witness


# ---------------------------------------------------------------- Bourn


def test_bourn_examples():
    r = cg("S3", [[0, 1, 2, 3, 4, 5]])
    s = Congruence.delta(builtin("S3"))
    assert C.permutability(r, s)["permute2"]
    for g in ("Z4", "S3", "Q8", "A4", "D6"):
        res = C.bourn_check(builtin(g))
        assert res and res.hypothesis_met
    res = C.bourn_check(builtin("chain3"))
    assert res and res.hypothesis_met


def test_bourn_hypothesis_flag_on_sl_failure():
    res = C.bourn_check(builtin("bare4"))
    assert not res.hypothesis_met


@pytest.mark.parametrize("name", SMALL_CORPUS)
def test_bourn_no_counterexample_when_sl_holds(name):
    res = C.bourn_check(builtin(name))
    assert res or not res.hypothesis_met


def test_sl_counterexample_search_finds_bare4():
    found = C.sl_counterexample_search([builtin(f"bare{n}") for n in range(1, 5)])
    assert found is not None
    a, res = found
    assert a.name == "bare4" and res.witness[3] == (0, 1, 2, 3)
    assert C.sl_counterexample_search([builtin("S3"), builtin("M3")]) is None


def test_partition_congruence_round_trip():
    a = builtin("Z6")
    for c in C.all_congruences(a):
        assert Congruence(a, Partition.from_relation(c.relation)) == c
        assert set(c.relation.pairs()) == blocks_to_pairs(c.blocks)
