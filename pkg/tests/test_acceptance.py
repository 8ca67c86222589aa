"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import json
import random
import subprocess
import sys
import time

import pytest

from gummlab import galois as G
from gummlab import relcalc
from gummlab.algebra import random_homomorphism
from gummlab.builders import CORPUS, builtin
from gummlab.cli import main
from gummlab.congruence import (
    BRUTE_FORCE_CAP,
    all_congruences,
    bourn_check,
    congruences_agree,
    gumm_check,
    is_modular,
    shifting_lemma_holds,
)
from gummlab.diagram import cube_check, pushout_rectangle_check, split_rectangle_check
from gummlab.generate import cube_catalog, generate_rectangles

SEED = 1


@pytest.fixture
def verdict(capsys, request):
    """Print one PASS/FAIL line per criterion, visible without ``-s``."""
    def emit(ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {request.node.name}: {detail}")
        assert ok, detail
    return emit


def _lattices():
    return {name: all_congruences(builtin(name)) for name in CORPUS}


@pytest.fixture(scope="module")
def lattices():
    return _lattices()


def test_criterion_01_map_relation_laws(verdict):
    start = time.perf_counter()
    rng = random.Random(f"{SEED}:acceptance-map-laws")
    algebras = [builtin(n) for n in CORPUS]
    checked = failures = 0
    while checked < 1000:
        a = rng.choice(algebras)
        b = rng.choice([c for c in algebras if c.signature == a.signature])
        f = random_homomorphism(a, b, rng)
        if f is None:
            continue
        checked += 1
        laws = relcalc.verify_map_relation_laws(f)
        failures += not (laws["law1"] and laws["law2"] and laws["epi_iff"])
    dt = time.perf_counter() - start
    verdict(failures == 0 and checked == 1000 and dt < 5,
            f"{checked} homomorphisms, {failures} failures, {dt:.2f}s (< 5s)")


def test_criterion_02_modular_implies_shifting(verdict):
    start = time.perf_counter()
    violations, modular = [], 0
    for name in CORPUS:
        lat = all_congruences(builtin(name))
        if is_modular(lat):
            modular += 1
            if not shifting_lemma_holds(lat):
                violations.append(name)
    dt = time.perf_counter() - start
    verdict(not violations and dt < 60,
            f"{len(CORPUS)} algebras, {modular} modular, violations {violations}, {dt:.2f}s (< 60s)")


def test_criterion_03_gumm_equals_shifting(verdict, lattices):
    disagree = [n for n, lat in lattices.items() if bool(gumm_check(lat)) != bool(shifting_lemma_holds(lat))]
    verdict(not disagree, f"{len(lattices)} algebras, disagreements {disagree}")


def test_criterion_04_sl_counterexample_search(verdict, capsys):
    start = time.perf_counter()
    code = main(["search", "sl-counterexample", "--max-size", "4", "--json"])
    dt = time.perf_counter() - start
    facts = json.loads(capsys.readouterr().out)["facts"]
    ok = (code == 0 and facts["algebra"] == "bare4" and facts["R^S <= T"] is True
          and facts["(t,z) in T"] is False and dt < 1)
    verdict(ok, f"witness on {facts.get('algebra')} (x,y,t,z)={facts.get('x,y,t,z')}, {dt:.3f}s (< 1s)")


def test_criterion_05_enumeration_oracle(verdict, lattices):
    small = [n for n in CORPUS if builtin(n).size <= BRUTE_FORCE_CAP]
    disagree = [n for n in small if congruences_agree(builtin(n)) is not True]
    expected = {"Z4": 3, "V4": 5, "S3": 3, "bare4": 15}
    counts = {n: len(lattices[n]) for n in expected}
    verdict(not disagree and counts == expected,
            f"{len(small)} algebras compared, disagreements {disagree}, counts {counts}")


def test_criterion_06_permuting_congruences(verdict, lattices):
    start = time.perf_counter()
    scanned, triples, bad = 0, 0, []
    for name, lat in lattices.items():
        if not shifting_lemma_holds(lat):
            continue
        res = bourn_check(lat)
        scanned += 1
        triples += res.checked
        if not res:
            bad.append(name)
    dt = time.perf_counter() - start
    verdict(not bad and dt < 120,
            f"{scanned} algebras satisfying SL, {triples} triples, counterexamples {bad}, {dt:.2f}s (< 120s)")


IDENTITIES = {
    "split": ("R_x R_phi = R_phi R_x", "phi(R_x) = R_y", "phi x° = y° f"),
    "pushout": ("R_x R_phi = R_phi R_x", "RR = R"),
}


@pytest.mark.parametrize("kind", ["split", "pushout"])
def test_criterion_07_rectangles(verdict, kind):
    total = nontrivial = 0
    failures = []
    for inst in generate_rectangles(kind, seed=SEED, budget=10_000, max_order=8):
        total += 1
        nontrivial += inst.rect.is_nontrivial()
        if kind == "split":
            rep = split_rectangle_check(inst.rect, inst.sigma, inst.s, inst.label)
        else:
            rep = pushout_rectangle_check(inst.rect, inst.label)
        facts_ok = all(rep.facts[k] is True for k in IDENTITIES[kind])
        squares_ok = rep.facts["square 1 is a pullback"] and rep.facts["square 2 is a pullback"]
        if not (rep.verdict and facts_ok and squares_ok):
            failures.append(inst.label)
    verdict(not failures and nontrivial >= 1,
            f"{kind}: {total} instances, {nontrivial} nontrivial, failures {failures[:5]}")


def test_criterion_08_cubes(verdict):
    cubes = cube_catalog()
    labels = [label for label, _ in cubes]
    bad = []
    for label, cube in cubes:
        rep = cube_check(cube, label)
        if not (rep.facts["front face is a pullback"] and rep.facts["right face is a pullback"]):
            bad.append(label)
    has_s3 = any(label.startswith("S3xZ2 -> S3") for label in labels)
    verdict(not bad and len(cubes) >= 3 and has_s3, f"{len(cubes)} cubes, failures {bad}")


def test_criterion_09_galois(verdict):
    surjs = G.catalog_surjections()
    birk = G.birkhoff_scan(surjs=surjs)
    split = G.split_central_scan(surjs=surjs)
    agree = [f for f in surjs
             if G.is_central_extension(f, "by_normal").by_normal
             != G.is_central_extension(f, "by_kernel_center").by_kernel_center]
    adm = G.admissibility_scan(seed=SEED, budget=500)
    ok = birk.passed and split.passed and split.total > 0 and not agree and adm.passed
    verdict(ok, f"(a) {birk.total} pushouts ok={birk.passed}; (b) {split.total} split central ok={split.passed}; "
                f"(c) {len(surjs)} surjections, {len(agree)} disagreements; (d) {adm.total} squares ok={adm.passed}")


@pytest.fixture(scope="module")
def suite_runs(tmp_path_factory):
    out = tmp_path_factory.mktemp("suite")
    runs = []
    for jobs in (1, 3):
        path = out / f"suite-{jobs}.json"
        start = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "gummlab", "suite", "run", "--seed", str(SEED),
                               "--jobs", str(jobs), "--json", "--output", str(path)],
                              capture_output=True, text=True, check=False)
        runs.append((jobs, proc.returncode, time.perf_counter() - start, path.read_bytes(), proc.stderr))
    return runs


def test_criterion_09_full_suite_time(verdict, suite_runs):
    jobs, code, dt, data, err = suite_runs[0]
    report = json.loads(data)
    failed = [p["id"] for p in report["properties"] if not p["passed"]]
    verdict(code == 0 and report["passed"] and dt < 600,
            f"suite run (jobs={jobs}) exit {code}, failed properties {failed}, {dt:.1f}s (< 600s) {err.strip()}")


def test_criterion_10_determinism(verdict, suite_runs):
    (j1, c1, _, a, _), (j2, c2, _, b, _) = suite_runs
    verdict(c1 == c2 == 0 and a == b,
            f"--jobs {j1} vs --jobs {j2}: {len(a)} vs {len(b)} bytes, identical={a == b}")
