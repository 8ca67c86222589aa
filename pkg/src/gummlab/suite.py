"""The acceptance battery: every checked property over the versioned corpus.

Work is split into independent tasks whose results are merged in task
order, so the JSON summary is identical for any number of worker processes.
Wall-clock timings are kept for the text summary only.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from . import relcalc
from .algebra import random_homomorphism
from .builders import CATALOG_VERSION, CORPUS, builtin
from .congruence import (
    BRUTE_FORCE_CAP,
    all_congruences,
    bourn_check,
    brute_force_congruences,
    congruences_agree,
    gumm_check,
    is_modular,
    shifting_lemma_holds,
    sl_counterexample_search,
)
from .diagram import cube_check, pushout_rectangle_check, split_rectangle_check
from .errors import GenerationExhausted
from .galois import admissibility_scan, birkhoff_scan, central_normal_scan, split_central_scan
from .generate import KINDS, cube_catalog, generate_rectangles
from .report import plain

SUITE_SCHEMA = "gummlab.suite/1"
MAP_LAWS_SAMPLES = 1000
MAP_LAWS_CHUNKS = 4
RECTANGLE_BUDGET = 10_000
ADMISSIBILITY_BUDGET = 500
SL_SEARCH_MAX_SIZE = 4
MAX_FAILURES = 5

# expected congruence counts, computed by the brute-force enumerator
EXPECTED_COUNTS = {"Z4": 3, "V4": 5, "S3": 3, "bare4": 15}

PROPERTIES = {
    "1": "ff°f = f, f°ff° = f°, ff° = 1 iff onto, on random homomorphisms",
    "2": "modular congruence lattice implies Shifting Lemma",
    "3": "discrete-fibration check agrees with Shifting Lemma",
    "4": "Shifting Lemma counterexample on bare sets",
    "5": "principal-join enumeration agrees with brute force",
    "6": "permuting congruences: RS = SR and R^S <= T <= R imply TS = ST",
    "7": "split and pushout rectangles: both squares are pullbacks",
    "8": "cubes: front and right faces are pullbacks",
    "9": "abelianization: pushouts, split central trivial, central iff normal, admissibility",
}


# ---------------------------------------------------------------------- tasks


def _task_map_laws(seed: int, chunk: int, count: int) -> dict:
    rng = random.Random(f"{seed}:map-laws:{chunk}")
    algebras = [builtin(n) for n in CORPUS]
    checked, failures, surjective = 0, [], 0
    while checked < count:
        a = rng.choice(algebras)
        peers = [b for b in algebras if b.signature == a.signature]
        b = rng.choice(peers)
        f = random_homomorphism(a, b, rng)
        if f is None:
            continue
        checked += 1
        laws = relcalc.verify_map_relation_laws(f)
        surjective += laws["surjective"]
        if not (laws["law1"] and laws["law2"] and laws["epi_iff"]):
            failures.append({"f": f, "laws": laws})
    return {"checked": checked, "failures": failures, "surjective": surjective}


def _task_algebra(name: str) -> dict:
    a = builtin(name)
    lat = all_congruences(a)
    modular = is_modular(lat)
    sl = shifting_lemma_holds(lat)
    gumm = gumm_check(lat)
    agree = congruences_agree(a, BRUTE_FORCE_CAP)
    count_brute = len(brute_force_congruences(a)) if name in EXPECTED_COUNTS else None
    bourn = bourn_check(lat) if sl else None
    return {
        "name": name,
        "congruences": len(lat),
        "modular": modular.holds,
        "shifting": sl.holds,
        "sl_witness": plain(sl.witness),
        "gumm": gumm.holds,
        "agree": agree,
        "count_brute": count_brute,
        "bourn": None if bourn is None else bourn.holds,
        "bourn_witness": None if bourn is None else plain(bourn.witness),
        "bourn_checked": 0 if bourn is None else bourn.checked,
    }


def _task_sl_search(max_size: int) -> dict:
    found = sl_counterexample_search(builtin(f"bare{n}") for n in range(1, max_size + 1))
    if found is None:
        return {"found": None}
    a, res = found
    r, s, t, (x, y, tt, z) = res.witness
    valid = ((r & s) <= t and r.related(x, y) and t.related(x, y) and s.related(x, tt)
             and s.related(y, z) and r.related(tt, z) and not t.related(tt, z))
    return {"found": {"algebra": a.name, "R": plain(r), "S": plain(s), "T": plain(t),
                      "xytz": [x, y, tt, z]}, "valid": valid}


def _task_rectangles(kind: str, seed: int, budget: int) -> dict:
    check = split_rectangle_check if kind == "split" else pushout_rectangle_check
    total = nontrivial = 0
    failures = []
    try:
        for inst in generate_rectangles(kind, seed, budget):
            total += 1
            nontrivial += inst.rect.is_nontrivial()
            rep = check(inst.rect, inst.sigma, inst.s, inst.label) if kind == "split" \
                else check(inst.rect, inst.label)
            if not rep.verdict:
                failures.append(rep.to_dict())
    except GenerationExhausted as exc:
        return {"kind": kind, "checked": 0, "nontrivial": 0, "failures": [str(exc)]}
    return {"kind": kind, "checked": total, "nontrivial": nontrivial, "failures": failures}


def _task_cubes() -> dict:
    out = []
    for label, cube in cube_catalog():
        rep = cube_check(cube, label)
        out.append({"label": label, "verdict": rep.verdict,
                    "front": rep.facts.get("front face is a pullback"),
                    "right": rep.facts.get("right face is a pullback")})
    return {"cubes": out}


def _task_galois(part: str, seed: int) -> dict:
    if part == "birkhoff":
        res = birkhoff_scan()
    elif part == "split-central":
        res = split_central_scan()
    elif part == "central-normal":
        res = central_normal_scan()
    else:
        res = admissibility_scan(seed, ADMISSIBILITY_BUDGET)
    return {"part": part, **res.to_dict()}


def _run_task(task: tuple) -> tuple[Any, float]:
    fn: Callable = task[0]
    start = time.perf_counter()
    out = fn(*task[1:])
    return out, time.perf_counter() - start


# -------------------------------------------------------------------- runner


@dataclass
class PropertyResult:
    id: str
    passed: bool
    checked: int
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seconds: float | None = None

    def to_dict(self) -> dict:
        return {"id": self.id, "name": PROPERTIES[self.id], "passed": self.passed,
                "checked": self.checked, "details": plain(self.details),
                "failures": plain(self.failures[:MAX_FAILURES]), "failure_count": len(self.failures)}


@dataclass
class SuiteResult:
    seed: int
    properties: list[PropertyResult]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def to_dict(self) -> dict:
        return {"schema": SUITE_SCHEMA, "catalog_version": CATALOG_VERSION, "seed": self.seed,
                "passed": self.passed, "properties": [p.to_dict() for p in self.properties]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def render(self) -> str:
        lines = []
        for p in self.properties:
            timing = "" if p.seconds is None else f", {p.seconds:.2f}s"
            lines.append(f"[{'PASS' if p.passed else 'FAIL'}] {p.id}. {PROPERTIES[p.id]} "
                         f"({p.checked} checked{timing})")
            for f in p.failures[:MAX_FAILURES]:
                lines.append(f"    failure: {json.dumps(plain(f))}")
        lines.append(f"suite {'passed' if self.passed else 'FAILED'} (seed {self.seed})")
        return "\n".join(lines)


def _tasks(seed: int, rectangle_budget: int) -> list[tuple]:
    per_chunk = MAP_LAWS_SAMPLES // MAP_LAWS_CHUNKS
    tasks: list[tuple] = [("1", (_task_map_laws, seed, i, per_chunk)) for i in range(MAP_LAWS_CHUNKS)]
    tasks += [("A", (_task_algebra, name)) for name in CORPUS]
    tasks.append(("4", (_task_sl_search, SL_SEARCH_MAX_SIZE)))
    tasks += [("7", (_task_rectangles, kind, seed, rectangle_budget)) for kind in KINDS]
    tasks.append(("8", (_task_cubes,)))
    tasks += [("9", (_task_galois, part, seed)) for part in ("birkhoff", "split-central", "central-normal", "admissibility")]
    return tasks


def run_suite(seed: int = 1, jobs: int = 1, rectangle_budget: int = RECTANGLE_BUDGET) -> SuiteResult:
    tasks = _tasks(seed, rectangle_budget)
    payloads = [t for _, t in tasks]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, payloads))
    else:
        results = [_run_task(t) for t in payloads]
    grouped: dict[str, list] = {}
    secs: dict[str, float] = {}
    for (key, _), (out, dt) in zip(tasks, results):
        grouped.setdefault(key, []).append(out)
        secs[key] = secs.get(key, 0.0) + dt
    return SuiteResult(seed, _merge(grouped, secs))


def _merge(grouped: dict[str, list], secs: dict[str, float]) -> list[PropertyResult]:
    props = []

    lem = grouped["1"]
    props.append(PropertyResult(
        "1", not any(c["failures"] for c in lem), sum(c["checked"] for c in lem),
        {"surjective": sum(c["surjective"] for c in lem)},
        [f for c in lem for f in c["failures"]], secs["1"]))

    algs = grouped["A"]
    alg_secs = secs["A"]
    viol2 = [a["name"] for a in algs if a["modular"] and not a["shifting"]]
    props.append(PropertyResult(
        "2", not viol2, len(algs),
        {"modular": sum(a["modular"] for a in algs), "shifting": sum(a["shifting"] for a in algs)},
        viol2, alg_secs))
    viol3 = [a["name"] for a in algs if a["gumm"] != a["shifting"]]
    props.append(PropertyResult("3", not viol3, len(algs), {}, viol3))

    sl = grouped["4"][0]
    props.append(PropertyResult("4", bool(sl["found"]) and sl.get("valid", False), 1,
                                {"witness": sl["found"]}, [] if sl["found"] else ["no witness"], secs["4"]))

    compared = [a for a in algs if a["agree"] is not None]
    viol5 = [a["name"] for a in compared if not a["agree"]]
    counts = {a["name"]: a["count_brute"] for a in algs if a["count_brute"] is not None}
    viol5 += [f"{n}: {counts.get(n)} != {c}" for n, c in EXPECTED_COUNTS.items() if counts.get(n) != c]
    props.append(PropertyResult("5", not viol5, len(compared), {"counts": counts}, viol5))

    scanned = [a for a in algs if a["bourn"] is not None]
    viol6 = [{"algebra": a["name"], "triple": a["bourn_witness"]} for a in scanned if not a["bourn"]]
    props.append(PropertyResult(
        "6", not viol6, sum(a["bourn_checked"] for a in scanned),
        {"algebras": len(scanned), "skipped (Shifting Lemma fails)": len(algs) - len(scanned)}, viol6))

    rects = grouped["7"]
    fails7 = [f for r in rects for f in r["failures"]]
    fails7 += [f"{r['kind']}: no nontrivial instance" for r in rects if r["nontrivial"] < 1]
    props.append(PropertyResult(
        "7", not fails7, sum(r["checked"] for r in rects),
        {r["kind"]: {"instances": r["checked"], "nontrivial": r["nontrivial"]} for r in rects},
        fails7, secs["7"]))

    cubes = grouped["8"][0]["cubes"]
    fails8 = [c for c in cubes if not c["verdict"]]
    props.append(PropertyResult("8", not fails8 and len(cubes) >= 3, len(cubes),
                                {"cubes": [c["label"] for c in cubes]}, fails8, secs["8"]))

    gal = grouped["9"]
    fails9 = [{"part": g["part"], "failures": g["failures"]} for g in gal if not g["passed"]]
    props.append(PropertyResult(
        "9", not fails9, sum(g["total"] for g in gal),
        {g["part"]: {"total": g["total"], "skipped": g["skipped"]} for g in gal}, fails9, secs["9"]))
    return props
