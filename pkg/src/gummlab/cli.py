"""Command-line front end.

Exit codes: 0 the property holds, 1 a counterexample or disagreement was
found, 2 bad input or a violated hypothesis.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Callable

from . import congruence as cong
from .algebra import FiniteAlgebra
from .builders import builtin, builtin_names
from .diagram import (
    cube_check,
    is_pullback,
    is_pushout,
    is_right_saturated,
    pushout_rectangle_check,
    split_rectangle_check,
    split_rectangle_sections,
)
from .errors import GenerationExhausted, HypothesisViolated, InputError, NotApplicable
from .formats import Diagram, load_algebra, load_diagram, load_hom
from .galois import (
    admissibility_scan,
    birkhoff_scan,
    central_normal_scan,
    classify,
    split_central_check,
)
from .generate import generate_rectangles
from .report import REPORT_SCHEMA, CheckReport, plain
from .suite import run_suite

log = logging.getLogger("gummlab")

CHECKS = ("modularity", "shifting", "gumm", "permute", "bourn")
DIAGRAM_CHECKS = ("split-rectangle", "pushout-rectangle", "cube", "pullback", "pushout", "saturated")
# contract names accepted as synonyms
ALIASES = {"prop41": "split-rectangle", "prop42": "pushout-rectangle",
           "scan-cor54": "scan-central-normal", "theorem53": "split-central"}
GENERATE_KINDS = {"split-rectangle": "split", "pushout-rectangle": "pushout"}


class UsageError(Exception):
    pass


def _emit(report: CheckReport, as_json: bool, elapsed: float | None = None) -> int:
    report.timing = elapsed
    if as_json:
        print(json.dumps({"schema": REPORT_SCHEMA, **report.to_dict()}, sort_keys=True))
    else:
        print(report.render())
    return report.exit_code


# ------------------------------------------------------------------- check


def _target_algebra(args) -> FiniteAlgebra:
    if args.builtin and args.file:
        raise UsageError("give either --builtin NAME or FILE, not both")
    if args.builtin:
        return builtin(args.builtin)
    if args.file:
        return load_algebra(args.file)
    raise UsageError("give --builtin NAME or an algebra FILE")


def _congruence_report(a: FiniteAlgebra, check: str) -> CheckReport:
    lat = cong.all_congruences(a)
    report = CheckReport(check, a.name, facts={"size": a.size, "congruences": len(lat)})
    if check == "modularity":
        res = cong.is_modular(lat)
        witness = None if res.witness is None else dict(zip("xyz", res.witness))
    elif check == "shifting":
        res = cong.shifting_lemma_holds(lat)
        witness = None
        if res.witness is not None:
            r, s, t, quad = res.witness
            witness = {"R": r, "S": s, "T": t, "x,y,t,z": quad}
    elif check == "gumm":
        res = cong.gumm_check(lat)
        witness = None if res.witness is None else dict(zip("RST", res.witness))
    elif check == "permute":
        res = cong.permutability_scan(lat)
        report.facts["3-permutable"] = res.witness["goursat"]
        witness = None if res.holds else {"R,S": res.witness["pair"]}
    else:
        res = cong.bourn_check(lat)
        report.hypotheses.append(("Shifting Lemma holds", res.hypothesis_met))
        witness = None if res.witness is None else dict(zip("RST", res.witness))
        if not res.hypothesis_met:
            report.note = f"scan result without the hypothesis: {'no failure' if res.holds else 'failure found'}"
    report.facts["triples or pairs checked"] = res.checked
    report.verdict = res.holds
    report.witness = witness
    report.normalise()
    return report


def cmd_check(args) -> int:
    a = _target_algebra(args)
    start = time.perf_counter()
    report = _congruence_report(a, args.check)
    return _emit(report, args.json, time.perf_counter() - start)


def cmd_search(args) -> int:
    start = time.perf_counter()
    found = cong.sl_counterexample_search(builtin(f"bare{n}") for n in range(1, args.max_size + 1))
    report = CheckReport("sl-counterexample", f"bare sets of size <= {args.max_size}")
    # a found counterexample is the successful outcome of a search
    if found is None:
        report.verdict = False
        report.witness = "none found"
    else:
        a, res = found
        r, s, t, quad = res.witness
        report.verdict = True
        report.facts.update({"algebra": a.name, "R": r, "S": s, "T": t, "x,y,t,z": quad,
                             "R^S <= T": (r & s) <= t, "(t,z) in T": t.related(quad[2], quad[3])})
    return _emit(report, args.json, time.perf_counter() - start)


# ----------------------------------------------------------------- diagram


def _square_report(check: str, diagram: Diagram) -> CheckReport:
    if diagram.shape != "square":
        raise UsageError(f"{check} needs a square diagram, got {diagram.shape}")
    sq = diagram.square()
    report = CheckReport(check, "square")
    if check == "pullback":
        report.verdict = is_pullback(sq)
        pairs = list(zip(sq.top.map, sq.left.map))
        report.facts["apex size"] = sq.top.source.size
        report.facts["distinct (top, left) pairs"] = len(set(pairs))
        if not report.verdict:
            report.witness = "comparison map to the canonical pullback is not bijective"
    else:
        fn = is_pushout if check == "pushout" else is_right_saturated
        report.hypotheses.append(("all edges surjective", sq.all_surjective()))
        if not sq.all_surjective():
            raise HypothesisViolated("all edges surjective")
        report.verdict = fn(sq)
        if not report.verdict:
            report.witness = "kernel pair of the right edge differs from the image of the left kernel pair"
    report.normalise()
    return report


def cmd_diagram(args) -> int:
    check = ALIASES.get(args.check, args.check)
    diagram = load_diagram(args.file)
    start = time.perf_counter()
    subject = Path(args.file).name
    if check in ("pullback", "pushout", "saturated"):
        report = _square_report(check, diagram)
    elif check == "cube":
        if diagram.shape != "cube":
            raise UsageError(f"cube check needs a cube diagram, got {diagram.shape}")
        report = cube_check(diagram.cube(), subject)
    else:
        if diagram.shape != "rectangle":
            raise UsageError(f"{check} needs a rectangle diagram, got {diagram.shape}")
        rect = diagram.rectangle()
        if check == "pushout-rectangle":
            report = pushout_rectangle_check(rect, subject)
        else:
            if {"sigma", "s"} <= diagram.sections.keys():
                sigma, s = diagram.sections["sigma"], diagram.sections["s"]
            else:
                found = split_rectangle_sections(rect)
                if found is None:
                    raise HypothesisViolated("left square has compatible sections", "section search exhausted")
                sigma, s = found
            report = split_rectangle_check(rect, sigma, s, subject)
    return _emit(report, args.json, time.perf_counter() - start)


def cmd_generate(args) -> int:
    check = ALIASES.get(args.kind, args.kind)
    kind = GENERATE_KINDS[check]
    fn = split_rectangle_check if kind == "split" else pushout_rectangle_check
    start = time.perf_counter()
    total = nontrivial = failed = 0
    try:
        for inst in generate_rectangles(kind, args.seed, args.budget, args.max_order):
            total += 1
            nontrivial += inst.rect.is_nontrivial()
            rep = fn(inst.rect, inst.sigma, inst.s, inst.label) if kind == "split" else fn(inst.rect, inst.label)
            failed += not rep.verdict
            if args.verbose or not rep.verdict:
                _emit(rep, args.json)
    except GenerationExhausted as exc:
        log.warning("%s", exc)
    summary = CheckReport(f"generate {check}", f"seed {args.seed}, budget {args.budget}")
    summary.facts.update({"instances": total, "nontrivial": nontrivial, "failures": failed})
    summary.verdict = total > 0 and failed == 0 and nontrivial > 0
    if not summary.verdict:
        summary.witness = {"instances": total, "nontrivial": nontrivial, "failures": failed}
    summary.normalise()
    return _emit(summary, args.json, time.perf_counter() - start)


# ------------------------------------------------------------------ galois


def _scan_report(summary, name: str) -> CheckReport:
    report = CheckReport(name, "group catalog")
    d = summary.to_dict()
    report.facts.update({"checked": d["total"], "skipped": d["skipped"], "failures": d["failure_count"]})
    report.verdict = summary.passed
    report.witness = d["failures"] or None
    report.normalise()
    return report


def cmd_galois(args) -> int:
    action = ALIASES.get(args.action, args.action)
    start = time.perf_counter()
    if action in ("classify", "split-central"):
        if not args.file:
            raise UsageError(f"galois {action} needs a homomorphism FILE")
        f = load_hom(args.file)
        if action == "classify":
            report = classify(f)
        else:
            try:
                report = split_central_check(f)
            except NotApplicable as exc:
                report = CheckReport("split-central", f"{f.source.name} -> {f.target.name}",
                                     [("split and central", False)], note=str(exc))
    elif action == "scan-central-normal":
        report = _scan_report(central_normal_scan(), "scan-central-normal")
    elif action == "scan-birkhoff":
        report = _scan_report(birkhoff_scan(), "scan-birkhoff")
    elif action == "scan-admissibility":
        if args.seed is None:
            raise UsageError("scan-admissibility needs an explicit --seed")
        report = _scan_report(admissibility_scan(args.seed, args.budget), "scan-admissibility")
    else:
        raise UsageError(f"unknown galois action {args.action!r}")
    return _emit(report, args.json, time.perf_counter() - start)


# ------------------------------------------------------------------- suite


def cmd_suite(args) -> int:
    result = run_suite(seed=args.seed, jobs=args.jobs)
    text = result.to_json() if args.json else result.render()
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0 if result.passed else 1


def cmd_list(args) -> int:
    names = builtin_names()
    print(json.dumps(names) if args.json else "\n".join(names))
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="gummlab", description="finite universal-algebra workbench")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="congruence checks on one algebra")
    c.add_argument("--builtin", metavar="NAME", help="builtin algebra name")
    c.add_argument("file", nargs="?", help="algebra JSON file")
    c.add_argument("check", choices=CHECKS)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("search", parents=[common], help="counterexample search")
    s.add_argument("what", choices=("sl-counterexample",))
    s.add_argument("--max-size", type=int, default=4)
    s.set_defaults(func=cmd_search)

    d = sub.add_parser("diagram", parents=[common], help="checks on a diagram file")
    d.add_argument("file")
    d.add_argument("check", choices=DIAGRAM_CHECKS + ("prop41", "prop42"))
    d.set_defaults(func=cmd_diagram)

    g = sub.add_parser("generate", parents=[common], help="generate and check rectangles")
    g.add_argument("kind", choices=tuple(GENERATE_KINDS) + ("prop41", "prop42"))
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--budget", type=int, default=1000)
    g.add_argument("--max-order", type=int, default=8)
    g.add_argument("--verbose", action="store_true", help="print every instance report")
    g.set_defaults(func=cmd_generate)

    ga = sub.add_parser("galois", parents=[common], help="abelianization Galois structure")
    ga.add_argument("action", choices=("classify", "split-central", "theorem53", "scan-central-normal",
                                       "scan-cor54", "scan-birkhoff", "scan-admissibility"))
    ga.add_argument("file", nargs="?", help="homomorphism JSON file")
    ga.add_argument("--seed", type=int)
    ga.add_argument("--budget", type=int, default=500)
    ga.set_defaults(func=cmd_galois)

    su = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    su.add_argument("action", choices=("run",))
    su.add_argument("--seed", type=int, default=1)
    su.add_argument("--jobs", type=int, default=1)
    su.add_argument("--output", help="write the report to this file")
    su.set_defaults(func=cmd_suite)

    ls = sub.add_parser("list", parents=[common], help="list builtin algebra names")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(format="warning: %(message)s", level=logging.WARNING, stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    handler: Callable = args.func
    try:
        return handler(args)
    except HypothesisViolated as exc:
        _error(args, "hypothesis violated", str(exc), clause=exc.clause)
    except (InputError, UsageError, NotApplicable) as exc:
        _error(args, "input error", str(exc))
    return 2


def _error(args, kind: str, msg: str, **extra) -> None:
    if getattr(args, "json", False):
        print(json.dumps({"schema": REPORT_SCHEMA, "error": kind, "message": msg, **plain(extra)}, sort_keys=True))
    print(f"gummlab: {kind}: {msg}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
