"""Check reports and conversion of results to plain JSON-ready data."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .algebra import Congruence, FiniteAlgebra, Homomorphism
from .partition import Partition
from .relcalc import BinRel

REPORT_SCHEMA = "gummlab.report/1"


def plain(obj: Any) -> Any:
    """Recursively convert workbench values into JSON-serialisable data."""
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Congruence):
        return [list(b) for b in obj.blocks]
    if isinstance(obj, Partition):
        return [list(b) for b in obj.blocks]
    if isinstance(obj, Homomorphism):
        return {"source": obj.source.name, "target": obj.target.name, "map": list(obj.map)}
    if isinstance(obj, FiniteAlgebra):
        return obj.name
    if isinstance(obj, BinRel):
        return {"src_size": obj.src_size, "tgt_size": obj.tgt_size, "pairs": [list(p) for p in obj.pairs()]}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [plain(v) for v in items]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass
class CheckReport:
    """Result of one named check.

    ``verdict`` is set only when every hypothesis passed; ``witness`` is set
    only on a failing verdict.  ``timing`` is wall-clock seconds and is left
    out of JSON output so reports stay byte-identical across runs.
    """

    check: str
    subject: str = ""
    hypotheses: list[tuple[str, bool]] = field(default_factory=list)
    verdict: bool | None = None
    witness: Any = None
    facts: dict[str, Any] = field(default_factory=dict)
    timing: float | None = None
    note: str = ""

    def __post_init__(self) -> None:
        self.normalise()

    def normalise(self) -> None:
        if not all(ok for _, ok in self.hypotheses):
            self.verdict = None
        if self.verdict is not False:
            self.witness = None

    @property
    def hypotheses_hold(self) -> bool:
        return all(ok for _, ok in self.hypotheses)

    @property
    def failed_clause(self) -> str | None:
        for clause, ok in self.hypotheses:
            if not ok:
                return clause
        return None

    @property
    def exit_code(self) -> int:
        if self.verdict is None:
            return 2
        return 0 if self.verdict else 1

    def to_dict(self) -> dict:
        self.normalise()
        out = {
            "check": self.check,
            "subject": self.subject,
            "hypotheses": [{"clause": c, "holds": bool(ok)} for c, ok in self.hypotheses],
            "verdict": self.verdict,
            "facts": plain(self.facts),
        }
        if self.witness is not None:
            out["witness"] = plain(self.witness)
        if self.note:
            out["note"] = self.note
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def render(self) -> str:
        self.normalise()
        status = {True: "HOLDS", False: "FAILS", None: "NOT APPLICABLE"}[self.verdict]
        lines = [f"[{status}] {self.check}" + (f" on {self.subject}" if self.subject else "")]
        for clause, ok in self.hypotheses:
            lines.append(f"  hypothesis {'ok  ' if ok else 'FAIL'} {clause}")
        for name, value in self.facts.items():
            lines.append(f"  {name}: {json.dumps(plain(value))}")
        if self.witness is not None:
            lines.append(f"  witness: {json.dumps(plain(self.witness))}")
        if self.note:
            lines.append(f"  note: {self.note}")
        if self.timing is not None:
            lines.append(f"  time: {self.timing:.3f}s")
        return "\n".join(lines)
