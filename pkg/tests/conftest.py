from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from gummlab.builders import builtin  # noqa: E402
from gummlab.relcalc import BinRel  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "data"

SMALL_GROUPS = ["Z1", "Z2", "Z3", "Z4", "V4", "S3", "Z6"]
SMALL_LATTICES = ["chain2", "chain3", "M3", "N5", "chain2^2"]
SMALL_BARE = ["bare1", "bare2", "bare3", "bare4"]


@pytest.fixture
def data_dir() -> Path:
    return DATA


def relations(n_src: int, n_tgt: int):
    return st.lists(st.integers(0, (1 << n_tgt) - 1), min_size=n_src, max_size=n_src).map(
        lambda rows: BinRel(n_src, n_tgt, tuple(rows))
    )


def sized_relations(max_size: int = 8):
    return st.tuples(st.integers(1, max_size), st.integers(1, max_size)).flatmap(
        lambda s: relations(*s)
    )


def algebra_names(names: list[str]):
    return st.sampled_from(names).map(builtin)
