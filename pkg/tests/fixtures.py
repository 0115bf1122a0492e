"""Access to the problem-file corpus shipped in ``problems/``."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from lamsym import ProblemFile, load

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"

# (file stem, claim name) of every entry expected to fail; everything else holds
EXPECTED_FAILURES = {
    ("power_family", "v_with_k"),
    ("pinney", "v_k"),
    ("painleve", "v_beta1"),
    ("riccati_family", "zeta_from_lambda"),
    ("telescopic_quadratic", "tau"),
}


@lru_cache(maxsize=None)
def fixture(stem: str) -> ProblemFile:
    return load(PROBLEMS / f"{stem}.prob")


def stems() -> list[str]:
    return sorted(p.stem for p in PROBLEMS.glob("*.prob"))


def all_claims():
    """Every (stem, claim) in the corpus, with invariants entries lacking a pair skipped."""
    for stem in stems():
        pf = fixture(stem)
        for c in pf.claims.values():
            if c.kind == "invariants" and c.ref is None:
                continue
            yield stem, c


def expected(stem: str, name: str) -> str:
    return "fails" if (stem, name) in EXPECTED_FAILURES else "holds"
