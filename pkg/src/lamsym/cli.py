"""Command-line front end: problem files in, verdict reports out.

Exit status: 0 when every claim holds, 1 when any fails, 2 on input errors.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass
from typing import Callable

import click

from lamsym.checks import (
    CheckReport,
    check_covering_symmetry,
    check_determining,
    check_lambda_symmetry,
    check_lie_point,
    check_telescopic,
    report,
    verify_psi,
)
from lamsym.equiv import a_equivalent, canonical_pair, check_invariants, rewrite_reduction, verify_reduction
from lamsym.errors import DegenerateError, HypothesisError, LamsymError
from lamsym.expr import render
from lamsym.problemfile import Claim, ProblemFile, load
from lamsym.prolong import LambdaPair
from lamsym.transforms import (
    invariants_to_lambda,
    lambda_to_covering,
    nonlocal_to_lambda,
    telescopic_to_lambda,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad file, bad selector or an ill-posed claim: exit status 2."""


@dataclass(frozen=True)
class Record:
    name: str
    kind: str
    report: CheckReport
    elapsed_ms: float
    result: str | None = None

    @property
    def verdict(self) -> str:
        return self.report.verdict

    def residual_text(self) -> str:
        bad = self.report.nonzero()
        if not bad:
            return "0"
        return "; ".join(f"{name}: {render(r)}" for name, r in bad)

    def machine(self) -> str:
        out = {"name": self.name, "kind": self.kind, "verdict": self.verdict,
               "route": self.report.route, "residual": self.residual_text()}
        if self.result is not None:
            out["result"] = self.result
        out["elapsed-ms"] = round(self.elapsed_ms, 3)
        return json.dumps(out, ensure_ascii=False)

    def human(self, show_residual: bool) -> str:
        line = f"{self.verdict.upper():5}  {self.kind:<16} {self.name}"
        if self.result is not None:
            line += f"\n       result: {self.result}"
        if show_residual:
            for name, r in self.report.residuals:
                line += f"\n       residual[{name}]: {render(r)}"
            for name, r in self.report.cleared:
                line += f"\n       cleared[{name}]: {render(r)}"
        return line


def _failure(err: HypothesisError | DegenerateError) -> CheckReport:
    residual = getattr(err, "residual", None)
    from lamsym.expr import ONE

    return CheckReport("fails", (("hypothesis", residual if residual is not None else ONE),),
                       "transform")


def _timed(name: str, kind: str, fn: Callable[[], tuple[CheckReport, str | None]]) -> Record:
    start = time.perf_counter()
    try:
        rep, result = fn()
    except (HypothesisError, DegenerateError) as err:
        rep, result = _failure(err), f"error: {err}"
    except LamsymError as err:
        raise InputError(f"{name}: {err}") from err
    return Record(name, kind, rep, (time.perf_counter() - start) * 1000.0, result)


def _selected(pf: ProblemFile, names: tuple[str, ...], kinds: tuple[str, ...] | None = None) -> list[Claim]:
    if names:
        out = []
        for n in names:
            if n not in pf.claims:
                raise InputError(f"no entry named {n!r}")
            out.append(pf.claims[n])
        return out
    return [c for c in pf.claims.values() if kinds is None or c.kind in kinds]


def _as_pair(pf: ProblemFile, claim: Claim) -> LambdaPair:
    if claim.kind == "lambda_symmetry":
        return claim.obj
    if claim.kind == "nonlocal":
        return nonlocal_to_lambda(claim.covering, claim.obj)
    if claim.kind == "telescopic":
        return telescopic_to_lambda(claim.obj, pf.problem if pf.problem.order == 2 else None)
    if claim.kind == "invariants":
        return invariants_to_lambda(claim.obj, pf.problem.table)
    raise InputError(f"{claim.name!r} ({claim.kind}) does not define a lambda-symmetry")


def check_claim(pf: ProblemFile, claim: Claim) -> Record:
    problem = pf.problem

    def run():
        c = claim
        if c.kind == "lambda_symmetry":
            return check_lambda_symmetry(problem, c.obj), None
        if c.kind == "telescopic":
            return check_telescopic(problem, c.obj), None
        if c.kind == "nonlocal":
            return check_covering_symmetry(c.covering, c.obj), None
        if c.kind == "lie_point":
            return check_lie_point(problem, c.obj.xi, c.obj.eta0), None
        if c.kind == "invariants":
            return check_invariants(pf.pair(c.ref), c.obj, problem), None
        if c.kind == "psi":
            return verify_psi(problem, pf.pair(c.ref), c.obj.psi, c.obj.rescale), None
        if c.kind == "reduced":
            return verify_reduction(problem, pf.claim(c.ref).obj, c.obj), None
        raise InputError(f"unsupported entry kind {c.kind}")

    return _timed(claim.name, claim.kind, run)


def _checkable(claim: Claim) -> bool:
    return not (claim.kind == "invariants" and claim.ref is None)


def cmd_check(pf: ProblemFile, names: tuple[str, ...]) -> list[Record]:
    claims = _selected(pf, names)
    for c in claims:
        if names and not _checkable(c):
            raise InputError(f"{c.name!r} has no pair to check its invariants against")
    return [check_claim(pf, c) for c in claims if _checkable(c)]


DEFAULT_TARGET = {"nonlocal": "pair", "telescopic": "pair", "invariants": "pair",
                  "lambda_symmetry": "covering"}


def convert_claim(pf: ProblemFile, claim: Claim, target: str | None) -> Record:
    target = target or DEFAULT_TARGET.get(claim.kind)
    if target is None:
        raise InputError(f"{claim.name!r} ({claim.kind}) cannot be converted")
    problem = pf.problem

    def run():
        if target == "pair":
            pair = _as_pair(pf, claim)
            if claim.kind == "invariants":
                rep = check_invariants(pair, claim.obj, problem)
            else:
                rep = check_lambda_symmetry(problem, pair)
            return rep, pair.render()
        if target == "canonical":
            pair = canonical_pair(problem, _as_pair(pf, claim))
            return check_determining(problem, pair.lam), pair.render()
        if target == "covering":
            if claim.kind != "lambda_symmetry":
                raise InputError("only lambda_symmetry entries convert to a covering")
            lc = lambda_to_covering(problem, claim.obj)
            text = (f"H = {render(lc.covering.h)}; v = {lc.template()}; "
                    f"obligation: {lc.obligation()}")
            return report([]), text
        raise InputError(f"unknown conversion target {target!r}")

    return _timed(claim.name, "canonical" if target == "canonical" else f"convert:{target}", run)


def cmd_convert(pf: ProblemFile, names: tuple[str, ...], target: str | None) -> list[Record]:
    claims = _selected(pf, names, tuple(DEFAULT_TARGET))
    return [convert_claim(pf, c, target) for c in claims]


def cmd_equiv(pf: ProblemFile, names: tuple[str, ...]) -> list[Record]:
    if len(names) < 2:
        raise InputError("equiv needs at least two --claim selectors")
    claims = _selected(pf, names)
    first = claims[0]
    out = []
    for other in claims[1:]:
        def run(other=other):
            rep = a_equivalent(pf.problem, _as_pair(pf, first), _as_pair(pf, other))
            return rep, None
        out.append(_timed(f"{first.name}~{other.name}", "equiv", run))
    return out


def cmd_canonical(pf: ProblemFile, names: tuple[str, ...]) -> list[Record]:
    claims = _selected(pf, names, ("lambda_symmetry",))
    return [convert_claim(pf, c, "canonical") for c in claims]


def cmd_reduce(pf: ProblemFile, names: tuple[str, ...]) -> list[Record]:
    claims = _selected(pf, names, ("reduced",))
    out = []
    for c in claims:
        if c.kind == "reduced":
            inv = pf.claim(c.ref).obj
            out.append(_timed(c.name, "reduce", lambda c=c, inv=inv: (
                verify_reduction(pf.problem, inv, c.obj), f"{_reduced_text(c.obj)}")))
        elif c.kind == "invariants":
            def run(c=c):
                red = rewrite_reduction(pf.problem, c.obj)
                return verify_reduction(pf.problem, c.obj, red), _reduced_text(red)
            out.append(_timed(c.name, "reduce:rewrite", run))
        else:
            raise InputError(f"{c.name!r} ({c.kind}) is not a reduction or invariants entry")
    return out


def _reduced_text(red) -> str:
    if red.kind == "g":
        return f"zeta_z = {render(red.body)}"
    return f"{render(red.body)} = 0"


def _emit(records: list[Record], machine: bool, show_residual: bool) -> int:
    for r in records:
        click.echo(r.machine() if machine else r.human(show_residual))
    if not machine:
        held = sum(r.verdict == "holds" for r in records)
        click.echo(f"{held}/{len(records)} claims hold")
    return EXIT_OK if all(r.verdict == "holds" for r in records) else EXIT_FAIL


def _run(input_path: str, body: Callable[[ProblemFile], list[Record]], machine: bool, show_residual: bool):
    try:
        pf = load(input_path)
        records = body(pf)
    except (InputError, LamsymError) as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(EXIT_INPUT)
    sys.exit(_emit(records, machine, show_residual))


def _common(fn):
    fn = click.option("--show-residual", is_flag=True, help="Print every residual and cleared denominator.")(fn)
    fn = click.option("--machine", is_flag=True, help="One JSON record per claim.")(fn)
    fn = click.option("--claim", "claims", multiple=True, metavar="NAME", help="Select an entry (repeatable).")(fn)
    fn = click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False),
                      help="Problem file.")(fn)
    return fn


@click.group()
def main():
    """Verify lambda-symmetries, telescopic fields and nonlocal symmetries of ODEs."""


@main.command()
@_common
def check(input_path, claims, machine, show_residual):
    """Check invariance claims."""
    _run(input_path, lambda pf: cmd_check(pf, claims), machine, show_residual)


@main.command()
@_common
@click.option("--to", "target", type=click.Choice(["pair", "covering", "canonical"]), default=None,
              help="Target representation (default depends on the entry kind).")
def convert(input_path, claims, machine, show_residual, target):
    """Convert entries to another representation."""
    _run(input_path, lambda pf: cmd_convert(pf, claims, target), machine, show_residual)


@main.command()
@_common
def equiv(input_path, claims, machine, show_residual):
    """Test A-equivalence of the first selected pair with the others."""
    _run(input_path, lambda pf: cmd_equiv(pf, claims), machine, show_residual)


@main.command()
@_common
def canonical(input_path, claims, machine, show_residual):
    """Canonical representatives of lambda-symmetries."""
    _run(input_path, lambda pf: cmd_canonical(pf, claims), machine, show_residual)


@main.command()
@_common
def reduce(input_path, claims, machine, show_residual):
    """Verify (or, for invariants entries, derive and verify) reduced equations."""
    _run(input_path, lambda pf: cmd_reduce(pf, claims), machine, show_residual)


if __name__ == "__main__":
    main()
