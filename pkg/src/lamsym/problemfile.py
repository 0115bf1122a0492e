"""Loader for problem files.

The format is line oriented::

    # comment
    [problem]
    order = 2
    rhs = "x1^2/x + c(t)*x1"
    params = "n"
    funcs = "c(t)"

    [lambda_symmetry]
    name = "main"
    rho = "0"
    phi = "1"
    lambda = "x1/x"

Values are double-quoted expression strings or bare integers.  Sections
``[problem]`` and ``[covering]`` appear at most once; claim sections
(``lambda_symmetry``, ``telescopic``, ``nonlocal``, ``invariants``,
``reduced``, ``psi``, ``lie_point``) may repeat and are referenced by name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from lamsym.errors import LamsymError, ParseError, ProblemFileError
from lamsym.equiv import ReducedEquation, reduced_table
from lamsym.expr import Expr, SymbolTable, parse
from lamsym.jet import Covering, OdeProblem
from lamsym.prolong import LambdaPair, TelescopicField
from lamsym.transforms import InvariantPair, NonlocalSymmetry

_SECTION_RE = re.compile(r"\[\s*([A-Za-z_]+)\s*\]\Z")
_KEY_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)\Z")


SECTION_KEYS: dict[str, tuple[set[str], set[str]]] = {
    # section: (required keys, optional keys)
    "problem": ({"order", "rhs"}, {"params", "funcs", "jet_cap", "name"}),
    "covering": ({"h"}, set()),
    "lambda_symmetry": ({"rho", "phi", "lambda"}, {"name"}),
    "telescopic": ({"alpha", "beta", "gamma1"}, {"name"}),
    "nonlocal": ({"xi", "eta0", "psi0"}, {"name", "h"}),
    "invariants": ({"z", "zeta"}, {"name", "pair"}),
    "reduced": ({"invariants"}, {"name", "g", "delta"}),
    "psi": ({"psi", "pair"}, {"name", "rescale"}),
    "lie_point": ({"xi", "eta0"}, {"name"}),
}
CLAIM_SECTIONS = tuple(k for k in SECTION_KEYS if k not in ("problem", "covering"))


@dataclass
class RawSection:
    kind: str
    line: int
    values: dict[str, tuple[str, int]] = field(default_factory=dict)


@dataclass(frozen=True)
class PsiClaim:
    psi: Expr
    pair: str
    rescale: Expr | None = None


@dataclass(frozen=True)
class LiePointClaim:
    xi: Expr
    eta0: Expr


@dataclass(frozen=True)
class Claim:
    """One named entry of a problem file.

    ``ref`` names another claim (the pair of an invariants/psi claim, the
    invariants of a reduction); ``covering`` is the covering a nonlocal
    symmetry lives on.
    """

    kind: str
    name: str
    obj: Any
    line: int
    ref: str | None = None
    covering: Covering | None = None


@dataclass(frozen=True)
class ProblemFile:
    problem: OdeProblem
    covering: Covering | None
    claims: dict[str, Claim]
    path: str = ""

    def claim(self, name: str) -> Claim:
        try:
            return self.claims[name]
        except KeyError:
            raise ProblemFileError(f"no claim named {name!r}") from None

    def pair(self, name: str) -> LambdaPair:
        c = self.claim(name)
        if c.kind != "lambda_symmetry":
            raise ProblemFileError(f"{name!r} is a {c.kind} entry, not a lambda_symmetry")
        return c.obj


def _strip_comment(line: str) -> str:
    out, quoted = [], False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out).strip()


def _value(raw: str, lineno: int) -> str:
    raw = raw.strip()
    if raw.startswith('"'):
        if len(raw) < 2 or not raw.endswith('"') or '"' in raw[1:-1]:
            raise ProblemFileError("unterminated or malformed quoted value", lineno)
        return raw[1:-1]
    if re.fullmatch(r"-?[0-9]+", raw):
        return raw
    raise ProblemFileError("values must be double-quoted strings or integers", lineno)


def read_sections(text: str) -> list[RawSection]:
    sections: list[RawSection] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(line)
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            kind = m.group(1)
            if kind not in SECTION_KEYS:
                raise ProblemFileError(f"unknown section [{kind}]", lineno)
            sections.append(RawSection(kind, lineno))
            continue
        m = _KEY_RE.match(line)
        if not m:
            raise ProblemFileError("expected [section] or key = value", lineno)
        if not sections:
            raise ProblemFileError("key outside of any section", lineno)
        sec = sections[-1]
        key = m.group(1)
        required, optional = SECTION_KEYS[sec.kind]
        if key not in required | optional:
            raise ProblemFileError(f"unknown key {key!r} in [{sec.kind}]", lineno)
        if key in sec.values:
            raise ProblemFileError(f"duplicate key {key!r}", lineno)
        sec.values[key] = (_value(m.group(2), lineno), lineno)
    for sec in sections:
        missing = SECTION_KEYS[sec.kind][0] - sec.values.keys()
        if missing:
            raise ProblemFileError(f"[{sec.kind}] is missing {', '.join(sorted(missing))}", sec.line)
    return sections


class _Builder:
    def __init__(self, sections: list[RawSection]):
        self.sections = sections
        self.table: SymbolTable | None = None

    def expr(self, sec: RawSection, key: str, table: SymbolTable | None = None) -> Expr:
        text, lineno = sec.values[key]
        try:
            return parse(text, table or self.table)
        except ParseError as err:
            raise ProblemFileError(f"{key}: {err.message} (at byte {err.offset} of the value)", lineno) from err

    def build(self, path: str) -> ProblemFile:
        problems = [s for s in self.sections if s.kind == "problem"]
        if len(problems) != 1:
            raise ProblemFileError("exactly one [problem] section is required",
                                   problems[1].line if problems else None)
        ps = problems[0]
        try:
            kwargs = {}
            if "jet_cap" in ps.values:
                kwargs["max_order"] = int(ps.values["jet_cap"][0])
            self.table = SymbolTable.build(ps.values.get("params", ("", 0))[0],
                                           ps.values.get("funcs", ("", 0))[0], **kwargs)
            order = int(ps.values["order"][0])
        except (LamsymError, ValueError) as err:
            raise ProblemFileError(str(err), ps.line) from err
        rhs = self.expr(ps, "rhs")
        problem = self.guard(ps, lambda: OdeProblem(order, rhs, self.table, ps.values.get("name", ("", 0))[0]))
        coverings = [s for s in self.sections if s.kind == "covering"]
        if len(coverings) > 1:
            raise ProblemFileError("at most one [covering] section is allowed", coverings[1].line)
        covering = None
        if coverings:
            cs = coverings[0]
            h = self.expr(cs, "h")
            covering = self.guard(cs, lambda: Covering(problem, h))
        claims: dict[str, Claim] = {}
        counters: dict[str, int] = {}
        for sec in self.sections:
            if sec.kind not in CLAIM_SECTIONS:
                continue
            counters[sec.kind] = counters.get(sec.kind, 0) + 1
            name = sec.values.get("name", (f"{sec.kind}{counters[sec.kind]}", 0))[0]
            if name in claims:
                raise ProblemFileError(f"duplicate claim name {name!r}", sec.line)
            claims[name] = self.guard(sec, lambda: self.claim(sec, name, problem, covering))
        pf = ProblemFile(problem, covering, claims, path)
        self.resolve(pf)
        return pf

    @staticmethod
    def guard(sec: RawSection, fn):
        try:
            return fn()
        except ProblemFileError:
            raise
        except LamsymError as err:
            raise ProblemFileError(str(err), sec.line) from err

    def claim(self, sec: RawSection, name: str, problem: OdeProblem, covering: Covering | None) -> Claim:
        v = sec.values
        e = lambda key: self.expr(sec, key)  # noqa: E731
        if sec.kind == "lambda_symmetry":
            return Claim(sec.kind, name, LambdaPair(e("rho"), e("phi"), e("lambda"), name), sec.line)
        if sec.kind == "telescopic":
            return Claim(sec.kind, name, TelescopicField(e("alpha"), e("beta"), e("gamma1"), name), sec.line)
        if sec.kind == "lie_point":
            return Claim(sec.kind, name, LiePointClaim(e("xi"), e("eta0")), sec.line)
        if sec.kind == "nonlocal":
            own = covering
            if "h" in v:
                own = Covering(problem, e("h"))
            if own is None:
                raise ProblemFileError("a [nonlocal] entry needs a [covering] section or its own h", sec.line)
            return Claim(sec.kind, name, NonlocalSymmetry(e("xi"), e("eta0"), e("psi0"), name),
                         sec.line, covering=own)
        if sec.kind == "invariants":
            return Claim(sec.kind, name, InvariantPair(e("z"), e("zeta"), name), sec.line,
                         ref=v["pair"][0] if "pair" in v else None)
        if sec.kind == "psi":
            rescale = e("rescale") if "rescale" in v else None
            return Claim(sec.kind, name, PsiClaim(e("psi"), v["pair"][0], rescale), sec.line, ref=v["pair"][0])
        if sec.kind == "reduced":
            if ("g" in v) == ("delta" in v):
                raise ProblemFileError("[reduced] needs exactly one of g or delta", sec.line)
            kind = "g" if "g" in v else "delta"
            arity = 1 if kind == "g" else problem.order - 1
            body = self.expr(sec, kind, reduced_table(self.table, arity))
            return Claim(sec.kind, name, ReducedEquation(kind, body, arity, name), sec.line,
                         ref=v["invariants"][0])
        raise ProblemFileError(f"unsupported section [{sec.kind}]", sec.line)

    @staticmethod
    def resolve(pf: ProblemFile) -> None:
        wanted = {"invariants": "lambda_symmetry", "psi": "lambda_symmetry", "reduced": "invariants"}
        for c in pf.claims.values():
            if c.ref is None:
                continue
            target = pf.claims.get(c.ref)
            if target is None:
                raise ProblemFileError(f"{c.name!r} refers to unknown entry {c.ref!r}", c.line)
            if target.kind != wanted[c.kind]:
                raise ProblemFileError(
                    f"{c.name!r} must refer to a [{wanted[c.kind]}] entry, {c.ref!r} is [{target.kind}]", c.line)


def loads(text: str, path: str = "") -> ProblemFile:
    """Parse problem-file text."""
    return _Builder(read_sections(text)).build(path)


def load(path: str | Path) -> ProblemFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ProblemFileError(f"cannot read {path}: {err.strerror}") from err
    except UnicodeDecodeError as err:
        raise ProblemFileError(f"{path} is not valid UTF-8") from err
    return loads(text, str(path))
