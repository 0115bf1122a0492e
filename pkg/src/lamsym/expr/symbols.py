"""Symbol tables: jet variables, scalar parameters and opaque functions."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from lamsym.errors import SymbolError

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_JET_RE = re.compile(r"(t|x|w)([1-9][0-9]*)?\Z")

#: Identifiers that can never be declared.
RESERVED = frozenset({"exp"})

#: The variables an opaque function (or ``exp``) may be applied to.
BASE_VARS = ("t", "x")

DEFAULT_MAX_ORDER = 8


def jet_kind(name: str) -> tuple[str, int] | None:
    """Classify a jet-variable name.

    Returns ``("t", 0)`` for ``t``, ``("x", i)`` for ``x``/``x<i>`` and
    ``("w", j)`` for ``w``/``w<j>``; ``None`` for anything else.
    """
    m = _JET_RE.match(name)
    if m is None:
        return None
    head, idx = m.group(1), m.group(2)
    if head == "t":
        return None if idx else ("t", 0)
    return head, int(idx) if idx else 0


def is_jet_var(name: str) -> bool:
    return jet_kind(name) is not None


def x_var(i: int) -> str:
    return "x" if i == 0 else f"x{i}"


def w_var(j: int) -> str:
    return "w" if j == 0 else f"w{j}"


def jet_rank(name: str) -> int:
    """Position of a jet variable in the fixed order t, x, x1, ..., w, w1, ...."""
    kind = jet_kind(name)
    if kind is None:
        raise SymbolError(f"{name!r} is not a jet variable")
    head, idx = kind
    if head == "t":
        return 0
    if head == "x":
        return 1 + idx
    return 100_000 + idx


@dataclass(frozen=True)
class FunctionDecl:
    """An opaque function of a single base variable, e.g. ``c(t)`` or ``f(x)``."""

    name: str
    arg: str

    def __post_init__(self):
        if not IDENT_RE.match(self.name):
            raise SymbolError(f"invalid function name {self.name!r}")
        if self.arg not in BASE_VARS:
            raise SymbolError(
                f"function {self.name!r} must take a base variable (t or x), got {self.arg!r}"
            )


@dataclass(frozen=True)
class SymbolTable:
    """Declared names for one problem.

    Jet variables are implicit: ``t, x, x1..x<max_order>, w, w1..w<max_order>``.
    Parameters are scalar symbols; they may also appear in exponents.
    """

    params: tuple[str, ...] = ()
    funcs: tuple[FunctionDecl, ...] = ()
    max_order: int = DEFAULT_MAX_ORDER
    _func_index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "funcs", tuple(self.funcs))
        if self.max_order < 2:
            raise SymbolError("max_order must be at least 2")
        seen: set[str] = set()
        for name in self.params:
            if not IDENT_RE.match(name):
                raise SymbolError(f"invalid parameter name {name!r}")
            if is_jet_var(name):
                raise SymbolError(f"parameter {name!r} collides with a jet variable")
            if name in RESERVED:
                raise SymbolError(f"{name!r} is reserved")
            if name in seen:
                raise SymbolError(f"duplicate name {name!r}")
            seen.add(name)
        for decl in self.funcs:
            if is_jet_var(decl.name) or decl.name in RESERVED:
                raise SymbolError(f"function name {decl.name!r} is reserved")
            if decl.name in seen:
                raise SymbolError(f"duplicate name {decl.name!r}")
            seen.add(decl.name)
        object.__setattr__(self, "_func_index", {d.name: d for d in self.funcs})

    @classmethod
    def build(cls, params: str | list[str] = (), funcs: str | list[str] = (),
              max_order: int = DEFAULT_MAX_ORDER) -> SymbolTable:
        """Convenience constructor: ``SymbolTable.build("n k", "c(t), f(x)")``."""
        if isinstance(params, str):
            params = [p for p in re.split(r"[\s,]+", params) if p]
        if isinstance(funcs, str):
            funcs = re.findall(r"[^\s,][^,]*?\)", funcs)
        decls = []
        for spec in funcs:
            m = re.fullmatch(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*\(\s*([A-Za-z]+)\s*\)\s*", spec)
            if m is None:
                raise SymbolError(f"bad function declaration {spec!r}; expected name(t) or name(x)")
            decls.append(FunctionDecl(m.group(1), m.group(2)))
        return cls(tuple(params), tuple(decls), max_order)

    @property
    def jet_vars(self) -> tuple[str, ...]:
        xs = tuple(x_var(i) for i in range(self.max_order + 1))
        ws = tuple(w_var(j) for j in range(self.max_order + 1))
        return ("t",) + xs + ws

    def is_param(self, name: str) -> bool:
        return name in self.params

    def func(self, name: str) -> FunctionDecl | None:
        return self._func_index.get(name)

    def has_jet_var(self, name: str) -> bool:
        kind = jet_kind(name)
        return kind is not None and kind[1] <= self.max_order

    def extended(self, params=(), funcs=()) -> SymbolTable:
        """A copy with extra parameters / function declarations."""
        return SymbolTable(self.params + tuple(params), self.funcs + tuple(funcs), self.max_order)
