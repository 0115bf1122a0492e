"""ODE problems, covering systems, the total derivative and restriction.

An ``OdeProblem`` is ``x_n = F(t, x, x1, ..., x_{n-1})``; a ``Covering`` adds
the auxiliary equation ``w1 = H(t, x, x1)`` over a second-order problem.
``restrict`` eliminates every ``x_k`` with ``k >= n`` (and ``w_j`` with
``j >= 1`` given a covering) in one simultaneous substitution, using
eliminators precomputed by repeated differentiation.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from lamsym.errors import JetOrderError, SymbolError
from lamsym.expr import (
    ZERO,
    Expr,
    Symbol,
    SymbolTable,
    diff_raw,
    free_symbols,
    jet_kind,
    normalize,
    parse,
    simplify,
    substitute,
    w_var,
    x_var,
)
from lamsym.expr.tree import add, mul


def jet_order(e: Expr) -> tuple[int, int]:
    """Highest x index and highest w index occurring in ``e`` (-1 if absent)."""
    xo = wo = -1
    for name in free_symbols(e):
        kind = jet_kind(name)
        if kind is None:
            continue
        head, idx = kind
        if head == "x":
            xo = max(xo, idx)
        elif head == "w":
            wo = max(wo, idx)
    return xo, wo


def exact_order(e: Expr) -> tuple[int, int]:
    """Like :func:`jet_order` but ignoring spurious occurrences that cancel."""
    names = normalize(e).variables()
    xo = wo = -1
    for name in names:
        kind = jet_kind(name)
        if kind is None:
            continue
        head, idx = kind
        if head == "x":
            xo = max(xo, idx)
        elif head == "w":
            wo = max(wo, idx)
    return xo, wo


def depends_on_w(e: Expr) -> bool:
    return exact_order(e)[1] >= 0


def total_derivative_raw(e: Expr, table: SymbolTable | None = None) -> Expr:
    cap = (table or SymbolTable()).max_order
    xo, wo = jet_order(e)
    if xo >= cap or wo >= cap:
        raise JetOrderError(f"total derivative needs a jet variable beyond the cap x{cap}/w{cap}")
    names = free_symbols(e)
    parts = []
    if "t" in names:
        parts.append(diff_raw(e, "t"))
    for i in range(xo + 1):
        v = x_var(i)
        if v in names:
            parts.append(mul(Symbol(x_var(i + 1)), diff_raw(e, v)))
    for j in range(wo + 1):
        v = w_var(j)
        if v in names:
            parts.append(mul(Symbol(w_var(j + 1)), diff_raw(e, v)))
    return add(*parts) if parts else ZERO


def total_derivative(e: Expr, table: SymbolTable | None = None) -> Expr:
    """``D_t e = e_t + sum x_{i+1} e_{x_i} + sum w_{j+1} e_{w_j}``, simplified.

    Raises :class:`JetOrderError` when a jet variable beyond the table's cap
    would be needed.
    """
    return simplify(total_derivative_raw(e, table))


def _check_free_of(e: Expr, what: str, max_x: int, allow_w: bool) -> None:
    xo, wo = exact_order(e)
    if xo > max_x:
        raise SymbolError(f"{what} must not contain {x_var(xo)}")
    if wo >= 0 and not allow_w:
        raise SymbolError(f"{what} must not contain {w_var(wo)}")


class _Eliminators:
    """Thread-safe, append-only list ``E[k]`` of eliminators for ``x_{n+k}`` (or ``w_{1+k}``)."""

    def __init__(self, first: Expr, step):
        self.items = [first]
        self.step = step
        self.lock = threading.Lock()

    def upto(self, k: int) -> list[Expr]:
        with self.lock:
            while len(self.items) <= k:
                self.items.append(self.step(self.items[-1]))
            return self.items[: k + 1]


@dataclass(frozen=True)
class OdeProblem:
    """``x_order = rhs``; ``rhs`` may involve t, x, ..., x_{order-1}, parameters and functions."""

    order: int
    rhs: Expr
    table: SymbolTable = field(default_factory=SymbolTable)
    name: str = ""
    _elim: _Eliminators = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.order < 1:
            raise SymbolError("the order of an ODE must be at least 1")
        if self.order >= self.table.max_order:
            raise SymbolError(f"order {self.order} leaves no room below the jet cap {self.table.max_order}")
        if self.table.func("w") is not None:
            raise SymbolError("w is reserved")
        _check_free_of(self.rhs, "the right-hand side", self.order - 1, allow_w=False)
        rhs = simplify(self.rhs)
        object.__setattr__(self, "rhs", rhs)
        top = x_var(self.order)
        object.__setattr__(self, "_elim", _Eliminators(
            rhs, lambda e: substitute(total_derivative_raw(e, self.table), {top: rhs})))

    @classmethod
    def parse(cls, order: int, rhs: str, params: str = "", funcs: str = "",
              max_order: int | None = None, name: str = "") -> OdeProblem:
        kwargs = {} if max_order is None else {"max_order": max_order}
        table = SymbolTable.build(params, funcs, **kwargs)
        return cls(order, parse(rhs, table), table, name)

    def expr(self, text: str) -> Expr:
        """Parse ``text`` against this problem's symbol table."""
        return parse(text, self.table)

    def eliminators(self, upto: int) -> dict[str, Expr]:
        """Bindings ``x_k := ...`` for ``order <= k <= upto``."""
        if upto < self.order:
            return {}
        if upto > self.table.max_order:
            raise JetOrderError(f"x{upto} is beyond the jet cap")
        items = self._elim.upto(upto - self.order)
        return {x_var(self.order + k): e for k, e in enumerate(items)}


@dataclass(frozen=True)
class Covering:
    """The covering system ``x2 = F, w1 = H(t, x, x1)`` of a second-order problem."""

    base: OdeProblem
    h: Expr
    _elim: _Eliminators = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.base.order != 2:
            raise SymbolError("coverings are defined over second-order problems")
        _check_free_of(self.h, "H", 1, allow_w=False)
        h = simplify(self.h)
        object.__setattr__(self, "h", h)
        base = self.base
        object.__setattr__(self, "_elim", _Eliminators(
            h, lambda e: substitute(total_derivative_raw(e, base.table), base.eliminators(2))))

    @property
    def table(self) -> SymbolTable:
        return self.base.table

    @property
    def rhs(self) -> Expr:
        return self.base.rhs

    def eliminators(self, x_upto: int, w_upto: int) -> dict[str, Expr]:
        out = self.base.eliminators(x_upto)
        if w_upto >= 1:
            if w_upto > self.table.max_order:
                raise JetOrderError(f"w{w_upto} is beyond the jet cap")
            for k, e in enumerate(self._elim.upto(w_upto - 1)):
                out[w_var(k + 1)] = e
        return out


def restrict(e: Expr, problem: OdeProblem | Covering, covering: Covering | None = None) -> Expr:
    """Restrict ``e`` to the solution manifold of ``problem`` (and ``covering``).

    The result depends only on t, x, ..., x_{n-1} (and w when a covering is
    given); w_j with j >= 1 are eliminated only with a covering.
    """
    if isinstance(problem, Covering):
        covering, problem = problem, problem.base
    xo, wo = jet_order(e)
    if covering is not None:
        bindings = covering.eliminators(xo, wo)
    else:
        bindings = problem.eliminators(xo)
    if not bindings:
        return simplify(e)
    return substitute(e, bindings)


def apply_A(e: Expr, problem: OdeProblem | Covering, covering: Covering | None = None) -> Expr:
    """The vector field of the equation: restricted total derivative."""
    table = problem.table
    return restrict(total_derivative_raw(e, table), problem, covering)


@dataclass(frozen=True)
class JetField:
    """``xi d/dt + sum eta[i] d/dx_i + sum psi[j] d/dw_j``.

    ``kind`` records how the field was produced; it is informational only.
    """

    xi: Expr
    eta: tuple[Expr, ...]
    psi: tuple[Expr, ...] = ()
    kind: str = "raw"

    KINDS = ("standard", "lambda", "telescopic", "covering", "raw")

    def __post_init__(self):
        object.__setattr__(self, "eta", tuple(self.eta))
        object.__setattr__(self, "psi", tuple(self.psi))
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown jet field kind {self.kind!r}")

    @property
    def order(self) -> int:
        return len(self.eta) - 1

    @property
    def coeffs(self) -> tuple[Expr, ...]:
        return (self.xi,) + self.eta + self.psi

    def coefficient(self, name: str) -> Expr:
        """Coefficient of ``d/d name``; zero when ``name`` is not a jet variable of the field."""
        kind = jet_kind(name)
        if kind is None:
            return ZERO
        head, idx = kind
        if head == "t":
            return self.xi
        seq = self.eta if head == "x" else self.psi
        if idx >= len(seq):
            raise JetOrderError(f"the field is not prolonged to {name}")
        return seq[idx]

    def apply_raw(self, e: Expr) -> Expr:
        parts = []
        for name in sorted(free_symbols(e)):
            kind = jet_kind(name)
            if kind is None:
                continue
            d = diff_raw(e, name)
            parts.append(mul(self.coefficient(name), d))
        return add(*parts) if parts else ZERO

    def apply(self, e: Expr) -> Expr:
        """The field acting on ``e`` as a derivation."""
        return simplify(self.apply_raw(e))
