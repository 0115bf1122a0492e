"""Partial derivatives, simultaneous substitution and parameter instantiation."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

from lamsym.errors import NonLatticeError, SubstitutionError
from lamsym.expr.normal import simplify
from lamsym.expr.tree import (
    ONE,
    ZERO,
    Const,
    Exp,
    Exponent,
    Expr,
    FunctionAtom,
    Power,
    Product,
    Quotient,
    Sum,
    Symbol,
    add,
    as_expr,
    div,
    free_symbols,
    mul,
    neg,
    power,
)


class _Differentiator:
    def __init__(self, var: str):
        self.var = var
        self.memo: dict[int, Expr] = {}
        self.keep: list[Expr] = []

    def __call__(self, e: Expr) -> Expr:
        hit = self.memo.get(id(e))
        if hit is None:
            hit = self._diff(e)
            self.memo[id(e)] = hit
            self.keep.append(e)
        return hit

    def _exponent_guard(self, exponent: Exponent) -> None:
        if self.var in exponent.params:
            raise NonLatticeError(
                f"differentiating with respect to {self.var}, which appears in an exponent, "
                "leaves the lattice class"
            )

    def _diff(self, e: Expr) -> Expr:
        v = self.var
        if isinstance(e, Const):
            return ZERO
        if isinstance(e, Symbol):
            return ONE if e.name == v else ZERO
        if isinstance(e, FunctionAtom):
            return FunctionAtom(e.name, e.order + 1, e.arg) if e.arg == v else ZERO
        if isinstance(e, Exp):
            self._exponent_guard(e.exponent)
            return mul(e.exponent.to_expr(), e) if e.var == v else ZERO
        if isinstance(e, Sum):
            return add(*(self(t) for t in e.terms))
        if isinstance(e, Product):
            parts = []
            for i, f in enumerate(e.factors):
                d = self(f)
                if isinstance(d, Const) and d.value == 0:
                    continue
                parts.append(mul(*e.factors[:i], d, *e.factors[i + 1:]))
            return add(*parts)
        if isinstance(e, Quotient):
            dn, dd = self(e.num), self(e.den)
            if isinstance(dd, Const) and dd.value == 0:
                return div(dn, e.den)
            return div(add(mul(dn, e.den), neg(mul(e.num, dd))), power(e.den, Exponent(2)))
        if isinstance(e, Power):
            self._exponent_guard(e.exponent)
            db = self(e.base)
            if isinstance(db, Const) and db.value == 0:
                return ZERO
            return mul(e.exponent.to_expr(), power(e.base, e.exponent - 1), db)
        raise TypeError(f"unknown expression node {type(e).__name__}")


def diff_raw(e: Expr, var: str) -> Expr:
    """Formal partial derivative without simplification."""
    if isinstance(var, Symbol):
        var = var.name
    return _Differentiator(var)(e)


def diff(e: Expr, var: Union[str, Symbol]) -> Expr:
    """Formal partial derivative of ``e`` with respect to a jet variable or parameter.

    The result is returned in canonical (simplified) form.
    """
    return simplify(diff_raw(e, var))


Binding = Mapping[Union[str, Symbol], Union[Expr, int, Fraction]]


def _normalize_bindings(bindings: Binding) -> dict[str, Expr]:
    out = {}
    for key, value in bindings.items():
        name = key.name if isinstance(key, Symbol) else key
        out[name] = as_expr(value)
    return out


def _check_acyclic(bindings: dict[str, Expr]) -> None:
    deps = {k: free_symbols(v) & bindings.keys() for k, v in bindings.items()}
    state: dict[str, int] = {}

    def visit(k: str, path: list[str]) -> None:
        state[k] = 1
        for d in sorted(deps[k]):
            if state.get(d) == 1:
                cycle = path[path.index(d):] + [d] if d in path else [k, d]
                raise SubstitutionError("cyclic substitution: " + " -> ".join(cycle))
            if d not in state:
                visit(d, path + [d])
        state[k] = 2

    for k in sorted(bindings):
        if k not in state:
            visit(k, [k])


class _Substituter:
    def __init__(self, bindings: dict[str, Expr], bare_only: bool = False):
        self.bindings = bindings
        self.bare_only = bare_only
        self.exponent_values: dict[str, int] = {}
        self.exponent_renames: dict[str, str] = {}
        for name, value in bindings.items():
            if isinstance(value, Const) and value.value.denominator == 1:
                self.exponent_values[name] = int(value.value)
            elif isinstance(value, Symbol):
                self.exponent_renames[name] = value.name
        self.memo: dict[int, Expr] = {}
        self.keep: list[Expr] = []

    def exponent(self, exponent: Exponent) -> Exponent:
        touched = exponent.params & self.bindings.keys()
        if not touched:
            return exponent
        out = exponent.substitute({p: self.exponent_values[p] for p in touched if p in self.exponent_values})
        for p in touched - self.exponent_values.keys():
            if p not in self.exponent_renames:
                raise SubstitutionError(
                    f"parameter {p} appears in an exponent; it can only be replaced by an "
                    "integer or another parameter"
                )
            c = out.coeff(p)
            out = out - Exponent(0, ((p, c),)) + Exponent(0, ((self.exponent_renames[p], c),))
        return out

    def __call__(self, e: Expr) -> Expr:
        hit = self.memo.get(id(e))
        if hit is None:
            hit = self._sub(e)
            self.memo[id(e)] = hit
            self.keep.append(e)
        return hit

    def _sub(self, e: Expr) -> Expr:
        if isinstance(e, Const):
            return e
        if isinstance(e, Symbol):
            return self.bindings.get(e.name, e)
        if isinstance(e, FunctionAtom):
            if self.bare_only:
                return e
            if e.arg in self.bindings and self.bindings[e.arg] != Symbol(e.arg):
                raise SubstitutionError(
                    f"cannot substitute {e.arg}: it is the argument of the opaque function {e.name}"
                )
            return e
        if isinstance(e, Exp):
            if self.bare_only:
                return e
            if e.var in self.bindings and self.bindings[e.var] != Symbol(e.var):
                raise SubstitutionError(f"cannot substitute {e.var}: it appears inside exp")
            return Exp(e.var, self.exponent(e.exponent))
        if isinstance(e, Sum):
            return add(*(self(t) for t in e.terms))
        if isinstance(e, Product):
            return mul(*(self(f) for f in e.factors))
        if isinstance(e, Quotient):
            return div(self(e.num), self(e.den))
        if isinstance(e, Power):
            return power(self(e.base), self.exponent(e.exponent))
        raise TypeError(f"unknown expression node {type(e).__name__}")


def substitute_raw(e: Expr, bindings: Binding) -> Expr:
    """Simultaneous substitution without simplification."""
    b = _normalize_bindings(bindings)
    if not b:
        return e
    _check_acyclic(b)
    return _Substituter(b)(e)


def substitute(e: Expr, bindings: Binding) -> Expr:
    """Simultaneous substitution ``e[k := v for k, v in bindings]``, simplified.

    Raises :class:`SubstitutionError` for cyclic bindings (a value mentioning a
    bound name, including itself) and for substituting the argument of an
    opaque function or of ``exp``.
    """
    return simplify(substitute_raw(e, bindings))


def instantiate(e: Expr, values: Mapping[str, Union[int, Fraction, Expr]]) -> Expr:
    """Give parameters concrete values; parameters in exponents need integers."""
    return substitute(e, values)


def rename_bare(e: Expr, old: str, new: str) -> Expr:
    """Rename bare occurrences of the symbol ``old``; function and exp arguments are kept."""
    return simplify(_Substituter({old: Symbol(new)}, bare_only=True)(e))
