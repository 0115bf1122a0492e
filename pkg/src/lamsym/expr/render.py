"""Deterministic text rendering in the input grammar.

Rendering goes through the normal form, so equal rational functions render
identically.  When the denominator is a single monomial it is distributed
over the numerator terms (``x1/x + x*q(t) + s(t)/x``); otherwise the output
is ``(numerator)/(denominator)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from lamsym.errors import NonLatticeError, NormalizationError
from lamsym.expr.normal import EXP, FUNC, LATTICE, Indeterminate, Monomial, NormalForm, normalize
from lamsym.expr.tree import (
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
)


def render(e: Expr) -> str:
    try:
        nf = normalize(e)
    except (NormalizationError, NonLatticeError):
        return render_tree(e)
    return render_normal(nf)


def _atom(ind: Indeterminate) -> str:
    if ind.kind == FUNC:
        return f"{ind.name}{chr(39) * ind.order}({ind.param})"
    if ind.kind == EXP:
        return f"exp({ind.name})"
    return ind.name


def _exponent_text(exponent: Exponent) -> str:
    if exponent.is_const and exponent.const >= 0:
        return str(exponent.const)
    if not exponent.const and len(exponent.terms) == 1 and exponent.terms[0][1] == 1:
        return exponent.terms[0][0]
    return f"({exponent.render()})"


def _power_text(ind: Indeterminate, exponent: Exponent) -> str:
    if exponent.is_one():
        return _atom(ind)
    return f"{_atom(ind)}^{_exponent_text(exponent)}"


def _exponents(mono: Monomial, sign: int = 1) -> dict[Indeterminate, Exponent]:
    out: dict[Indeterminate, Exponent] = {}
    for ind, k in mono:
        if ind.kind == LATTICE:
            base, extra = ind.base, Exponent(0, ((ind.param, sign * k),))
        else:
            base, extra = ind, Exponent(sign * k)
        out[base] = out.get(base, Exponent(0)) + extra
    return out


def _term(coeff: Fraction, exps: dict[Indeterminate, Exponent]) -> str:
    """Render ``|coeff| * prod(base^exp)`` (the sign is handled by the caller)."""
    num_factors, den_factors = [], []
    for ind in sorted(exps, key=lambda g: g.key):
        exponent = exps[ind]
        if exponent.is_zero():
            continue
        if exponent.sign() < 0:
            den_factors.append(_power_text(ind, -exponent))
        else:
            num_factors.append(_power_text(ind, exponent))
    p, q = abs(coeff.numerator), coeff.denominator
    num = ([str(p)] if p != 1 or not num_factors else []) + num_factors
    den = ([str(q)] if q != 1 else []) + den_factors
    text = "*".join(num)
    if len(den) == 1:
        text += "/" + den[0]
    elif den:
        text += "/(" + "*".join(den) + ")"
    return text


def _join(parts: list[tuple[int, str]]) -> str:
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign < 0 else "") + body
    for sign, body in parts[1:]:
        out += (" - " if sign < 0 else " + ") + body
    return out


def _poly(poly) -> str:
    return _join([(1 if c > 0 else -1, _term(c, _exponents(m))) for m, c in poly])


def render_normal(nf: NormalForm) -> str:
    if nf.is_zero():
        return "0"
    den = nf.denominator
    if len(den) == 1:
        dmono, dc = den[0]
        dexps = _exponents(dmono, -1)
        parts = []
        for mono, c in nf.numerator:
            exps = _exponents(mono)
            for base, e in dexps.items():
                exps[base] = exps.get(base, Exponent(0)) + e
            coeff = c / dc
            parts.append((1 if coeff > 0 else -1, _term(coeff, exps)))
        return _join(parts)
    scale = 1
    for _, c in nf.numerator:
        scale = scale * c.denominator // gcd(scale, c.denominator)
    num = _poly(tuple((m, c * scale) for m, c in nf.numerator))
    den = tuple((m, c * scale) for m, c in den)
    if len(nf.numerator) > 1:
        num = f"({num})"
    return f"{num}/({_poly(den)})"


def render_tree(e: Expr) -> str:
    """Structural rendering, used when normalization is impossible."""
    if isinstance(e, Const):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"
    if isinstance(e, Symbol):
        return e.name
    if isinstance(e, FunctionAtom):
        return f"{e.name}{chr(39) * e.order}({e.arg})"
    if isinstance(e, Exp):
        base = f"exp({e.var})"
        return base if e.exponent.is_one() else f"{base}^{_exponent_text(e.exponent)}"
    if isinstance(e, Sum):
        return "(" + " + ".join(render_tree(t) for t in e.terms) + ")"
    if isinstance(e, Product):
        return "*".join(render_tree(f) for f in e.factors)
    if isinstance(e, Quotient):
        return f"({render_tree(e.num)})/({render_tree(e.den)})"
    if isinstance(e, Power):
        return f"({render_tree(e.base)})^{_exponent_text(e.exponent)}"
    raise TypeError(f"unknown expression node {type(e).__name__}")
