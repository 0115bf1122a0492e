"""Canonical rational-function normal form and the zero test.

An expression is mapped to ``numerator / denominator`` with both sides
sparse polynomials over QQ in an extended set of indeterminates:

* every symbol (jet variable, parameter, reduced-space symbol),
* every function atom ``(name, derivative order)``,
* ``exp(v)`` for each exponentiated base variable ``v``,
* one power-product indeterminate ``a^p`` per atom ``a`` raised to a
  symbolic exponent with parameter ``p`` (so ``x^(n+1) = x * [x^n]``).

Those indeterminates are algebraically independent, which keeps the zero
test decidable.  Polynomial gcd/cancellation is delegated to sympy's sparse
``FracField``; the result is converted back to a ring-independent tuple
form so normal forms of different expressions compare directly.

The numerator and denominator are coprime, the denominator has integer
coefficients with gcd 1 and a positive leading coefficient under grlex
with the fixed indeterminate order (jet variables t, x, x1, ..., w, w1, ...;
other symbols by name; function atoms; exponentials; power products).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy.polys.domains import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import grlex

from lamsym.errors import NonLatticeError, NormalizationError
from lamsym.expr.symbols import is_jet_var, jet_rank
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
    add,
    div,
    mul,
    power,
)

SYMBOL, FUNC, EXP, LATTICE = 1, 2, 3, 4


@dataclass(frozen=True)
class Indeterminate:
    """One polynomial indeterminate of the normal form."""

    kind: int
    name: str = ""
    order: int = 0
    base: "Indeterminate | None" = None
    param: str = ""

    @property
    def key(self) -> tuple:
        if self.kind == SYMBOL:
            if is_jet_var(self.name):
                return (0, jet_rank(self.name), "")
            return (1, 0, self.name)
        if self.kind == FUNC:
            return (2, 0, self.name, self.order)
        if self.kind == EXP:
            return (3, jet_rank(self.name) if is_jet_var(self.name) else 0, self.name)
        return (4, 0, self.base.key, self.param)

    def variables(self) -> frozenset[str]:
        """Names this indeterminate depends on (function arguments included)."""
        if self.kind == SYMBOL:
            return frozenset((self.name,))
        if self.kind == FUNC:
            return frozenset((self.name, self.arg))
        if self.kind == EXP:
            return frozenset((self.name,))
        return self.base.variables() | {self.param}

    @property
    def arg(self) -> str:
        return self.param if self.kind == FUNC else ""

    def to_expr(self) -> Expr:
        if self.kind == SYMBOL:
            return Symbol(self.name)
        if self.kind == FUNC:
            return FunctionAtom(self.name, self.order, self.param)
        if self.kind == EXP:
            return Exp(self.name, Exponent(1))
        return power(self.base.to_expr(), Exponent.of(self.param))


def _sym(name: str) -> Indeterminate:
    return Indeterminate(SYMBOL, name)


def _func(atom: FunctionAtom) -> Indeterminate:
    return Indeterminate(FUNC, atom.name, atom.order, None, atom.arg)


def _exp(var: str) -> Indeterminate:
    return Indeterminate(EXP, var)


def _lattice(base: Indeterminate, param: str) -> Indeterminate:
    return Indeterminate(LATTICE, base=base, param=param)


Monomial = tuple[tuple[Indeterminate, int], ...]
Term = tuple[Monomial, Fraction]


@dataclass(frozen=True)
class NormalForm:
    """Canonical ``numerator / denominator``; both are tuples of (monomial, coeff).

    Terms are sorted by descending grlex order.  Equal rational functions
    have equal (``==``) normal forms.
    """

    numerator: tuple[Term, ...]
    denominator: tuple[Term, ...]

    def is_zero(self) -> bool:
        return not self.numerator

    def is_constant(self) -> bool:
        return all(not m for m, _ in self.numerator) and self.denominator == ONE_POLY

    def indeterminates(self) -> frozenset[Indeterminate]:
        return frozenset(i for poly in (self.numerator, self.denominator)
                         for mono, _ in poly for i, _ in mono)

    def variables(self) -> frozenset[str]:
        out: set[str] = set()
        for ind in self.indeterminates():
            out |= ind.variables()
        return frozenset(out)

    def numerator_expr(self) -> Expr:
        return poly_to_expr(self.numerator)

    def denominator_expr(self) -> Expr:
        return poly_to_expr(self.denominator)

    def to_expr(self) -> Expr:
        num = poly_to_expr(self.numerator)
        if self.denominator == ONE_POLY:
            return num
        return div(num, poly_to_expr(self.denominator))


ONE_POLY: tuple[Term, ...] = (((), Fraction(1)),)


@lru_cache(maxsize=None)
def _field(n: int) -> FracField:
    return FracField(tuple(f"g{i}" for i in range(n)), QQ, grlex)


def _collect(e: Expr, acc: set[Indeterminate], seen: dict[int, frozenset]) -> frozenset:
    """Add the indeterminates of ``e`` to ``acc``; return the atoms of ``e``."""
    hit = seen.get(id(e))
    if hit is not None:
        return hit
    if isinstance(e, Const):
        atoms = frozenset()
    elif isinstance(e, Symbol):
        atoms = frozenset((_sym(e.name),))
    elif isinstance(e, FunctionAtom):
        atoms = frozenset((_func(e),))
    elif isinstance(e, Exp):
        base = _exp(e.var)
        atoms = frozenset((base,))
        if e.exponent.const:
            acc.add(base)
        for p in e.exponent.params:
            acc.add(_lattice(base, p))
    elif isinstance(e, Power):
        atoms = _collect(e.base, acc, seen)
        for p in e.exponent.params:
            for a in atoms:
                if a.kind != LATTICE:
                    acc.add(_lattice(a, p))
    else:
        parts = [_collect(c, acc, seen) for c in e.children()]
        atoms = frozenset().union(*parts)
    if not isinstance(e, (Exp, Power)):
        acc.update(atoms)
    seen[id(e)] = atoms
    return atoms


class _Converter:
    def __init__(self, gens: list[Indeterminate]):
        self.gens = gens
        self.index = {g: i for i, g in enumerate(gens)}
        self.K = _field(max(len(gens), 1))
        self.memo: dict[int, object] = {}
        self.keep: list[Expr] = []

    def gen(self, ind: Indeterminate):
        return self.K.gens[self.index[ind]]

    def convert(self, e: Expr):
        hit = self.memo.get(id(e))
        if hit is not None:
            return hit
        out = self._convert(e)
        self.memo[id(e)] = out
        self.keep.append(e)
        return out

    def _lattice_power(self, ind: Indeterminate, k: int, exponent: Exponent):
        """``ind ** (k * exponent)`` as a field element."""
        K = self.K
        out = K.one
        c = k * exponent.const
        if c:
            out = out * self.gen(ind) ** c
        for p, coeff in exponent.terms:
            out = out * self.gen(_lattice(ind, p)) ** (k * coeff)
        return out

    def _convert(self, e: Expr):
        K = self.K
        if isinstance(e, Const):
            return K.raw_new(K.ring.ground_new(QQ(e.value.numerator, e.value.denominator)))
        if isinstance(e, Symbol):
            return self.gen(_sym(e.name))
        if isinstance(e, FunctionAtom):
            return self.gen(_func(e))
        if isinstance(e, Exp):
            return self._lattice_power(_exp(e.var), 1, e.exponent)
        if isinstance(e, Sum):
            # add numerators over a shared denominator in the ring; gcds only between groups
            groups: dict = {}
            for t in e.terms:
                f = self.convert(t)
                groups[f.denom] = groups.get(f.denom, K.ring.zero) + f.numer
            out = K.zero
            for den, num in groups.items():
                out = out + self._fraction(num, den)
            return out
        if isinstance(e, Product):
            num, den = K.ring.one, K.ring.one
            for f in e.factors:
                c = self.convert(f)
                num, den = num * c.numer, den * c.denom
            return self._fraction(num, den)
        if isinstance(e, Quotient):
            den = self.convert(e.den)
            if not den:
                raise NormalizationError("identically zero denominator")
            return self.convert(e.num) / den
        if isinstance(e, Power):
            base = self.convert(e.base)
            if e.exponent.is_const:
                k = e.exponent.const
                if k < 0 and not base:
                    raise NormalizationError("identically zero denominator")
                return base ** k
            return self._symbolic_power(base, e.exponent)
        raise TypeError(f"unknown expression node {type(e).__name__}")

    def _fraction(self, num, den):
        """``num/den`` with a single cancellation (none needed over a unit denominator)."""
        if den == self.K.ring.one or not num:
            return self.K.raw_new(num, den if num else self.K.ring.one)
        return self.K.new(num, den)

    def _symbolic_power(self, base, exponent: Exponent):
        num, den = base.numer, base.denom
        if len(num.terms()) != 1 or len(den.terms()) != 1:
            raise NonLatticeError("symbolic exponent on a base that is not a monomial")
        (nm, nc), = num.terms()
        (dm, dc), = den.terms()
        if nc != dc:
            raise NonLatticeError("symbolic exponent on a base with a non-unit coefficient")
        out = self.K.one
        for i, (a, b) in enumerate(zip(nm, dm)):
            k = a - b
            if not k:
                continue
            ind = self.gens[i]
            if ind.kind == LATTICE:
                raise NonLatticeError("symbolic power of a symbolic power")
            out = out * self._lattice_power(ind, k, exponent)
        return out


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _terms(poly, gens: list[Indeterminate], scale: Fraction) -> tuple[Term, ...]:
    out = []
    for exps, coeff in poly.terms():
        mono = tuple((gens[i], k) for i, k in enumerate(exps) if k)
        out.append((mono, _to_fraction(coeff) * scale))
    return tuple(out)


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def normalize(e: Expr) -> NormalForm:
    """Canonical normal form of ``e``.

    Raises :class:`NormalizationError` if a denominator vanishes identically
    and :class:`NonLatticeError` for powers outside the lattice class.
    """
    acc: set[Indeterminate] = set()
    _collect(e, acc, {})
    gens = sorted(acc, key=lambda g: g.key)
    conv = _Converter(gens)
    f = conv.convert(e)
    num, den = f.numer, f.denom
    if not num:
        return NormalForm((), ONE_POLY)
    coeffs = [_to_fraction(c) for _, c in den.terms()]
    denom_lcm = 1
    for c in coeffs:
        denom_lcm = _lcm(denom_lcm, c.denominator)
    content = 0
    for c in coeffs:
        content = gcd(content, int(c * denom_lcm))
    scale = Fraction(denom_lcm, content)
    if _to_fraction(den.LC) < 0:
        scale = -scale
    return NormalForm(_terms(num, gens, scale), _terms(den, gens, scale))


def is_zero(e: Expr) -> bool:
    """True iff ``e`` is identically zero as a rational function."""
    return normalize(e).is_zero()


def equal(a: Expr, b: Expr) -> bool:
    return is_zero(a - b)


def simplify(e: Expr) -> Expr:
    """Rebuild ``e`` from its normal form (canonical, usually much smaller)."""
    return normalize(e).to_expr()


def monomial_to_expr(mono: Monomial) -> Expr:
    """Product of indeterminate powers, folding power products into lattice exponents."""
    grouped: dict[Indeterminate, Exponent] = {}
    order: list[Indeterminate] = []
    for ind, k in mono:
        if ind.kind == LATTICE:
            base, extra = ind.base, Exponent(0, ((ind.param, k),))
        else:
            base, extra = ind, Exponent(k)
        if base not in grouped:
            grouped[base] = Exponent(0)
            order.append(base)
        grouped[base] = grouped[base] + extra
    factors = []
    for base in sorted(order, key=lambda g: g.key):
        exponent = grouped[base]
        if base.kind == EXP:
            factors.append(Exp(base.name, exponent))
        else:
            factors.append(power(base.to_expr(), exponent))
    return mul(*factors)


def poly_to_expr(poly: tuple[Term, ...]) -> Expr:
    return add(*(mul(Const(c), monomial_to_expr(m)) for m, c in poly))


def depends_on(e: Expr, name: str) -> bool:
    """Whether the rational function ``e`` genuinely involves ``name``."""
    return name in normalize(e).variables()


def coefficients(e: Expr, var: str) -> dict[int, Expr]:
    """Coefficients of ``e`` as a polynomial in the symbol ``var``.

    Raises :class:`NormalizationError` when ``var`` occurs in the denominator.
    """
    nf = normalize(e)
    target = _sym(var)
    for mono, _ in nf.denominator:
        if any(ind == target for ind, _ in mono):
            raise NormalizationError(f"{var} occurs in the denominator")
    groups: dict[int, list[Term]] = {}
    for mono, c in nf.numerator:
        k = dict(mono).get(target, 0)
        rest = tuple((ind, j) for ind, j in mono if ind != target)
        groups.setdefault(k, []).append((rest, c))
    den = poly_to_expr(nf.denominator)
    return {k: simplify(div(poly_to_expr(tuple(ts)), den)) for k, ts in sorted(groups.items())}
