"""Immutable expression trees.

Nodes compare structurally (``==`` is *not* mathematical equality; use
:func:`lamsym.expr.is_zero` for that).  The arithmetic operators build new
trees through light smart constructors that flatten nested sums/products
and fold rational constants, nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Union

from lamsym.errors import NonLatticeError, NormalizationError


@dataclass(frozen=True)
class Exponent:
    """A lattice exponent ``const + sum(coeff * param)`` with integer coefficients."""

    const: int = 0
    terms: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, value: Union[int, str, "Exponent"]) -> Exponent:
        if isinstance(value, Exponent):
            return value
        if isinstance(value, str):
            return cls(0, ((value, 1),))
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, Rational) and Fraction(value).denominator == 1:
                return cls(int(value))
            raise NonLatticeError(f"exponent {value!r} is not an integer lattice point")
        return cls(int(value))

    @staticmethod
    def _make(const: int, coeffs: dict[str, int]) -> Exponent:
        return Exponent(const, tuple(sorted((p, c) for p, c in coeffs.items() if c)))

    @property
    def params(self) -> frozenset[str]:
        return frozenset(p for p, _ in self.terms)

    @property
    def is_const(self) -> bool:
        return not self.terms

    def coeff(self, param: str) -> int:
        return dict(self.terms).get(param, 0)

    def __add__(self, other) -> Exponent:
        other = Exponent.of(other)
        coeffs = dict(self.terms)
        for p, c in other.terms:
            coeffs[p] = coeffs.get(p, 0) + c
        return Exponent._make(self.const + other.const, coeffs)

    __radd__ = __add__

    def __neg__(self) -> Exponent:
        return Exponent(-self.const, tuple((p, -c) for p, c in self.terms))

    def __sub__(self, other) -> Exponent:
        return self + (-Exponent.of(other))

    def __rsub__(self, other) -> Exponent:
        return Exponent.of(other) - self

    def __mul__(self, k: int) -> Exponent:
        if isinstance(k, Exponent):
            if k.is_const:
                k = k.const
            elif self.is_const:
                return k * self.const
            else:
                raise NonLatticeError("product of two symbolic exponents is not a lattice exponent")
        if not isinstance(k, int):
            raise NonLatticeError(f"cannot scale an exponent by {k!r}")
        return Exponent._make(self.const * k, {p: c * k for p, c in self.terms})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.const == 0 and not self.terms

    def is_one(self) -> bool:
        return self.const == 1 and not self.terms

    def sign(self) -> int:
        """+1 if every component is >= 0, -1 if every component is <= 0, else 0."""
        parts = [self.const] + [c for _, c in self.terms]
        if all(v >= 0 for v in parts):
            return 1
        if all(v <= 0 for v in parts):
            return -1
        return 0

    def substitute(self, values: dict[str, int]) -> Exponent:
        const = self.const
        coeffs = {}
        for p, c in self.terms:
            if p in values:
                v = values[p]
                if Fraction(v).denominator != 1:
                    raise NonLatticeError(f"parameter {p} appears in an exponent; it needs an integer value")
                const += c * int(v)
            else:
                coeffs[p] = c
        return Exponent._make(const, coeffs)

    def to_expr(self) -> Expr:
        return add(Const(self.const), *(mul(Const(c), Symbol(p)) for p, c in self.terms))

    def render(self) -> str:
        parts = []
        for p, c in self.terms:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            sign = "-" if c < 0 else "+"
            parts.append((sign, f"{mag}{p}"))
        if self.const:
            parts.append(("-" if self.const < 0 else "+", str(abs(self.const))))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __str__(self) -> str:
        return self.render()


class Expr:
    """Base class of expression nodes."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), neg(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        return power(self, Exponent.of(exponent))

    def children(self) -> tuple[Expr, ...]:
        return ()

    def walk(self) -> Iterator[Expr]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children())

    def __str__(self) -> str:
        from lamsym.expr.render import render

        return render(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True, slots=True)
class Symbol(Expr):
    """A jet variable, a parameter, or a reduced-space symbol."""

    name: str


@dataclass(frozen=True, slots=True)
class FunctionAtom(Expr):
    """``order``-th derivative of the opaque function ``name`` applied to ``arg``."""

    name: str
    order: int
    arg: str


@dataclass(frozen=True, slots=True)
class Exp(Expr):
    """``exp(exponent * var)`` with a lattice exponent."""

    var: str
    exponent: Exponent = Exponent(1)


@dataclass(frozen=True, slots=True)
class Sum(Expr):
    terms: tuple[Expr, ...]

    def children(self):
        return self.terms


@dataclass(frozen=True, slots=True)
class Product(Expr):
    factors: tuple[Expr, ...]

    def children(self):
        return self.factors


@dataclass(frozen=True, slots=True)
class Quotient(Expr):
    num: Expr
    den: Expr

    def children(self):
        return (self.num, self.den)


@dataclass(frozen=True, slots=True)
class Power(Expr):
    base: Expr
    exponent: Exponent

    def children(self):
        return (self.base,)


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not expressions")
    if isinstance(value, (int, Fraction)) or isinstance(value, Rational):
        return Const(Fraction(value))
    if isinstance(value, str):
        return Symbol(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")


def is_const(e: Expr, value=None) -> bool:
    if not isinstance(e, Const):
        return False
    return value is None or e.value == value


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    const = Fraction(0)
    for term in terms:
        parts = term.terms if isinstance(term, Sum) else (term,)
        for part in parts:
            if isinstance(part, Const):
                const += part.value
            else:
                flat.append(part)
    if const:
        flat.append(Const(const))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    const = Fraction(1)
    for factor in factors:
        parts = factor.factors if isinstance(factor, Product) else (factor,)
        for part in parts:
            if isinstance(part, Const):
                const *= part.value
            else:
                flat.append(part)
    if const == 0:
        return ZERO
    if const != 1:
        flat.insert(0, Const(const))
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


def neg(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    return mul(Const(-1), e)


def div(num: Expr, den: Expr) -> Expr:
    if isinstance(den, Const):
        if den.value == 0:
            raise NormalizationError("division by the literal zero expression")
        return mul(Const(1 / den.value), num)
    if is_const(num, 0):
        return ZERO
    return Quotient(num, den)


def power(base: Expr, exponent: Exponent) -> Expr:
    if exponent.is_zero():
        return ONE
    if exponent.is_one():
        return base
    if isinstance(base, Const) and exponent.is_const:
        if base.value == 0 and exponent.const < 0:
            raise NormalizationError("division by the literal zero expression")
        return Const(base.value ** exponent.const)
    if isinstance(base, Exp):
        return Exp(base.var, base.exponent * exponent)
    if isinstance(base, Power) and (base.exponent.is_const or exponent.is_const):
        return power(base.base, base.exponent * exponent)
    return Power(base, exponent)


def exp(var: str, exponent: Union[int, str, Exponent] = 1) -> Exp:
    return Exp(var, Exponent.of(exponent))


def symbols(names: str) -> tuple[Symbol, ...]:
    """``t, x, x1 = symbols("t x x1")``."""
    return tuple(Symbol(n) for n in names.replace(",", " ").split())


def func(name: str, arg: str, order: int = 0) -> FunctionAtom:
    return FunctionAtom(name, order, arg)


def free_symbols(e: Expr) -> frozenset[str]:
    """Names of all symbols, function arguments and exp variables in ``e``.

    Exponent parameters are included too, since they are parameters.
    """
    out: set[str] = set()
    for node in e.walk():
        if isinstance(node, Symbol):
            out.add(node.name)
        elif isinstance(node, FunctionAtom):
            out.add(node.arg)
        elif isinstance(node, Exp):
            out.add(node.var)
            out.update(node.exponent.params)
        elif isinstance(node, Power):
            out.update(node.exponent.params)
    return frozenset(out)


def function_atoms(e: Expr) -> frozenset[FunctionAtom]:
    return frozenset(n for n in e.walk() if isinstance(n, FunctionAtom))
