"""Independent numeric oracle built on sympy.

Residuals are recomputed here from scratch with sympy's own differentiation
(no code from the package besides the expression tree it is converting), then
evaluated exactly at random rational points.  Opaque functions are replaced by
random polynomials so that derivative atoms stay consistent, parameters by
random nonzero integers, and ``w`` by ``log(r)`` so that ``exp(C w) = r^C``
stays rational.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp
from sympy.core.function import AppliedUndef

from lamsym.expr import Const, Exp, Expr, FunctionAtom, Power, Product, Quotient, Sum, Symbol
from lamsym.expr.symbols import jet_kind

T, X, W = sp.symbols("t x w")
MAX_ORDER = 8
XS = [X] + [sp.Symbol(f"x{i}") for i in range(1, MAX_ORDER + 2)]
WS = [W] + [sp.Symbol(f"w{i}") for i in range(1, MAX_ORDER + 2)]
BASE = {"t": T, "x": X}


def to_sympy(e: Expr) -> sp.Expr:
    """Translate a package expression tree into sympy, node by node."""
    memo: dict[int, sp.Expr] = {}

    def go(node: Expr) -> sp.Expr:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Const):
            out = sp.Rational(node.value.numerator, node.value.denominator)
        elif isinstance(node, Symbol):
            out = sp.Symbol(node.name)
        elif isinstance(node, FunctionAtom):
            arg = BASE[node.arg]
            f = sp.Function(node.name)(arg)
            out = sp.Derivative(f, (arg, node.order)) if node.order else f
        elif isinstance(node, Exp):
            out = sp.exp(exponent(node.exponent) * sp.Symbol(node.var))
        elif isinstance(node, Sum):
            out = sp.Add(*(go(t) for t in node.terms))
        elif isinstance(node, Product):
            out = sp.Mul(*(go(f) for f in node.factors))
        elif isinstance(node, Quotient):
            out = go(node.num) / go(node.den)
        elif isinstance(node, Power):
            out = go(node.base) ** exponent(node.exponent)
        else:
            raise TypeError(type(node).__name__)
        memo[id(node)] = out
        return out

    return go(e)


def exponent(ex) -> sp.Expr:
    return sp.Integer(ex.const) + sum((c * sp.Symbol(p) for p, c in ex.terms), sp.Integer(0))


# -- reference jet calculus -------------------------------------------------------


def D(g: sp.Expr, top: int = MAX_ORDER) -> sp.Expr:
    """Total derivative, including w-directions."""
    out = sp.diff(g, T)
    free = g.free_symbols
    for i in range(top):
        if XS[i] in free:
            out += XS[i + 1] * sp.diff(g, XS[i])
        if WS[i] in free:
            out += WS[i + 1] * sp.diff(g, WS[i])
    return out


@dataclass
class Problem:
    order: int
    F: sp.Expr
    H: sp.Expr | None = None
    _elim: dict | None = field(default=None, repr=False)

    def eliminators(self, upto: int = 4) -> dict:
        n = self.order
        elim = {XS[n]: self.F}
        cur = self.F
        for k in range(1, upto):
            cur = D(cur).xreplace({XS[n]: self.F})
            elim[XS[n + k]] = cur
        if self.H is not None:
            cur = self.H
            elim[WS[1]] = cur
            for k in range(1, upto):
                cur = D(cur).xreplace({XS[n]: self.F, WS[1]: self.H})
                elim[WS[k + 1]] = cur
        return elim

    def restrict(self, e: sp.Expr) -> sp.Expr:
        if self._elim is None:
            self._elim = self.eliminators()
        return e.xreplace(self._elim)

    def A(self, e: sp.Expr) -> sp.Expr:
        return self.restrict(D(e))


def problem_of(problem, covering=None) -> Problem:
    return Problem(problem.order, to_sympy(problem.rhs),
                   to_sympy(covering.h) if covering is not None else None)


def lambda_coeffs(rho, phi0, lam, k):
    drho = D(rho)
    out = [phi0]
    for i in range(1, k + 1):
        out.append(D(out[-1]) - drho * XS[i] + lam * (out[-1] - rho * XS[i]))
    return out


def apply_field(xi, eta, e, psi=()):
    out = xi * sp.diff(e, T)
    for i, c in enumerate(eta):
        out += c * sp.diff(e, XS[i])
    for j, c in enumerate(psi):
        out += c * sp.diff(e, WS[j])
    return out


def lambda_residual(P: Problem, rho, phi0, lam) -> sp.Expr:
    lam = P.restrict(lam)
    n = P.order
    eta = lambda_coeffs(rho, phi0, lam, n)
    return P.restrict(eta[n] - apply_field(rho, eta[:n], P.F))


def determining_residual(P: Problem, lam) -> sp.Expr:
    F, x1 = P.F, XS[1]
    return (sp.diff(lam, T) + x1 * sp.diff(lam, X) + F * sp.diff(lam, x1) + lam ** 2
            - sp.diff(F, X) - lam * sp.diff(F, x1))


def covering_residuals(P: Problem, xi, eta0, psi0) -> list[sp.Expr]:
    dxi = D(xi)
    eta1 = D(eta0) - dxi * XS[1]
    eta2 = D(eta1) - dxi * XS[2]
    psi1 = D(psi0) - dxi * WS[1]
    r1 = P.restrict(eta2 - apply_field(xi, [eta0, eta1], P.F, [psi0]))
    r2 = P.restrict(psi1 - apply_field(xi, [eta0, eta1], P.H, [psi0]))
    return [r1, r2]


def psi_residual(P: Problem, rho, phi0, lam, psi) -> sp.Expr:
    lam = P.restrict(lam)
    eta = lambda_coeffs(rho, phi0, lam, 1)
    rhs = D(rho) * lam + rho * lam ** 2 + apply_field(rho, eta, lam)
    lhs = sp.diff(psi, T) + XS[1] * sp.diff(psi, X) + P.F * sp.diff(psi, XS[1]) + lam * psi
    return P.restrict(lhs - rhs)


def rescaled(rho, phi0, lam, f):
    return f * rho, f * phi0, lam - D(f) / f


def invariant_residuals(P: Problem | None, rho, phi0, lam, z, zeta) -> list[sp.Expr]:
    if P is not None:
        lam = P.restrict(lam)
    eta = lambda_coeffs(rho, phi0, lam, 1)
    out = [apply_field(rho, eta, z), apply_field(rho, eta, zeta)]
    return [P.restrict(r) for r in out] if P is not None else out


def class_function(P: Problem, rho, phi0, lam) -> sp.Expr:
    q = phi0 - rho * XS[1]
    return P.restrict(lam) + P.A(q) / q


def reduction_residual(P: Problem, z, zeta, G) -> sp.Expr:
    g = G.xreplace({sp.Symbol("z"): z, sp.Symbol("zeta"): zeta})
    return P.A(zeta) - g * P.A(z)


def telescopic_residual(P: Problem, alpha, beta, gamma1) -> sp.Expr:
    n = P.order
    x1 = XS[1]
    big = (gamma1 + x1 * D(alpha) - D(beta)) / (beta - x1 * alpha)
    eta = [beta, gamma1]
    for i in range(2, n + 1):
        eta.append(D(eta[-1]) - D(alpha) * XS[i] + big * (eta[-1] - alpha * XS[i]))
    return P.restrict(eta[n] - apply_field(alpha, eta[:n], P.F))


# -- exact evaluation at random points --------------------------------------------------


def _random_rational(rng: random.Random, lo=-5, hi=5) -> sp.Rational:
    while True:
        v = Fraction(rng.randint(lo * 7, hi * 7), rng.randint(1, 7))
        if v != 0:
            return sp.Rational(v.numerator, v.denominator)


def _random_poly(rng: random.Random, var: sp.Symbol) -> sp.Expr:
    return sum((sp.Integer(rng.randint(-3, 3)) * var ** k for k in range(4)), sp.Integer(rng.randint(1, 3)))


def concrete(e: sp.Expr, rng: random.Random) -> sp.Expr:
    """Replace functions by random cubic polynomials and parameters by small integers."""
    reps = {}
    for f in sorted(e.atoms(AppliedUndef), key=str):
        if f.func not in reps:
            reps[f.func] = sp.Lambda(f.args[0], _random_poly(rng, f.args[0]))
    out = e
    for func, lam in reps.items():
        out = out.replace(func, lam)
    out = out.doit()
    params = {s for s in out.free_symbols if s.name not in BASE and jet_kind(s.name) is None}
    pv = {}
    for s in sorted(params, key=lambda s: s.name):
        v = 0
        while v == 0:
            v = rng.randint(-3, 3)
        pv[s] = sp.Integer(v)
    return out.xreplace(pv)


def _point(rng: random.Random, e: sp.Expr) -> dict:
    pt = {}
    for s in e.free_symbols:
        if s == W:
            pt[s] = sp.log(abs(_random_rational(rng, 1, 4)))
        else:
            # a fresh rational for t, x and every other jet coordinate
            pt[s] = _random_rational(rng)
    return pt


def evaluate(e: sp.Expr, rng: random.Random):
    """One exact evaluation at a random point; ``None`` when the point hits a pole."""
    for _ in range(20):
        val = e.xreplace(_point(rng, e))
        if val.has(sp.zoo, sp.nan, sp.oo, -sp.oo):
            continue
        if not val.is_Rational:
            raise AssertionError(f"evaluation did not produce a rational: {val}")
        return val
    return None


def vanishes(exprs, points: int = 20, seed: int = 0, draws: int = 4) -> bool:
    """True iff every expression evaluates to exactly 0 at ``points`` random points.

    The points are spread over ``draws`` independent choices of the concrete
    functions and parameters.
    """
    if not isinstance(exprs, (list, tuple)):
        exprs = [exprs]
    rng = random.Random(seed)
    per_draw = max(1, points // draws)
    for _ in range(draws):
        concretes = [concrete(e, rng) for e in exprs]
        for _ in range(per_draw):
            for c in concretes:
                v = evaluate(c, rng)
                if v is None:
                    raise AssertionError("could not find a regular evaluation point")
                if v != 0:
                    return False
    return True


def numeric_zero(e: Expr, points: int = 20, seed: int = 0) -> bool:
    """Evaluate a package expression directly (no recomputation) at random points."""
    return vanishes(to_sympy(e), points, seed)
