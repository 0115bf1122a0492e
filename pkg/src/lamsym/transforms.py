"""Conversions between invariants, lambda-symmetries, telescopic fields and nonlocal symmetries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from lamsym.errors import DegenerateError, HypothesisError, SymbolError
from lamsym.expr import (
    ONE,
    ZERO,
    Exp,
    Exponent,
    Expr,
    Symbol,
    SymbolTable,
    diff_raw,
    is_zero,
    render,
    simplify,
    substitute,
)
from lamsym.jet import Covering, OdeProblem, exact_order, restrict, total_derivative_raw
from lamsym.prolong import LambdaPair, TelescopicField

X1 = Symbol("x1")


@dataclass(frozen=True)
class NonlocalSymmetry:
    """``xi d/dt + eta0 d/dx + psi0 d/dw`` with coefficients over (t, x, x1, w)."""

    xi: Expr
    eta0: Expr
    psi0: Expr
    name: str = ""

    def __post_init__(self):
        for label, e in (("xi", self.xi), ("eta0", self.eta0), ("psi0", self.psi0)):
            xo, wo = exact_order(e)
            if xo > 1 or wo > 0:
                raise SymbolError(f"{label} must depend on t, x, x1 and w only")

    def is_genuinely_nonlocal(self) -> bool:
        """Whether xi or eta0 depends on w (otherwise the field projects to a local one)."""
        return not (is_zero(diff_raw(self.xi, "w")) and is_zero(diff_raw(self.eta0, "w")))

    def render(self) -> str:
        return f"xi = {self.xi}; eta0 = {self.eta0}; psi0 = {self.psi0}"


@dataclass(frozen=True)
class ExponentialForm:
    """``exp(C w) (rho d/dt + phi0 d/dx + psi(t) d/dw) + C1 d/dw``.

    ``C`` is an integer or the name of a parameter (it becomes a lattice
    exponent of ``exp(w)``).
    """

    C: Union[int, str]
    C1: Expr
    rho: Expr
    phi0: Expr
    psi: Expr

    def __post_init__(self):
        Exponent.of(self.C)
        for label, e in (("rho", self.rho), ("phi0", self.phi0)):
            xo, wo = exact_order(e)
            if xo > 0 or wo >= 0:
                raise SymbolError(f"{label} must depend on t and x only")
        xo, wo = exact_order(self.psi)
        if xo >= 0 or wo >= 0:
            raise SymbolError("psi must depend on t only")

    @property
    def factor(self) -> Expr:
        return Exp("w", Exponent.of(self.C))

    def to_nonlocal(self) -> NonlocalSymmetry:
        f = self.factor
        return NonlocalSymmetry(simplify(f * self.rho), simplify(f * self.phi0),
                                simplify(f * self.psi + self.C1))

    def c_expr(self) -> Expr:
        return Exponent.of(self.C).to_expr()


@dataclass(frozen=True)
class InvariantPair:
    """Invariants ``z(t, x)`` and ``zeta(t, x, x1)`` with ``zeta_x1`` not identically zero."""

    z: Expr
    zeta: Expr
    name: str = ""

    def __post_init__(self):
        xo, wo = exact_order(self.z)
        if xo > 0 or wo >= 0:
            raise SymbolError("z must depend on t and x only")
        xo, wo = exact_order(self.zeta)
        if xo > 1 or wo >= 0:
            raise SymbolError("zeta must depend on t, x and x1 only")
        if is_zero(diff_raw(self.zeta, "x1")):
            raise DegenerateError("zeta must depend on x1")
        if is_zero(diff_raw(self.z, "t")) and is_zero(diff_raw(self.z, "x")):
            raise DegenerateError("z must not be constant")


def invariants_to_lambda(inv: InvariantPair, table: SymbolTable | None = None) -> LambdaPair:
    """The pair whose first lambda-prolongation has ``z`` and ``zeta`` as invariants.

    ``X = -z_x d/dt + z_t d/dx`` and
    ``lam = (z_x zeta_t - z_t zeta_x)/(D_t(z) zeta_x1) - (D_t(z_t) + D_t(z_x) x1)/D_t(z)``.
    """
    z, zeta = inv.z, inv.zeta
    zt, zx = diff_raw(z, "t"), diff_raw(z, "x")
    dz = simplify(total_derivative_raw(z, table))
    if is_zero(dz):
        raise DegenerateError("D_t(z) vanishes identically")
    zeta_t, zeta_x, zeta_x1 = (diff_raw(zeta, v) for v in ("t", "x", "x1"))
    lam = ((zx * zeta_t - zt * zeta_x) / (dz * zeta_x1)
           - (total_derivative_raw(zt, table) + total_derivative_raw(zx, table) * X1) / dz)
    return LambdaPair(simplify(-zx), simplify(zt), simplify(lam), inv.name)


def _require_w_free(e: Expr, what: str) -> None:
    d = simplify(diff_raw(e, "w"))
    if not is_zero(d):
        raise HypothesisError(f"{what} depends on w", d)


def nonlocal_to_lambda(covering: Covering, v: NonlocalSymmetry) -> LambdaPair:
    """The lambda-symmetry associated to a nonlocal symmetry of ``covering``.

    With ``xi != 0``: ``(d/dt + (eta0/xi) d/dx, (xi_t + xi_x x1 + xi_x1 F + xi_w H)/xi)``;
    with ``xi = 0``: ``(d/dx, (eta0_t + eta0_x x1 + eta0_x1 F + eta0_w H)/eta0)``.
    Both are the quotients ``D~_t(g)/g`` of the covering total derivative,
    which must come out free of w; ``eta0/xi`` must also be free of x1.
    Violated hypotheses raise :class:`HypothesisError` with the residual.
    """
    if not v.is_genuinely_nonlocal():
        raise HypothesisError("xi and eta0 do not depend on w: the field projects to a local symmetry")
    F, H = covering.rhs, covering.h

    def log_derivative(g: Expr) -> Expr:
        dg = (diff_raw(g, "t") + diff_raw(g, "x") * X1 + diff_raw(g, "x1") * F
              + diff_raw(g, "w") * H)
        return simplify(dg / g)

    if not is_zero(v.xi):
        ratio = simplify(v.eta0 / v.xi)
        _require_w_free(ratio, "eta0/xi")
        d = simplify(diff_raw(ratio, "x1"))
        if not is_zero(d):
            raise HypothesisError("eta0/xi depends on x1", d)
        lam = log_derivative(v.xi)
        _require_w_free(lam, "lambda")
        return LambdaPair(ONE, ratio, lam, v.name)
    if is_zero(v.eta0):
        raise DegenerateError("xi and eta0 both vanish identically")
    lam = log_derivative(v.eta0)
    _require_w_free(lam, "lambda")
    return LambdaPair(ZERO, ONE, lam, v.name)


def telescopic_to_lambda(tau: TelescopicField, problem: OdeProblem | None = None) -> LambdaPair:
    """``(d/dx, (gamma1 - alpha x2)/(beta - alpha x1))``, with ``x2 := F`` given a problem."""
    lam = simplify((tau.gamma1 - tau.alpha * Symbol("x2")) / tau.characteristic())
    if problem is not None:
        if problem.order != 2:
            raise SymbolError("x2 can only be eliminated on a second-order problem")
        lam = restrict(lam, problem)
    return LambdaPair(ZERO, ONE, lam, tau.name)


def rescale_pair(pair: LambdaPair, f: Expr, table: SymbolTable | None = None) -> LambdaPair:
    """``(f X, lam - D_t(f)/f)`` for a nonzero ``f(t, x)``."""
    xo, wo = exact_order(f)
    if xo > 0 or wo >= 0:
        raise SymbolError("the rescaling factor must depend on t and x only")
    if is_zero(f):
        raise DegenerateError("the rescaling factor vanishes identically")
    lam = simplify(pair.lam - total_derivative_raw(f, table) / f)
    return LambdaPair(simplify(f * pair.rho), simplify(f * pair.phi0), lam, pair.name)


def exponential_pair(rho: Expr, phi0: Expr, C: Union[int, str, Expr], H: Expr) -> LambdaPair:
    """``(rho d/dt + phi0 d/dx, C H)`` for the exponential field with ``w_1 = H(t, x)``.

    Raises :class:`DegenerateError` when ``H_x`` vanishes: the field then
    projects on a Lie point symmetry.
    """
    xo, wo = exact_order(H)
    if xo > 0 or wo >= 0:
        raise SymbolError("H must depend on t and x only")
    if is_zero(diff_raw(H, "x")):
        raise DegenerateError("H_x vanishes identically: the field projects on a Lie point symmetry")
    c = C if isinstance(C, Expr) else Exponent.of(C).to_expr()
    return LambdaPair(rho, phi0, simplify(c * H))


@dataclass(frozen=True)
class LambdaCovering:
    """The covering ``w1 = lam`` of a pair, with the symmetry ``e^w (rho, phi0, psi)`` left open.

    The unknown ``psi(t, x, x1)`` must satisfy
    ``psi_t + x1 psi_x + F psi_x1 + lam psi = rhs``.
    """

    problem: OdeProblem
    pair: LambdaPair
    covering: Covering
    rhs: Expr

    def residual(self, psi: Expr) -> Expr:
        from lamsym.checks import psi_operator

        return restrict(psi_operator(self.problem, self.covering.h, psi) - self.rhs, self.problem)

    def symmetry(self, psi: Expr) -> NonlocalSymmetry:
        e = Exp("w")
        return NonlocalSymmetry(simplify(e * self.pair.rho), simplify(e * self.pair.phi0),
                                simplify(e * psi), self.pair.name)

    def obligation(self) -> str:
        lam, F = render(self.covering.h), render(self.problem.rhs)
        return (f"psi_t + x1*psi_x + ({F})*psi_x1 + ({lam})*psi = {render(self.rhs)}")

    def template(self) -> str:
        return (f"exp(w)*(({render(self.pair.rho)})*d/dt + ({render(self.pair.phi0)})*d/dx"
                " + psi*d/dw)")


def lambda_to_covering(problem: OdeProblem, pair: LambdaPair) -> LambdaCovering:
    """The lambda-covering ``w1 = lam`` and the psi obligation of its nonlocal symmetry."""
    from lamsym.checks import psi_rhs

    if problem.order != 2:
        raise SymbolError("lambda-coverings are built over second-order problems")
    if exact_order(pair.lam)[0] >= 2:
        raise SymbolError("lambda must depend on t, x and x1 only")
    covering = Covering(problem, pair.lam)
    return LambdaCovering(problem, pair, covering, psi_rhs(problem, pair))


def substitute_pair(pair: LambdaPair, bindings) -> LambdaPair:
    """Apply a substitution (e.g. a parameter instantiation) to every component."""
    return LambdaPair(substitute(pair.rho, bindings), substitute(pair.phi0, bindings),
                      substitute(pair.lam, bindings), pair.name)
