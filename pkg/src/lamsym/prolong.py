"""Standard, lambda-, telescopic and covering prolongations, and the bracket defect."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from lamsym.errors import DegenerateError, SymbolError
from lamsym.expr import ONE, ZERO, Expr, SymbolTable, Symbol, is_zero, simplify, w_var, x_var
from lamsym.jet import JetField, exact_order, total_derivative, total_derivative_raw

if TYPE_CHECKING:
    from lamsym.transforms import NonlocalSymmetry


@dataclass(frozen=True)
class LambdaPair:
    """A point field ``rho d/dt + phi0 d/dx`` together with a function ``lam``.

    ``lam`` may depend on x2 (a generalized lambda); ``generalized`` records it.
    """

    rho: Expr
    phi0: Expr
    lam: Expr
    name: str = ""

    def __post_init__(self):
        for label, e in (("rho", self.rho), ("phi0", self.phi0)):
            xo, wo = exact_order(e)
            if xo > 0 or wo >= 0:
                raise SymbolError(f"{label} must depend on t and x only")
        if is_zero(self.rho) and is_zero(self.phi0):
            raise DegenerateError("rho and phi0 are both identically zero")
        if exact_order(self.lam)[1] >= 0:
            raise SymbolError("lambda must not depend on w")

    @property
    def generalized(self) -> bool:
        return exact_order(self.lam)[0] >= 2

    @classmethod
    def d_x(cls, lam: Expr, name: str = "") -> LambdaPair:
        """The pair ``(d/dx, lam)``."""
        return cls(ZERO, ONE, lam, name)

    def with_lam(self, lam: Expr) -> LambdaPair:
        return LambdaPair(self.rho, self.phi0, lam, self.name)

    def render(self) -> str:
        return f"rho = {self.rho}; phi = {self.phi0}; lambda = {self.lam}"


@dataclass(frozen=True)
class TelescopicField:
    """First infinitesimals ``(alpha, beta, gamma1)`` of a telescopic field, all over (t, x, x1)."""

    alpha: Expr
    beta: Expr
    gamma1: Expr
    name: str = ""

    def __post_init__(self):
        for label, e in (("alpha", self.alpha), ("beta", self.beta), ("gamma1", self.gamma1)):
            xo, wo = exact_order(e)
            if xo > 1 or wo >= 0:
                raise SymbolError(f"{label} must depend on t, x and x1 only")
        if is_zero(self.characteristic()):
            raise DegenerateError("beta - alpha*x1 vanishes identically")

    def characteristic(self) -> Expr:
        """``beta - alpha*x1``."""
        return simplify(self.beta - self.alpha * Symbol("x1"))

    def lambda_function(self, table: SymbolTable | None = None) -> Expr:
        """``(gamma1 + x1 D_t alpha - D_t beta) / (beta - x1 alpha)``."""
        x1 = Symbol("x1")
        num = self.gamma1 + x1 * total_derivative_raw(self.alpha, table) - total_derivative_raw(self.beta, table)
        return simplify(num / self.characteristic())


def std_prolong(xi: Expr, eta0: Expr, k: int, table: SymbolTable | None = None) -> JetField:
    """``eta^i = D_t eta^{i-1} - D_t(xi) x_i`` for ``1 <= i <= k``."""
    dxi = total_derivative_raw(xi, table)
    eta = [simplify(eta0)]
    for i in range(1, k + 1):
        eta.append(simplify(total_derivative_raw(eta[-1], table) - dxi * Symbol(x_var(i))))
    return JetField(simplify(xi), tuple(eta), (), "standard")


def lambda_prolong(pair: LambdaPair, k: int, table: SymbolTable | None = None) -> JetField:
    """``phi^i = D_t phi^{i-1} - D_t(rho) x_i + lam (phi^{i-1} - rho x_i)``."""
    rho, lam = pair.rho, pair.lam
    drho = total_derivative_raw(rho, table)
    eta = [simplify(pair.phi0)]
    for i in range(1, k + 1):
        xi_ = Symbol(x_var(i))
        prev = eta[-1]
        eta.append(simplify(total_derivative_raw(prev, table) - drho * xi_ + lam * (prev - rho * xi_)))
    return JetField(simplify(rho), tuple(eta), (), "lambda")


def telescopic_prolong(tau: TelescopicField, k: int, table: SymbolTable | None = None) -> JetField:
    """Prolong a telescopic field: ``gamma^i = D_t gamma^{i-1} - D_t(alpha) x_i + L (gamma^{i-1} - alpha x_i)``.

    ``L`` is :meth:`TelescopicField.lambda_function`; the recurrence reproduces
    ``gamma1`` at ``i = 1``.
    """
    big_lambda = tau.lambda_function(table)
    dalpha = total_derivative_raw(tau.alpha, table)
    eta = [simplify(tau.beta)]
    if k >= 1:
        eta.append(simplify(tau.gamma1))
    for i in range(2, k + 1):
        xi_ = Symbol(x_var(i))
        prev = eta[-1]
        eta.append(simplify(total_derivative_raw(prev, table) - dalpha * xi_
                            + big_lambda * (prev - tau.alpha * xi_)))
    return JetField(simplify(tau.alpha), tuple(eta), (), "telescopic")


def covering_prolong(v: "NonlocalSymmetry", k: int, w_order: int = 1,
                     table: SymbolTable | None = None) -> JetField:
    """Prolong a symmetry of a covering in both the x and the w directions.

    ``eta^i = D_t eta^{i-1} - D_t(xi) x_i`` and ``psi^j = D_t psi^{j-1} - D_t(xi) w_j``,
    where ``D_t`` carries the ``w1 d/dw`` term.
    """
    dxi = total_derivative_raw(v.xi, table)
    eta = [simplify(v.eta0)]
    for i in range(1, k + 1):
        eta.append(simplify(total_derivative_raw(eta[-1], table) - dxi * Symbol(x_var(i))))
    psi = [simplify(v.psi0)]
    for j in range(1, w_order + 1):
        psi.append(simplify(total_derivative_raw(psi[-1], table) - dxi * Symbol(w_var(j))))
    return JetField(simplify(v.xi), tuple(eta), tuple(psi), "covering")


@dataclass(frozen=True)
class BracketReport:
    """Defect of ``[Y, D_t] = lam Y + mu D_t`` per direction t, x, x1, ..., x_{k-1}."""

    lam_used: Expr
    mu: Expr
    defect_coeffs: tuple[Expr, ...]
    directions: tuple[str, ...]

    @property
    def holds(self) -> bool:
        return all(is_zero(d) for d in self.defect_coeffs)

    def named(self) -> tuple[tuple[str, Expr], ...]:
        return tuple(zip(self.directions, self.defect_coeffs))


def bracket_defect(y: JetField, lam: Expr, table: SymbolTable | None = None) -> BracketReport:
    """Coefficients of ``[Y, D_t] - lam Y - mu D_t`` with ``mu = -(D_t + lam)(xi)``.

    The top direction ``d/dx_k`` is omitted since it would need ``eta^{k+1}``;
    the w directions of a covering field are treated the same way.
    """
    mu = simplify(-(total_derivative_raw(y.xi, table) + lam * y.xi))
    # [Y, D_t] has coefficient Y(D_t v) - D_t(Y v) on d/dv.
    defects = [simplify(-total_derivative_raw(y.xi, table) - lam * y.xi - mu)]
    directions = ["t"]
    for i in range(y.order):
        nxt = Symbol(x_var(i + 1))
        d = y.eta[i + 1] - total_derivative_raw(y.eta[i], table) - lam * y.eta[i] - mu * nxt
        defects.append(simplify(d))
        directions.append(x_var(i))
    for j in range(len(y.psi) - 1):
        nxt = Symbol(w_var(j + 1))
        d = y.psi[j + 1] - total_derivative_raw(y.psi[j], table) - lam * y.psi[j] - mu * nxt
        defects.append(simplify(d))
        directions.append(w_var(j))
    return BracketReport(simplify(lam), mu, tuple(defects), tuple(directions))


def total_derivative_field(k: int) -> JetField:
    """``D_t`` truncated at order ``k`` as a jet field: ``(1, x1, x2, ..., x_{k+1})``."""
    return JetField(ONE, tuple(Symbol(x_var(i + 1)) for i in range(k + 1)), (), "raw")


__all__ = [
    "BracketReport", "LambdaPair", "TelescopicField", "bracket_defect", "covering_prolong",
    "lambda_prolong", "std_prolong", "telescopic_prolong", "total_derivative", "total_derivative_field",
]
