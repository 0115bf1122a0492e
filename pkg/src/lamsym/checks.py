"""Invariance checks: Lie point, lambda-symmetry, telescopic, covering, psi and determining PDE.

Every check returns a :class:`CheckReport` carrying the residuals that were
zero-tested, so a failure shows its obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass

from lamsym.errors import LamsymError, SymbolError
from lamsym.expr import ONE, ZERO, Expr, Symbol, diff_raw, is_zero, simplify, x_var
from lamsym.jet import Covering, JetField, OdeProblem, apply_A, exact_order, restrict, total_derivative_raw
from lamsym.prolong import LambdaPair, TelescopicField, covering_prolong, lambda_prolong, std_prolong, telescopic_prolong

HOLDS, FAILS = "holds", "fails"


class RouteDisagreement(LamsymError):
    """Two independent derivations of the same verdict disagreed (an internal inconsistency)."""


@dataclass(frozen=True)
class CheckReport:
    verdict: str
    residuals: tuple[tuple[str, Expr], ...]
    route: str = "tangency"
    cleared: tuple[tuple[str, Expr], ...] = ()

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def __bool__(self) -> bool:
        return self.holds

    def residual(self, name: str | None = None) -> Expr:
        if name is None:
            return self.residuals[0][1]
        return dict(self.residuals)[name]

    def nonzero(self) -> tuple[tuple[str, Expr], ...]:
        return tuple((n, r) for n, r in self.residuals if not is_zero(r))


def report(residuals, route: str = "tangency", cleared=()) -> CheckReport:
    residuals = tuple((name, simplify(r)) for name, r in residuals)
    ok = all(is_zero(r) for _, r in residuals)
    return CheckReport(HOLDS if ok else FAILS, residuals, route, tuple(cleared))


def _require_point(e: Expr, label: str) -> None:
    xo, wo = exact_order(e)
    if xo > 0 or wo >= 0:
        raise SymbolError(f"{label} must depend on t and x only")


def _apply_to_rhs(field: JetField, problem: OdeProblem) -> Expr:
    """``field^{(n-1)}(F)``: the prolonged field acting on the right-hand side."""
    return field.apply_raw(problem.rhs)


def check_lie_point(problem: OdeProblem, xi: Expr, eta0: Expr) -> CheckReport:
    """Tangency of the prolonged point field ``xi d/dt + eta0 d/dx`` to ``x_n = F``."""
    _require_point(xi, "xi")
    _require_point(eta0, "eta0")
    n = problem.order
    y = std_prolong(xi, eta0, n, problem.table)
    residual = restrict(y.eta[n] - _apply_to_rhs(y, problem), problem)
    return report([("tangency", residual)])


def _bracket_residuals(problem: OdeProblem, pair: LambdaPair, lam: Expr) -> list[tuple[str, Expr]]:
    """Defects of ``[Y, A] = lam Y + mu A`` with ``Y`` the (n-1)-th lambda-prolongation.

    ``A`` is restricted ``D_t``, i.e. ``d/dt + x1 d/dx + ... + F d/dx_{n-1}``.
    Each coefficient is ``Y(A v) - A(Y v) - lam Y(v) - mu A(v)``.
    """
    n = problem.order
    y = lambda_prolong(pair.with_lam(lam), n - 1, problem.table)
    mu = -(apply_A(pair.rho, problem) + lam * pair.rho)
    a_of = [ONE] + [Symbol(x_var(i + 1)) for i in range(n - 1)] + [problem.rhs]
    y_of = [y.xi] + list(y.eta)
    names = ["t"] + [x_var(i) for i in range(n)]
    out = []
    for name, av, yv in zip(names, a_of, y_of):
        d = y.apply_raw(av) - apply_A(yv, problem) - lam * yv - mu * av
        out.append((f"bracket[{name}]", restrict(d, problem)))
    return out


def check_lambda_symmetry(problem: OdeProblem, pair: LambdaPair, route: str = "tangency",
                          cross_check: bool = True) -> CheckReport:
    """Whether ``(X, lam)`` is a lambda-symmetry of ``problem``.

    ``route`` selects the reported derivation: ``"tangency"`` tests
    ``restrict(phi^n - X^{[lam,(n)]}(F))``; ``"bracket"`` tests the bracket
    relation with the field of the equation.  With ``cross_check`` both are
    computed and must agree.  A lambda depending on x_n or higher is restricted
    to the equation first.
    """
    if route not in ("tangency", "bracket"):
        raise ValueError(f"unknown route {route!r}")
    lam = restrict(pair.lam, problem)
    results = {}
    if route == "tangency" or cross_check:
        n = problem.order
        y = lambda_prolong(pair.with_lam(lam), n, problem.table)
        residual = restrict(y.eta[n] - _apply_to_rhs(y, problem), problem)
        results["tangency"] = report([("tangency", residual)], "tangency")
    if route == "bracket" or cross_check:
        results["bracket"] = report(_bracket_residuals(problem, pair, lam), "bracket")
    if cross_check and results["tangency"].verdict != results["bracket"].verdict:
        raise RouteDisagreement("tangency and bracket routes disagree")
    return results[route]


def check_determining(problem: OdeProblem, lam: Expr) -> CheckReport:
    """``lam_t + x1 lam_x + F lam_x1 + lam^2 - F_x - lam F_x1`` for a second-order problem."""
    if problem.order != 2:
        raise SymbolError("the determining equation is stated for second-order problems")
    if exact_order(lam)[0] >= 2 or exact_order(lam)[1] >= 0:
        raise SymbolError("lambda must depend on t, x and x1 only")
    F = problem.rhs
    x1 = Symbol("x1")
    residual = (diff_raw(lam, "t") + x1 * diff_raw(lam, "x") + F * diff_raw(lam, "x1")
                + lam * lam - diff_raw(F, "x") - lam * diff_raw(F, "x1"))
    return report([("determining", residual)])


def check_telescopic(problem: OdeProblem, tau: TelescopicField, cross_check: bool = True) -> CheckReport:
    """Tangency of the telescopic prolongation to ``x_n = F``.

    For second-order problems the verdict is cross-checked against the
    lambda-symmetry ``(d/dx, (gamma1 - alpha F)/(beta - alpha x1))``.
    """
    n = problem.order
    y = telescopic_prolong(tau, n, problem.table)
    residual = restrict(y.eta[n] - _apply_to_rhs(y, problem), problem)
    result = report([("tangency", residual)])
    if cross_check and n == 2:
        lam = simplify((tau.gamma1 - tau.alpha * problem.rhs) / tau.characteristic())
        other = check_lambda_symmetry(problem, LambdaPair.d_x(lam), cross_check=False)
        if other.verdict != result.verdict:
            raise RouteDisagreement("telescopic and lambda-symmetry verdicts disagree")
    return result


def check_covering_symmetry(covering: Covering, v) -> CheckReport:
    """Whether ``v`` is a symmetry of the covering ``x2 = F, w1 = H``.

    Residuals: ``eta^2 - v^{(1)}(F)`` and ``psi^1 - v^{(1)}(H)``, both restricted
    to the covering.
    """
    table = covering.table
    for label, e in (("xi", v.xi), ("eta0", v.eta0), ("psi0", v.psi0)):
        xo, wo = exact_order(e)
        if xo > 1 or wo > 0:
            raise SymbolError(f"{label} must depend on t, x, x1 and w only")
    y = covering_prolong(v, 2, 1, table)
    F, H = covering.rhs, covering.h
    point = JetField(y.xi, y.eta[:2], y.psi[:1], "covering")
    r1 = restrict(y.eta[2] - point.apply_raw(F), covering)
    r2 = restrict(y.psi[1] - point.apply_raw(H), covering)
    return report([("x-equation", r1), ("w-equation", r2)])


def psi_rhs(problem: OdeProblem, pair: LambdaPair) -> Expr:
    """Right-hand side ``D_t(rho) lam + rho lam^2 + X^{[lam,(1)]}(lam)`` of the psi equation."""
    lam = restrict(pair.lam, problem)
    y = lambda_prolong(pair.with_lam(lam), 1, problem.table)
    rhs = total_derivative_raw(pair.rho, problem.table) * lam + pair.rho * lam * lam + y.apply_raw(lam)
    return simplify(rhs)


def psi_operator(problem: OdeProblem, lam: Expr, psi: Expr) -> Expr:
    """Left-hand side ``psi_t + x1 psi_x + F psi_x1 + lam psi``."""
    x1 = Symbol("x1")
    return simplify(diff_raw(psi, "t") + x1 * diff_raw(psi, "x")
                    + problem.rhs * diff_raw(psi, "x1") + lam * psi)


def verify_psi(problem: OdeProblem, pair: LambdaPair, psi: Expr, rescale: Expr | None = None) -> CheckReport:
    """Whether ``psi`` solves the linear psi equation attached to ``pair``.

    With ``rescale = f`` the equation of the rescaled pair ``(f X, lam - D_t f/f)``
    is used instead.
    """
    if problem.order != 2:
        raise SymbolError("the psi equation is stated for second-order problems")
    xo, wo = exact_order(psi)
    if xo > 1 or wo >= 0:
        raise SymbolError("psi must depend on t, x and x1 only")
    if rescale is not None:
        from lamsym.transforms import rescale_pair

        pair = rescale_pair(pair, rescale, problem.table)
    lam = restrict(pair.lam, problem)
    residual = restrict(psi_operator(problem, lam, psi) - psi_rhs(problem, pair), problem)
    return report([("psi-equation", residual)])
