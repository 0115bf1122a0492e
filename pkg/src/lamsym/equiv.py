"""A-equivalence of lambda-symmetries, canonical pairs, invariant chains and reductions."""

from __future__ import annotations

from dataclasses import dataclass

from lamsym.checks import CheckReport, report
from lamsym.errors import DegenerateError, HypothesisError, SymbolError
from lamsym.expr import (
    ZERO,
    Exp,
    Expr,
    Power,
    Symbol,
    SymbolTable,
    coefficients,
    diff_raw,
    function_atoms,
    is_zero,
    normalize,
    simplify,
    substitute,
)
from lamsym.expr.calculus import rename_bare
from lamsym.jet import OdeProblem, apply_A, restrict
from lamsym.prolong import LambdaPair, lambda_prolong
from lamsym.transforms import InvariantPair

X1 = Symbol("x1")


def characteristic(pair: LambdaPair) -> Expr:
    """``Q = phi0 - rho x1``."""
    return simplify(pair.phi0 - pair.rho * X1)


def _class_function(problem: OdeProblem, pair: LambdaPair) -> Expr:
    """``lam + A(Q)/Q``, the A-equivalence invariant of a pair."""
    q = characteristic(pair)
    if is_zero(q):
        raise DegenerateError("the characteristic vanishes identically")
    return simplify(restrict(pair.lam, problem) + apply_A(q, problem) / q)


def cleared_report(difference: Expr, name: str) -> CheckReport:
    """Zero-test a difference after clearing its denominator; the denominator is reported."""
    nf = normalize(difference)
    return report([(name, nf.numerator_expr())], cleared=[("denominator", nf.denominator_expr())])


def a_equivalent(problem: OdeProblem, p1: LambdaPair, p2: LambdaPair) -> CheckReport:
    """``(lam1 + A(Q1)/Q1) - (lam2 + A(Q2)/Q2)``, denominators cleared."""
    if problem.order != 2:
        raise SymbolError("A-equivalence is stated for second-order problems")
    diff = _class_function(problem, p1) - _class_function(problem, p2)
    return cleared_report(diff, "equivalence")


def canonical_pair(problem: OdeProblem, pair: LambdaPair) -> LambdaPair:
    """The representative ``(d/dx, lam + A(Q)/Q)`` of the A-equivalence class."""
    return LambdaPair.d_x(_class_function(problem, pair), pair.name)


def check_invariants(pair: LambdaPair, inv: InvariantPair, problem: OdeProblem | None = None,
                     table: SymbolTable | None = None) -> CheckReport:
    """Residuals ``X(z)`` and ``X^{[lam,(1)]}(zeta)``.

    A lambda that depends on x2 needs ``problem`` for the restriction.
    """
    lam = pair.lam
    if problem is not None:
        lam = restrict(lam, problem)
        table = problem.table
    elif pair.generalized:
        raise SymbolError("a lambda depending on x2 needs the problem to be restricted")
    y = lambda_prolong(pair.with_lam(lam), 1, table)
    r1, r2 = y.apply_raw(inv.z), y.apply_raw(inv.zeta)
    if problem is not None:
        r1, r2 = restrict(r1, problem), restrict(r2, problem)
    return report([("X(z)", r1), ("X1(zeta)", r2)])


def invariant_chain(problem: OdeProblem, inv: InvariantPair, upto: int) -> list[Expr]:
    """``[zeta_1, ..., zeta_upto]`` with ``zeta_{i+1} = A(zeta_i)/A(z)``."""
    dz = apply_A(inv.z, problem)
    if is_zero(dz):
        raise DegenerateError("D_t(z) vanishes identically on the equation")
    chain, current = [], inv.zeta
    for _ in range(upto):
        current = simplify(apply_A(current, problem) / dz)
        chain.append(current)
    return chain


def zeta_symbol(i: int) -> str:
    return "zeta" if i == 0 else f"zeta{i}"


@dataclass(frozen=True)
class ReducedEquation:
    """A reduced equation in the invariants.

    ``kind == "g"``: ``zeta_z = body(z, zeta)`` (second-order problems).
    ``kind == "delta"``: ``body(z, zeta, zeta1, ..., zeta_{n-1}) = 0``.
    Symbols ``z``, ``zeta``, ``zeta1``... are the reduced variables; functions of
    t may appear only when ``z = t``.
    """

    kind: str
    body: Expr
    arity: int = 1
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("g", "delta"):
            raise ValueError("kind must be 'g' or 'delta'")
        if self.kind == "g" and self.arity != 1:
            raise ValueError("a 'g' reduction is first order")

    def allowed_symbols(self) -> set[str]:
        top = 0 if self.kind == "g" else self.arity
        return {"z"} | {zeta_symbol(i) for i in range(top + 1)}

    def validate(self, table: SymbolTable, inv: InvariantPair) -> None:
        allowed = self.allowed_symbols() | set(table.params)
        z_is_t = inv.z == Symbol("t")
        for f in function_atoms(self.body):
            if not (z_is_t and f.arg == "t"):
                raise SymbolError(f"the reduced equation may not use {f.name}({f.arg}) unless z = t")
        names = set()
        for node in self.body.walk():
            if isinstance(node, Symbol):
                names.add(node.name)
            elif isinstance(node, Exp):
                names.add(f"exp({node.var})")
            elif isinstance(node, Power):
                names.update(node.exponent.params)
        bad = sorted(names - allowed)
        if bad:
            raise SymbolError(f"the reduced equation uses undeclared symbols: {', '.join(bad)}")


def reduced_table(table: SymbolTable, arity: int = 1) -> SymbolTable:
    """The problem's table extended with the reduced-space symbols."""
    return table.extended(params=["z"] + [zeta_symbol(i) for i in range(arity + 1)])


def verify_reduction(problem: OdeProblem, inv: InvariantPair, red: ReducedEquation) -> CheckReport:
    """Whether ``problem`` reduces to ``red`` in the invariants ``inv``.

    For ``kind == "g"`` the residual is ``A(zeta) - G(z, zeta) A(z)``; for
    ``"delta"`` the chain ``zeta_1, ..., zeta_{n-1}`` is substituted.  The
    denominator is cleared and reported.
    """
    red.validate(problem.table, inv)
    n = problem.order
    if red.kind == "g":
        if n != 2:
            raise SymbolError("a 'g' reduction needs a second-order problem")
        g = substitute(red.body, {"z": inv.z, "zeta": inv.zeta})
        residual = apply_A(inv.zeta, problem) - g * apply_A(inv.z, problem)
        return cleared_report(residual, "reduction")
    if red.arity != n - 1:
        raise SymbolError(f"the reduced equation of an order-{n} problem has order {n - 1}")
    chain = invariant_chain(problem, inv, n - 1)
    bindings = {"z": inv.z, "zeta": inv.zeta}
    bindings.update({zeta_symbol(i + 1): c for i, c in enumerate(chain)})
    return cleared_report(restrict(substitute(red.body, bindings), problem), "reduction")


def rewrite_reduction(problem: OdeProblem, inv: InvariantPair) -> ReducedEquation:
    """Best-effort rewrite ``zeta_z = G(z, zeta)`` when ``z = t`` and zeta is linear in x1.

    Raises :class:`SymbolError` when the shape is not covered and
    :class:`HypothesisError` when the result still involves x; the caller
    can then supply a candidate for :func:`verify_reduction`.
    """
    if problem.order != 2:
        raise SymbolError("rewriting is only offered for second-order problems")
    if inv.z != Symbol("t"):
        raise SymbolError("rewriting needs z = t")
    try:
        coeffs = coefficients(inv.zeta, "x1")
    except Exception as err:
        raise SymbolError(f"zeta is not polynomial in x1: {err}") from err
    if set(coeffs) - {0, 1} or 1 not in coeffs:
        raise SymbolError("zeta is not linear in x1")
    a, b = coeffs[1], coeffs.get(0, ZERO)
    zeta = Symbol("zeta")
    x1_value = simplify((zeta - b) / a)
    g = substitute(invariant_chain(problem, inv, 1)[0], {"x1": x1_value})
    dg = simplify(diff_raw(g, "x"))
    if not is_zero(dg):
        raise HypothesisError("the derived equation still depends on x", dg)
    return ReducedEquation("g", rename_bare(g, "t", "z"))
