from __future__ import annotations

import threading

import pytest
from hypothesis import given, settings

from lamsym.errors import JetOrderError, SymbolError
from lamsym.expr import equal, is_zero
from lamsym.jet import (
    Covering,
    JetField,
    OdeProblem,
    apply_A,
    depends_on_w,
    exact_order,
    jet_order,
    restrict,
    total_derivative,
)
from strategies import poly_texts

PINNEY = OdeProblem.parse(2, "d(t)*x - b'(t)/(2*x) - b(t)^2/(4*x^3)", "", "a(t), b(t), d(t)")
RICCATI = OdeProblem.parse(2, "-(x*f'(x) + 2*f(x) + c1)*x1 - (f(x)^2 + c1*f(x) + c2)*x", "c1 c2", "f(x)")


def test_total_derivative_examples():
    e = RICCATI.expr
    assert equal(total_derivative(e("x")), e("x1"))
    assert equal(total_derivative(e("t*x1")), e("x1 + t*x2"))
    assert equal(total_derivative(e("x1/x - x*f'(x)"), RICCATI.table),
                 e("x2/x - x1^2/x^2 - x1*f'(x) - x*f''(x)*x1"))


def test_total_derivative_of_functions_and_w():
    e = RICCATI.expr
    assert equal(total_derivative(e("f(x)")), e("f'(x)*x1"))
    assert equal(total_derivative(e("exp(w)*w1")), e("exp(w)*w1^2 + exp(w)*w2"))


def test_total_derivative_refuses_to_exceed_the_cap():
    problem = OdeProblem.parse(2, "x", max_order=3)
    with pytest.raises(JetOrderError):
        total_derivative(problem.expr("x3"), problem.table)


def test_orders():
    e = PINNEY.expr
    assert jet_order(e("x1*w2")) == (1, 2)
    assert exact_order(e("x2 - x2 + x")) == (0, -1)
    assert depends_on_w(e("exp(w)"))
    assert not depends_on_w(e("exp(w)*exp(-w)"))


def test_problem_validation():
    with pytest.raises(SymbolError):
        OdeProblem.parse(2, "x2")
    with pytest.raises(SymbolError):
        OdeProblem.parse(2, "exp(w)")
    with pytest.raises(SymbolError):
        OdeProblem.parse(0, "x")
    with pytest.raises(SymbolError):
        OdeProblem.parse(8, "x")


def test_covering_validation():
    with pytest.raises(SymbolError):
        Covering(PINNEY, PINNEY.expr("x2"))
    with pytest.raises(SymbolError):
        Covering(PINNEY, PINNEY.expr("w"))
    with pytest.raises(SymbolError):
        Covering(OdeProblem.parse(3, "x"), PINNEY.expr("x"))


def test_restrict_examples():
    e = PINNEY.expr
    assert equal(restrict(e("x2"), PINNEY), e("d(t)*x - b'(t)/(2*x) - b(t)^2/(4*x^3)"))
    assert restrict(e("x1"), PINNEY) == e("x1")
    h = e("x1/x + b(t)/x^2")
    cov = Covering(PINNEY, h)
    assert equal(restrict(e("w1*x2"), cov), h * PINNEY.rhs)
    assert equal(restrict(e("w1*x2"), PINNEY, cov), h * PINNEY.rhs)


def test_restrict_eliminates_higher_orders():
    problem = OdeProblem.parse(2, "-x")
    e = problem.expr
    assert equal(restrict(e("x3"), problem), e("-x1"))
    assert equal(restrict(e("x4 + x2"), problem), e("0"))
    cov = Covering(problem, e("x1"))
    assert equal(restrict(e("w2"), cov), e("-x"))


def test_apply_A_examples():
    e = PINNEY.expr
    assert equal(apply_A(e("x1"), PINNEY), PINNEY.rhs)
    assert equal(apply_A(e("a(t)*x"), PINNEY), e("a'(t)*x + a(t)*x1"))
    assert equal(apply_A(e("t"), PINNEY), e("1"))


def test_eliminators_are_shared_safely_between_threads():
    problem = OdeProblem.parse(2, "x1^2/x + t*x")
    results = []

    def work():
        results.append(problem.eliminators(6))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    first = results[0]
    assert all(r.keys() == first.keys() for r in results)
    assert all(all(r[k] == first[k] for k in first) for r in results)


def test_jet_field_coefficients():
    e = PINNEY.expr
    field = JetField(e("1"), (e("x"), e("x1")), (e("exp(w)"),))
    assert field.coefficient("t") == e("1")
    assert field.coefficient("x1") == e("x1")
    assert field.coefficient("w") == e("exp(w)")
    assert field.coefficient("k") == e("0")
    with pytest.raises(JetOrderError):
        field.coefficient("x2")
    assert equal(field.apply(e("t*x*x1")), e("x*x1 + 2*t*x*x1"))


# -- properties ------------------------------------------------------------------


RANDOM_PROBLEM = OdeProblem.parse(2, "x1^2/x + t*x1 - x^3")


@given(poly_texts(("t", "x", "x1", "x2", "x3")))
def test_restrict_is_idempotent(text):
    e = RANDOM_PROBLEM.expr(text)
    once = restrict(e, RANDOM_PROBLEM)
    assert restrict(once, RANDOM_PROBLEM) == once


@settings(max_examples=30)
@given(poly_texts(("t", "x", "x1", "x2"), 2, 2), poly_texts(("x", "x2", "x3"), 2, 1))
def test_restrict_is_a_ring_homomorphism(a, b):
    e1, e2 = RANDOM_PROBLEM.expr(a), RANDOM_PROBLEM.expr(b)
    r = lambda e: restrict(e, RANDOM_PROBLEM)  # noqa: E731
    assert is_zero(r(e1 * e2) - r(e1) * r(e2))
    assert is_zero(r(e1 + e2) - r(e1) - r(e2))


@given(poly_texts(("t", "x", "x1")))
def test_restrict_fixes_low_order_expressions(text):
    e = RANDOM_PROBLEM.expr(text)
    assert is_zero(restrict(e, RANDOM_PROBLEM) - e)


@settings(max_examples=30)
@given(poly_texts(("t", "x")))
def test_apply_A_agrees_with_total_derivative_below_order_n_minus_1(text):
    e = RANDOM_PROBLEM.expr(text)
    assert is_zero(apply_A(e, RANDOM_PROBLEM) - total_derivative(e, RANDOM_PROBLEM.table))
