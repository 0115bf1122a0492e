from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lamsym.errors import DegenerateError, SymbolError
from lamsym.expr import ONE, ZERO, SymbolTable, equal, is_zero, parse, simplify
from lamsym.jet import total_derivative
from lamsym.prolong import (
    LambdaPair,
    TelescopicField,
    bracket_defect,
    covering_prolong,
    lambda_prolong,
    std_prolong,
    telescopic_prolong,
    total_derivative_field,
)
from lamsym.transforms import NonlocalSymmetry, rescale_pair
from strategies import poly_texts

T = SymbolTable.build("n", "c(t), f(x)")


def p(text: str):
    return parse(text, T)


def same_coeffs(a, b) -> bool:
    return len(a.coeffs) == len(b.coeffs) and all(is_zero(u - v) for u, v in zip(a.coeffs, b.coeffs))


# -- construction -------------------------------------------------------------------


def test_pair_validation():
    with pytest.raises(SymbolError):
        LambdaPair(p("x1"), ONE, ZERO)
    with pytest.raises(SymbolError):
        LambdaPair(ZERO, ONE, p("exp(w)"))
    with pytest.raises(DegenerateError):
        LambdaPair(ZERO, p("x - x"), ZERO)
    assert LambdaPair.d_x(p("x2")).generalized
    assert not LambdaPair.d_x(p("x1")).generalized


def test_telescopic_validation():
    with pytest.raises(DegenerateError):
        TelescopicField(ONE, p("x1"), ZERO)
    with pytest.raises(SymbolError):
        TelescopicField(ZERO, ONE, p("x2"))


# -- standard prolongation -------------------------------------------------------------


def test_time_translation():
    y = std_prolong(ONE, ZERO, 2)
    assert all(is_zero(c) for c in y.eta)


def test_scaling():
    y = std_prolong(ZERO, p("x"), 1)
    assert equal(y.eta[1], p("x1"))


def test_combined_scaling():
    y = std_prolong(p("t"), p("x"), 2)
    assert is_zero(y.eta[1])
    assert equal(y.eta[2], p("-x2"))


# -- lambda prolongation ---------------------------------------------------------------


def test_first_coefficient_of_d_x_is_lambda():
    lam = p("x1/x + c(t)*x^n")
    y = lambda_prolong(LambdaPair.d_x(lam), 1, T)
    assert y.eta[1] == simplify(lam)


def test_second_coefficient_of_d_x():
    lam = p("x1/x + c(t)*x^n")
    y = lambda_prolong(LambdaPair.d_x(lam), 2, T)
    assert is_zero(y.eta[2] - total_derivative(lam, T) - lam * lam)


def test_lambda_zero_gives_standard_prolongation():
    rho, phi = p("t*x"), p("x^2 + c(t)")
    assert same_coeffs(lambda_prolong(LambdaPair(rho, phi, ZERO), 3, T), std_prolong(rho, phi, 3, T))


def test_bracket_defect_of_lambda_prolongation_vanishes():
    pair = LambdaPair(p("t"), p("x*c(t)"), p("x1/x + f(x)"))
    report = bracket_defect(lambda_prolong(pair, 3, T), pair.lam, T)
    assert report.holds
    assert report.directions == ("t", "x", "x1", "x2")
    assert equal(report.mu, p("-1 - t*(x1/x + f(x))"))


def test_bracket_defect_of_standard_prolongation_vanishes():
    report = bracket_defect(std_prolong(p("t^2"), p("x*t"), 3, T), ZERO, T)
    assert report.holds


def test_bracket_defect_detects_a_wrong_lambda():
    pair = LambdaPair.d_x(p("x1"))
    report = bracket_defect(lambda_prolong(pair, 2, T), p("x"), T)
    assert not report.holds
    named = dict(report.named())
    assert is_zero(named["t"])
    assert equal(named["x"], p("x1 - x"))


def test_total_derivative_field():
    d = total_derivative_field(2)
    assert d.coeffs == (ONE, p("x1"), p("x2"), p("x3"))


# -- telescopic fields -----------------------------------------------------------------


def test_telescopic_with_alpha_zero_and_beta_one_is_a_lambda_prolongation():
    lam = p("x1/x + t")
    tau = TelescopicField(ZERO, ONE, lam)
    assert same_coeffs(telescopic_prolong(tau, 3, T), lambda_prolong(LambdaPair.d_x(lam), 3, T))


def test_telescopic_example():
    tau = TelescopicField(ZERO, p("x1"), p("x"))
    assert equal(tau.lambda_function(T), p("(x - x2)/x1"))
    y = telescopic_prolong(tau, 2, T)
    second = lambda_prolong(LambdaPair.d_x(p("x/x1")), 2, T).eta[2]
    assert is_zero(y.eta[2] - p("x1") * second)


def test_telescopic_bracket_defect_vanishes():
    tau = TelescopicField(p("x"), p("x1^2 + t"), p("x*x1"))
    y = telescopic_prolong(tau, 3, T)
    assert bracket_defect(y, tau.lambda_function(T), T).holds


# -- covering prolongation -------------------------------------------------------------


def test_d_w_prolongs_to_zero():
    y = covering_prolong(NonlocalSymmetry(ZERO, ZERO, ONE), 2, 1, T)
    assert all(is_zero(c) for c in y.coeffs[1:] if c is not y.psi[0])
    assert is_zero(y.psi[1])


def test_exponential_field_prolongation():
    y = covering_prolong(NonlocalSymmetry(ZERO, p("exp(w)"), ZERO), 1, 1, T)
    assert equal(y.eta[1], p("w1*exp(w)"))


def test_covering_prolongation_recurrence_in_both_directions():
    v = NonlocalSymmetry(p("exp(w)"), p("x*exp(w)"), p("x1*exp(w)"))
    y = covering_prolong(v, 2, 2, T)
    dxi = total_derivative(v.xi, T)
    assert is_zero(y.eta[2] - total_derivative(y.eta[1], T) + dxi * p("x2"))
    assert is_zero(y.psi[2] - total_derivative(y.psi[1], T) + dxi * p("w2"))


# -- properties --------------------------------------------------------------------


TX = ("t", "x")
TXX1 = ("t", "x", "x1")


def decomposition(tau: TelescopicField, k: int):
    """alpha*D_t + (beta - alpha*x1) * lambda_prolong(d/dx, (gamma1 - alpha*x2)/(beta - alpha*x1))."""
    q = tau.characteristic()
    lam = simplify((tau.gamma1 - tau.alpha * p("x2")) / q)
    y = lambda_prolong(LambdaPair.d_x(lam), k, T)
    d = total_derivative_field(k)
    return [simplify(tau.alpha * dc + q * yc) for dc, yc in zip(d.coeffs, y.coeffs)]


@st.composite
def telescopic_fields(draw):
    while True:
        alpha = p(draw(poly_texts(TXX1, 2, 1)))
        beta = p(draw(poly_texts(TXX1, 2, 2)))
        gamma = p(draw(poly_texts(TXX1, 3, 2)))
        if not is_zero(beta - alpha * p("x1")):
            return TelescopicField(alpha, beta, gamma)


@settings(max_examples=10)
@given(telescopic_fields(), st.integers(1, 3))
def test_telescopic_decomposition(tau, k):
    y = telescopic_prolong(tau, k, T)
    assert all(is_zero(a - b) for a, b in zip(y.coeffs, decomposition(tau, k)))
    assert bracket_defect(y, tau.lambda_function(T), T).holds


@settings(max_examples=20)
@given(poly_texts(TX, 2, 2), poly_texts(TX, 2, 2, nonzero=True), st.integers(1, 3))
def test_lambda_zero_matches_standard(rho, phi, k):
    pair = LambdaPair(p(rho), p(phi), ZERO)
    assert same_coeffs(lambda_prolong(pair, k, T), std_prolong(pair.rho, pair.phi0, k, T))


@settings(max_examples=20)
@given(poly_texts(TX, 2, 1), poly_texts(TX, 2, 1, nonzero=True), poly_texts(TXX1, 2, 1),
       poly_texts(TX, 2, 1, nonzero=True), st.integers(1, 3))
def test_rescaling_law_for_prolongations(rho, phi, lam, f, k):
    pair = LambdaPair(p(rho), p(phi), p(lam))
    fx = p(f)
    scaled = lambda_prolong(rescale_pair(pair, fx, T), k, T)
    base = lambda_prolong(pair, k, T)
    assert all(is_zero(a - fx * b) for a, b in zip(scaled.coeffs, base.coeffs))


@settings(max_examples=20)
@given(poly_texts(TX, 2, 1), poly_texts(TX, 2, 1, nonzero=True), poly_texts(TXX1, 2, 1))
def test_lambda_prolongation_is_the_unique_field_with_zero_defect(rho, phi, lam):
    pair = LambdaPair(p(rho), p(phi), p(lam))
    y = lambda_prolong(pair, 3, T)
    assert bracket_defect(y, pair.lam, T).holds
    # perturbing any determined coefficient breaks the bracket relation
    from lamsym.jet import JetField

    for i in (1, 2):
        eta = list(y.eta)
        eta[i] = eta[i] + p("x")
        assert not bracket_defect(JetField(y.xi, eta), pair.lam, T).holds
