"""Hypothesis strategies that produce small expressions as text in the input grammar."""

from __future__ import annotations

from hypothesis import strategies as st

from lamsym.expr import SymbolTable, parse

TABLE = SymbolTable.build("n k", "c(t), f(x)")


@st.composite
def monomials(draw, variables: tuple[str, ...], max_deg: int = 2) -> str:
    coeff = draw(st.integers(-4, 4).filter(lambda c: c != 0))
    parts = [str(coeff)]
    for v in variables:
        d = draw(st.integers(0, max_deg))
        if d:
            parts.append(f"{v}^{d}")
    return "*".join(parts)


@st.composite
def poly_texts(draw, variables: tuple[str, ...] = ("t", "x", "x1"), max_terms: int = 3,
               max_deg: int = 2, nonzero: bool = False) -> str:
    terms = draw(st.lists(monomials(variables, max_deg), min_size=1, max_size=max_terms))
    text = " + ".join(f"({t})" for t in terms)
    if nonzero:
        text = f"({text}) + {draw(st.integers(1, 3))}*{variables[0]}^{max_deg + 1}"
    return text


@st.composite
def rational_texts(draw, variables: tuple[str, ...] = ("t", "x", "x1"), max_deg: int = 2) -> str:
    num = draw(poly_texts(variables, 3, max_deg))
    den = draw(poly_texts(variables, 2, 1, nonzero=True))
    return f"({num})/({den})"


ATOMS = ("t", "x", "x1", "c(t)", "c'(t)", "f(x)", "f'(x)", "x^n", "exp(w)", "k")


@st.composite
def expr_texts(draw, depth: int = 2) -> str:
    """Mixed expressions over jet variables, functions, lattice powers and exp(w)."""
    if depth == 0:
        choice = draw(st.integers(0, 2))
        if choice == 0:
            return str(draw(st.integers(-3, 3)))
        return draw(st.sampled_from(ATOMS))
    a = draw(expr_texts(depth - 1))
    b = draw(expr_texts(depth - 1))
    op = draw(st.sampled_from(["+", "-", "*", "/", "^"]))
    if op == "/":
        return f"({a})/(({b})^2 + x^2 + 7)"
    if op == "^":
        return f"({a})^{draw(st.integers(0, 3))}"
    return f"({a}) {op} ({b})"


def parsed(text: str, table: SymbolTable = TABLE):
    return parse(text, table)
