"""Exact symbolic expressions: parsing, differentiation, normal form and zero test."""

from lamsym.expr.calculus import diff, diff_raw, instantiate, substitute, substitute_raw
from lamsym.expr.normal import (
    NormalForm,
    coefficients,
    depends_on,
    equal,
    is_zero,
    normalize,
    simplify,
)
from lamsym.expr.parser import parse
from lamsym.expr.render import render
from lamsym.expr.symbols import FunctionDecl, SymbolTable, is_jet_var, jet_kind, w_var, x_var
from lamsym.expr.tree import (
    ONE,
    ZERO,
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
    as_expr,
    exp,
    free_symbols,
    func,
    function_atoms,
    symbols,
)

__all__ = [
    "Const", "Exp", "Exponent", "Expr", "FunctionAtom", "FunctionDecl", "NormalForm", "ONE",
    "Power", "Product", "Quotient", "Sum", "Symbol", "SymbolTable", "ZERO", "as_expr",
    "coefficients", "depends_on", "diff", "diff_raw", "equal", "exp", "free_symbols", "func",
    "function_atoms", "instantiate", "is_jet_var", "is_zero", "jet_kind", "normalize", "parse",
    "render", "simplify", "substitute", "substitute_raw", "symbols", "w_var", "x_var",
]
