"""Pratt parser for the expression grammar.

Grammar summary::

    expr    := expr ('+'|'-'|'*'|'/') expr | '-' expr | '+' expr
             | expr '^' expr          (right-associative, binds tighter than unary minus)
             | NUMBER | IDENT | IDENT "'"* '(' VAR ')' | 'exp' '(' expr ')' | '(' expr ')'

Numbers are digit runs; ``3/4`` is an ordinary division that folds to a
rational constant.  Exponents must reduce to lattice exponents (integers plus
integer combinations of parameters).  Errors carry UTF-8 byte offsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from lamsym.errors import NonLatticeError, NormalizationError, ParseError
from lamsym.expr.normal import SYMBOL, normalize
from lamsym.expr.symbols import BASE_VARS, RESERVED, SymbolTable
from lamsym.expr.tree import Const, Exp, Exponent, Expr, FunctionAtom, Symbol, add, div, mul, neg, power

EXP_VARS = ("t", "x", "w")


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, prime, lparen, rparen, end
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    byte = 0
    while i < n:
        ch = text[i]
        start_byte = byte
        if ch.isspace():
            i += 1
            byte += len(ch.encode())
            continue
        if ch.isascii() and ch.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            tokens.append(Token("num", text[i:j], start_byte))
        elif ch.isascii() and ch.isalpha():
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], start_byte))
        elif ch in "+-*/^":
            j = i + 1
            tokens.append(Token("op", ch, start_byte))
        elif ch == "'":
            j = i + 1
            tokens.append(Token("prime", ch, start_byte))
        elif ch == "(":
            j = i + 1
            tokens.append(Token("lparen", ch, start_byte))
        elif ch == ")":
            j = i + 1
            tokens.append(Token("rparen", ch, start_byte))
        else:
            raise ParseError(f"unexpected character {ch!r}", start_byte, text)
        byte += len(text[i:j].encode())
        i = j
    tokens.append(Token("end", "", byte))
    return tokens


_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_UNARY_BP = 25


def to_exponent(e: Expr, table: SymbolTable) -> Exponent:
    """Convert a parsed exponent expression to a lattice exponent.

    Raises :class:`NonLatticeError` if it is not an integer combination of
    parameters.
    """
    try:
        nf = normalize(e)
    except NormalizationError as err:
        raise NonLatticeError(str(err)) from err
    if len(nf.denominator) != 1 or nf.denominator[0][0]:
        raise NonLatticeError("exponent is not an integer combination of parameters")
    den = nf.denominator[0][1]
    const = 0
    terms: dict[str, int] = {}
    for mono, c in nf.numerator:
        value = c / den
        if value.denominator != 1:
            raise NonLatticeError("exponent has a non-integer coefficient")
        if not mono:
            const = int(value)
            continue
        if len(mono) != 1 or mono[0][1] != 1 or mono[0][0].kind != SYMBOL \
                or not table.is_param(mono[0][0].name):
            raise NonLatticeError("exponent is not an integer combination of parameters")
        terms[mono[0][0].name] = int(value)
    return Exponent._make(const, terms)


class Parser:
    def __init__(self, text: str, table: SymbolTable):
        self.text = text
        self.table = table
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | int) -> ParseError:
        offset = tok if isinstance(tok, int) else tok.offset
        return ParseError(message, offset, self.text)

    def expect(self, kind: str, what: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise self.error(f"expected {what}, found {found}", tok)
        return tok

    def parse(self) -> Expr:
        if self.peek().kind == "end":
            raise self.error("empty expression", self.peek())
        e = self.expression(0)
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {tok.text!r}", tok)
        return e

    def expression(self, rbp: int) -> Expr:
        left = self.prefix(self.next())
        while True:
            tok = self.peek()
            if tok.kind != "op":
                if tok.kind in ("num", "ident", "lparen"):
                    raise self.error(f"unexpected {tok.text!r}; missing operator?", tok)
                return left
            bp = _INFIX[tok.text]
            if bp <= rbp:
                return left
            self.next()
            if tok.text == "^":
                left = self.exponentiate(left, tok)
                continue
            right = self.expression(bp)
            if tok.text == "+":
                left = add(left, right)
            elif tok.text == "-":
                left = add(left, neg(right))
            elif tok.text == "*":
                left = mul(left, right)
            else:
                if isinstance(right, Const) and right.value == 0:
                    raise self.error("division by zero", tok)
                left = div(left, right)

    def exponentiate(self, base: Expr, tok: Token) -> Expr:
        start = self.peek()
        exponent_expr = self.expression(_INFIX["^"] - 1)
        try:
            exponent = to_exponent(exponent_expr, self.table)
        except NonLatticeError as err:
            raise self.error(f"non-lattice exponent: {err}", start) from err
        if isinstance(base, Const) and not exponent.is_const:
            raise self.error("non-lattice exponent: a constant raised to a symbolic power", start)
        if isinstance(base, Const) and base.value == 0 and exponent.const < 0:
            raise self.error("division by zero", tok)
        result = power(base, exponent)
        if not exponent.is_const:
            try:
                normalize(result)
            except NonLatticeError as err:
                raise self.error(f"non-lattice exponent: {err}", start) from err
            except NormalizationError as err:
                raise self.error(str(err), start) from err
        return result

    def prefix(self, tok: Token) -> Expr:
        if tok.kind == "num":
            return Const(Fraction(int(tok.text)))
        if tok.kind == "lparen":
            e = self.expression(0)
            self.expect("rparen", "')'")
            return e
        if tok.kind == "op" and tok.text in "+-":
            operand = self.expression(_UNARY_BP)
            return operand if tok.text == "+" else neg(operand)
        if tok.kind == "ident":
            return self.identifier(tok)
        if tok.kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {tok.text!r}", tok)

    def identifier(self, tok: Token) -> Expr:
        name = tok.text
        primes = 0
        while self.peek().kind == "prime":
            self.next()
            primes += 1
        if name == "exp":
            if primes:
                raise self.error("derivative marks are not allowed on exp", tok)
            return self.exponential(tok)
        decl = self.table.func(name)
        if decl is not None:
            if self.peek().kind != "lparen":
                raise self.error(f"function {name!r} must be applied to its argument, e.g. {name}({decl.arg})", tok)
            self.next()
            arg = self.peek()
            if arg.kind != "ident" or arg.text not in BASE_VARS \
                    or self.tokens[self.pos + 1].kind != "rparen":
                raise self.error("opaque function argument must be a base variable", arg)
            if arg.text != decl.arg:
                raise self.error(f"function {name!r} is declared with argument {decl.arg!r}", arg)
            self.next()
            self.next()
            return FunctionAtom(name, primes, arg.text)
        if primes:
            raise self.error(f"derivative marks on {name!r}, which is not a declared function", tok)
        if self.peek().kind == "lparen":
            raise self.error(f"{name!r} is not a declared function", tok)
        if name in RESERVED:
            raise self.error(f"{name!r} is reserved", tok)
        if self.table.has_jet_var(name) or self.table.is_param(name):
            return Symbol(name)
        raise self.error(f"unknown identifier {name!r}", tok)

    def exponential(self, tok: Token) -> Expr:
        self.expect("lparen", "'(' after exp")
        start = self.peek()
        inner = self.expression(0)
        self.expect("rparen", "')'")
        try:
            nf = normalize(inner)
        except (NonLatticeError, NormalizationError) as err:
            raise self.error(f"unsupported exp argument: {err}", start) from err
        variables = [v for v in EXP_VARS if v in nf.variables()]
        if len(variables) != 1:
            raise self.error("exp argument must be a multiple of one of t, x, w", start)
        var = variables[0]
        try:
            coeff = div(inner, Symbol(var))
            exponent = to_exponent(coeff, self.table)
        except (NonLatticeError, NormalizationError) as err:
            raise self.error(f"exp argument must be an integer or parameter multiple of {var}", start) from err
        return Exp(var, exponent) if not exponent.is_zero() else Const(Fraction(1))


def parse(text: str, table: SymbolTable | None = None) -> Expr:
    """Parse ``text`` against ``table`` (defaults to jet variables only)."""
    return Parser(text, table or SymbolTable()).parse()
