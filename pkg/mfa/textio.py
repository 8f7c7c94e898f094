"""Text format for elements, endomorphisms and derivations."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Union

import voluptuous as vol
from lark import Lark, Token, Transformer, v_args
from lark.exceptions import LarkError, UnexpectedInput, VisitError

from .common.anticomm import (
    BDerivation,
    BElement,
    BEndomorphism,
    b_mul,
    format_monomial,
    xi,
)
from .common.cyclic import CyclicPoly
from .common.endomorphism import AEndomorphism, FiltrationLevel
from .common.field import FieldScalar, FieldSpec
from .common.metabelian import AElement, a_mul, basis_decompose, generator
from .common.ncpoly import MatU, NCPoly
from .const import ALGEBRA_FREE, ALGEBRA_METABELIAN, ALGEBRAS, KIND_DERIVATION, KIND_ENDOMORPHISM, KINDS
from .exceptions import InvalidArgument, MapFormatError, MfaException, ParseError

_LOGGER = logging.getLogger(__name__)

MAX_NESTING = 64

GRAMMAR = r"""
?start: expr

expr: [sign] term (addop term)*
!sign: "+" | "-"
!addop: "+" | "-"

term: coeff? factor ("*" factor)*
    | coeff -> constant
coeff: INT ("/" INT)? "*"?

factor: VAR -> var
      | "(" expr ")" -> paren

VAR: /x[0-9]+/
INT: /[0-9]+/

%import common.WS
%ignore WS
"""

HEADER_SCHEMA = vol.Schema({vol.Required("kind"): vol.In(KINDS)})

_ROW = re.compile(r"^\s*x([0-9]+)\s*->(.*)$")
_HEADER = re.compile(r"^\s*([A-Za-z_]+)\s*:\s*(.*?)\s*$")


@dataclass(frozen=True)
class Var:
    """Variable x_index at a source position."""

    index: int
    line: int
    column: int


@dataclass(frozen=True)
class Paren:
    """Parenthesized subexpression."""

    expr: Sum


@dataclass(frozen=True)
class Term:
    """Coefficient times a left-associated product of factors."""

    coefficient: Fraction | None
    factors: tuple[Union[Var, Paren], ...]
    line: int
    column: int


@dataclass(frozen=True)
class Sum:
    """Signed terms."""

    terms: tuple[tuple[int, Term], ...]


ExprAST = Union[Sum, Term, Var, Paren]


@v_args(inline=True)
class _AstBuilder(Transformer):
    """Lark tree -> ExprAST."""

    def expr(self, sign, *rest):
        signs = [sign or "+", *rest[1::2]]
        return Sum(tuple((-1 if s == "-" else 1, term) for s, term in zip(signs, rest[0::2])))

    def sign(self, token):
        return str(token)

    addop = sign

    def coeff(self, numerator, denominator=None):
        try:
            value = Fraction(int(numerator), int(denominator) if denominator is not None else 1)
        except ZeroDivisionError as err:
            raise ParseError(line=numerator.line, column=numerator.column, reason="zero denominator") from err
        return (value, numerator.line, numerator.column)

    def term(self, *children):
        coefficient = None
        if children and isinstance(children[0], tuple):
            (coefficient, line, column), children = children[0], children[1:]
        else:
            line, column = _position(children[0])
        return Term(coefficient, tuple(children), line, column)

    def constant(self, coeff):
        value, line, column = coeff
        return Term(value, (), line, column)

    def var(self, token: Token):
        return Var(int(token[1:]), token.line, token.column)

    def paren(self, expr):
        return Paren(expr)


def _position(factor: Union[Var, Paren]) -> tuple[int, int]:
    if isinstance(factor, Paren):
        first = factor.expr.terms[0][1]
        return first.line, first.column
    return factor.line, factor.column


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=True)


def _check_nesting(text: str) -> None:
    depth = 0
    line, column = 1, 0
    for char in text:
        column += 1
        if char == "\n":
            line, column = line + 1, 0
        elif char == "(":
            depth += 1
            if depth > MAX_NESTING:
                raise ParseError(line=line, column=column, reason="parentheses nested too deeply")
        elif char == ")":
            depth -= 1


def parse_ast(text: str) -> Sum:
    """Parse ``text`` into an ExprAST; errors are positioned by line and column."""
    _check_nesting(text)
    try:
        tree = _parser().parse(text)
        return _AstBuilder().transform(tree)
    except UnexpectedInput as err:
        line = err.line if err.line and err.line > 0 else text.count("\n") + 1
        column = err.column if err.column and err.column > 0 else len(text.rsplit("\n", 1)[-1]) + 1
        raise ParseError(line=line, column=column, reason=_describe(err)) from err
    except VisitError as err:
        if isinstance(err.orig_exc, MfaException):
            raise err.orig_exc from err
        raise ParseError(line=1, column=1, reason=str(err.orig_exc)) from err
    except LarkError as err:
        raise ParseError(line=1, column=1, reason=str(err)) from err


def _describe(err: UnexpectedInput) -> str:
    token = getattr(err, "token", None)
    if token is not None and token.type != "$END":
        return f"unexpected '{token}'"
    char = getattr(err, "char", None)
    if char is not None:
        return f"unexpected character '{char}'"
    return "unexpected end of input"


class _Algebra:
    """Variables, zero and product of one of the two algebras."""

    def __init__(self, algebra: str, rank: int, field: FieldSpec) -> None:
        if algebra not in ALGEBRAS:
            raise InvalidArgument(name="algebra", reason=f"expected one of {', '.join(ALGEBRAS)}")
        if rank < 1:
            raise InvalidArgument(name="rank", reason="rank must be at least 1")
        self.rank = rank
        self.field = field
        self.variable: Callable[[int], Any]
        if algebra == ALGEBRA_METABELIAN:
            self.variable = lambda i: generator(i, rank, field)
            self.zero = AElement.zero(rank, field)
            self.mul = a_mul
        else:
            self.variable = lambda i: xi(i, rank, field)
            self.zero = BElement.zero(rank, field)
            self.mul = b_mul

    def evaluate(self, node: ExprAST):
        if isinstance(node, Sum):
            result = self.zero
            for sign, term in node.terms:
                value = self.evaluate(term)
                result = result + value if sign > 0 else result - value
            return result
        if isinstance(node, Term):
            coefficient = self._scalar(node)
            if not node.factors:
                if coefficient != 0:
                    raise ParseError(line=node.line, column=node.column, reason="constant terms are not allowed")
                return self.zero
            value = self.evaluate(node.factors[0])
            for factor in node.factors[1:]:
                value = self.mul(value, self.evaluate(factor))
            return value if node.coefficient is None else value.scale(coefficient)
        if isinstance(node, Paren):
            return self.evaluate(node.expr)
        if not 1 <= node.index <= self.rank:
            raise ParseError(line=node.line, column=node.column, reason=f"x{node.index} is outside x1..x{self.rank}")
        return self.variable(node.index)

    def _scalar(self, node: Term) -> FieldScalar:
        if node.coefficient is None:
            return self.field.one
        try:
            return self.field.element(node.coefficient)
        except MfaException as err:
            raise ParseError(line=node.line, column=node.column, reason=f"{node.coefficient} is not in {self.field}") from err


def parse_element(
    text: str,
    rank: int,
    algebra: str = ALGEBRA_METABELIAN,
    field: FieldSpec | None = None,
    *,
    line_offset: int = 0,
    column_offset: int = 0,
) -> AElement | BElement:
    """Parse an expression over x1..x{rank}; ``*`` is left-associative."""
    builder = _Algebra(algebra, rank, field or FieldSpec.rationals())
    try:
        return builder.evaluate(parse_ast(text))
    except ParseError as err:
        if not line_offset and not column_offset:
            raise
        line = err.placeholders["line"]
        column = err.placeholders["column"] + (column_offset if line == 1 else 0)
        raise ParseError(line=line + line_offset, column=column, reason=err.placeholders["reason"]) from err


def parse_map(
    text: str,
    rank: int,
    algebra: str = ALGEBRA_METABELIAN,
    field: FieldSpec | None = None,
    kind: str | None = None,
) -> AEndomorphism | BEndomorphism | BDerivation:
    """Parse a map file: a ``kind:`` header, then one ``xI -> expr`` row per variable.

    Derivation rows are the coefficients f_1..f_n and always live in the free
    algebra.
    """
    field = field or FieldSpec.rationals()
    header: dict[str, str] | None = None
    rows: dict[int, tuple[int, int, str]] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if header is None:
            match = _HEADER.match(line)
            if match is None:
                raise MapFormatError(reason=f"line {number}: expected 'kind: {KIND_ENDOMORPHISM}|{KIND_DERIVATION}'")
            header = {match.group(1): match.group(2)}
            continue
        match = _ROW.match(line)
        if match is None:
            raise MapFormatError(reason=f"line {number}: expected 'xI -> expression'")
        index = int(match.group(1))
        if index in rows:
            raise MapFormatError(reason=f"line {number}: duplicate row for x{index}")
        rows[index] = (number, match.start(2), match.group(2))
    if header is None:
        raise MapFormatError(reason="missing 'kind:' header")
    try:
        file_kind = HEADER_SCHEMA(header)["kind"]
    except vol.Invalid as err:
        raise MapFormatError(reason=f"bad header: {err}") from err
    if kind is not None and kind != file_kind:
        raise MapFormatError(reason=f"expected kind '{kind}', file declares '{file_kind}'")
    rows_schema = vol.Schema({vol.Required(i): tuple for i in range(1, rank + 1)})
    try:
        rows_schema(rows)
    except vol.MultipleInvalid as err:
        raise MapFormatError(reason=_describe_rows(err, rank)) from err

    target = ALGEBRA_FREE if file_kind == KIND_DERIVATION else algebra
    images = [
        parse_element(expression, rank, target, field, line_offset=number - 1, column_offset=offset)
        for number, offset, expression in (rows[i] for i in range(1, rank + 1))
    ]
    _LOGGER.debug("Parsed %s of rank %s over %s", file_kind, rank, field)
    if file_kind == KIND_DERIVATION:
        return BDerivation(images)
    if target == ALGEBRA_FREE:
        return BEndomorphism(images)
    return AEndomorphism(images)


def _describe_rows(err: vol.MultipleInvalid, rank: int) -> str:
    problems = []
    for error in err.errors:
        index = error.path[0] if error.path else "?"
        if isinstance(error, vol.RequiredFieldInvalid):
            problems.append(f"missing row for x{index}")
        else:
            problems.append(f"x{index} is outside x1..x{rank}")
    return ", ".join(sorted(problems))


def map_kind(text: str) -> str:
    """Kind declared by a map file header."""
    for line in text.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            match = _HEADER.match(line)
            if match is not None and match.group(1) == "kind" and match.group(2) in KINDS:
                return match.group(2)
            break
    raise MapFormatError(reason="missing 'kind:' header")


def _format_scalar(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _join(terms: list[tuple[Fraction, str]], *, tight: bool = False, unit: str = "1") -> str:
    """Render signed (coefficient, body) pairs; an empty body is the unit."""
    if not terms:
        return "0"
    parts = []
    for position, (coefficient, body) in enumerate(terms):
        magnitude = abs(coefficient)
        if not body:
            text = _format_scalar(magnitude) if magnitude != 1 else unit
        elif magnitude == 1:
            text = body
        else:
            text = f"{_format_scalar(magnitude)}*{body}"
        if position == 0:
            if coefficient < 0:
                parts.append(f"-{text}" if tight else f"- {text}")
            else:
                parts.append(text)
        else:
            parts.append(f" - {text}" if coefficient < 0 else f" + {text}")
    return "".join(parts)


def _left_normed(i: int, j: int, word) -> str:
    text = f"(x{i}*x{j})"
    for k in word:
        text = f"({text}*x{k})"
    return text


def _print_a(a: AElement) -> str:
    decomposition = basis_decompose(a)
    field = a.field
    terms = [(field.signed(c), f"x{i}") for i, c in enumerate(decomposition.linear, start=1) if c != 0]
    terms.extend((field.signed(c), _left_normed(*key)) for key, c in decomposition.items())
    return _join(terms)


def _print_b(b: BElement) -> str:
    return _join([(b.field.signed(c), format_monomial(u)) for u, c in b.terms()])


def _print_word(alphabet, word) -> str:
    return "*".join(alphabet.format_label(label) for label in word)


def _print_poly(p: NCPoly) -> str:
    return _join([(p.field.signed(c), _print_word(p.alphabet, w)) for w, c in p.terms()], tight=True)


def _print_cyclic(p: CyclicPoly) -> str:
    return _join(
        [(p.field.signed(c), f"[{_print_word(p.alphabet, w) or '1'}]") for w, c in p.terms()], tight=True
    )


def _print_map(kind: str, images) -> str:
    lines = [f"kind: {kind}"]
    lines.extend(f"x{i} -> {print_canonical(f)}" for i, f in enumerate(images, start=1))
    return "\n".join(lines) + "\n"


def print_canonical(value: Any) -> str:
    """Canonical text; elements and maps parse back to the same value."""
    if isinstance(value, AElement):
        return _print_a(value)
    if isinstance(value, BElement):
        return _print_b(value)
    if isinstance(value, NCPoly):
        return _print_poly(value)
    if isinstance(value, CyclicPoly):
        return _print_cyclic(value)
    if isinstance(value, (AEndomorphism, BEndomorphism)):
        return _print_map(KIND_ENDOMORPHISM, value.images)
    if isinstance(value, BDerivation):
        return _print_map(KIND_DERIVATION, value.images)
    if isinstance(value, MatU):
        return "\n".join("[" + ", ".join(_print_poly(e) for e in row) + "]" for row in value.rows)
    if isinstance(value, FiltrationLevel):
        return str(value)
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(print_canonical(v) for v in value) + ")"
    raise InvalidArgument(name="value", reason=f"cannot print {type(value).__name__}")
