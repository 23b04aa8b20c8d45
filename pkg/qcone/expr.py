"""
Text front-end for algebra elements.

Grammar (whitespace insignificant, ``*`` optional between factors)::

    expr   := [sign] term (sign term)*
    term   := factor ('*'? factor)*
    factor := rational | 'i' | 'q' ['^' exponent] | generator-token
    exponent := integer | '(' integer ')' | '(' integer '/' 2 ')'

Scalars commute with everything, so they may appear anywhere inside a term.
The literal ``0`` parses to the zero element.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

import pyparsing as pp

from .ncalg import Element, Presentation
from .qcoeff import IMAGINARY_UNIT, GaussRat, QLaurent

logger = logging.getLogger(__name__)


class ExprParseError(ValueError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownGeneratorError(ExprParseError):
    pass


@dataclass(frozen=True)
class _Lexeme:
    kind: str
    text: str
    loc: int


def _lexeme(kind: str):
    def action(s, loc, toks):
        return _Lexeme(kind, "".join(toks), loc)

    return action


def make_grammar() -> pp.ParserElement:
    rational = pp.Regex(r"\d+(?:\s*/\s*\d+)?").set_parse_action(_lexeme("rational"))
    imaginary = pp.Regex(r"i(?![A-Za-z0-9_])").set_parse_action(_lexeme("imaginary"))
    exponent = pp.Regex(r"-?\d+") | pp.Regex(r"\(\s*-?\d+\s*(?:/\s*\d+\s*)?\)")
    q_power = pp.Combine(
        pp.Regex(r"q(?![A-Za-z0-9_])") + pp.Optional(pp.Literal("^") + exponent),
        adjacent=False,
    ).set_parse_action(_lexeme("q"))
    generator = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*").set_parse_action(_lexeme("generator"))

    factor = rational | imaginary | q_power | generator
    term = pp.Group(factor + pp.ZeroOrMore(pp.Optional(pp.Suppress("*")) + factor))
    sign = pp.one_of("+ -")
    return pp.Optional(sign) + term + pp.ZeroOrMore(sign + term)


_GRAMMAR = make_grammar()


@dataclass(frozen=True)
class ExprTerm:
    coeff: QLaurent
    tokens: Tuple[str, ...]


@dataclass(frozen=True)
class ExprAst:
    terms: Tuple[ExprTerm, ...]

    def to_element(self, p: Presentation) -> Element:
        return Element.from_terms(
            (p.word(*term.tokens), p.one * term.coeff) for term in self.terms
        )


def _exponent(text: str, loc: int) -> Fraction:
    body = text.strip().lstrip("(").rstrip(")").replace(" ", "")
    try:
        value = Fraction(body)
    except (ValueError, ZeroDivisionError):
        raise ExprParseError(f"malformed exponent '{text}'", loc) from None
    if (value * 2).denominator != 1:
        raise ExprParseError(f"malformed exponent '{text}': only integers and halves are allowed", loc)
    return value


def _scalar(lexeme: _Lexeme) -> QLaurent:
    if lexeme.kind == "rational":
        try:
            return QLaurent.coerce(Fraction(lexeme.text.replace(" ", "")))
        except ZeroDivisionError:
            raise ExprParseError(f"zero denominator in '{lexeme.text}'", lexeme.loc) from None
    if lexeme.kind == "imaginary":
        return QLaurent.coerce(IMAGINARY_UNIT)
    _, _, power = lexeme.text.partition("^")
    return QLaurent.monomial(_exponent(power, lexeme.loc) if power else 1)


def parse(text: str, p: Presentation, *, offset: int = 0) -> ExprAst:
    """Parses ``text`` against the alphabet of ``p``."""
    if not text.strip():
        raise ExprParseError("empty expression", offset)
    try:
        parsed = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        raise ExprParseError(f"unexpected input '{text[exc.loc:exc.loc + 8]}'", offset + exc.loc) from None

    terms: List[ExprTerm] = []
    negative = False
    for item in parsed:
        if isinstance(item, str):
            negative = item == "-"
            continue
        coeff = QLaurent.one()
        tokens: List[str] = []
        for lexeme in item:
            if lexeme.kind == "generator":
                if lexeme.text not in p.by_name:
                    raise UnknownGeneratorError(
                        f"unknown token '{lexeme.text}' for {p.name}", offset + lexeme.loc
                    )
                tokens.append(lexeme.text)
            else:
                coeff = coeff * _scalar(lexeme)
        terms.append(ExprTerm(-coeff if negative else coeff, tuple(tokens)))
        negative = False
    return ExprAst(tuple(terms))


def parse_element(text: str, p: Presentation) -> Element:
    return parse(text, p).to_element(p)


def parse_relation(text: str, p: Presentation) -> Tuple[ExprAst, ExprAst]:
    """Splits ``lhs = rhs`` and parses both sides."""
    lhs, sep, rhs = text.partition("=")
    if not sep or "=" in rhs:
        raise ExprParseError(f"a relation needs exactly one '=': '{text}'", len(lhs))
    return parse(lhs, p), parse(rhs, p, offset=len(lhs) + 1)


def _format_power(exponent: Fraction) -> str:
    if exponent == 1:
        return "q"
    if exponent.denominator == 1:
        return f"q^{exponent.numerator}"
    return f"q^({exponent.numerator}/{exponent.denominator})"


def _format_term(magnitude: Fraction, imaginary: bool, exponent: Fraction, word_text: str) -> str:
    factors = []
    if magnitude != 1:
        factors.append(f"{magnitude.numerator}" if magnitude.denominator == 1 else f"{magnitude}")
    if imaginary:
        factors.append("i")
    if exponent != 0:
        factors.append(_format_power(exponent))
    if word_text:
        factors.append(word_text)
    return " ".join(factors) if factors else "1"


def render(e: Union[Element, QLaurent], p: Presentation = None) -> str:
    """
    Text form of an element: one term per q-power and per real/imaginary part.

    The output reparses with ``parse`` to the same element.
    """
    if isinstance(e, QLaurent):
        e = Element.unit(e)
    pieces: List[Tuple[bool, str]] = []
    for word, coeff in e.items():
        word_text = " ".join(p.alphabet[g].name for g in word) if word else ""
        for exponent, c in QLaurent.coerce(coeff).monomials():
            for part, imaginary in ((c.re, False), (c.im, True)):
                if part:
                    pieces.append((part < 0, _format_term(abs(part), imaginary, exponent, word_text)))
    if not pieces:
        return "0"
    first_negative, first = pieces[0]
    out = [f"-{first}" if first_negative else first]
    for negative, text in pieces[1:]:
        out.append(f"- {text}" if negative else f"+ {text}")
    return " ".join(out)


def render_scalar(c: QLaurent) -> str:
    return render(Element.unit(c))


def gauss_text(c: GaussRat) -> str:
    return render_scalar(QLaurent.coerce(c))
