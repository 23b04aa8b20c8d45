"""
Tests for the expression parser and renderer.
"""

from fractions import Fraction

import pytest

from qcone.expr import (
    ExprParseError,
    UnknownGeneratorError,
    parse,
    parse_element,
    parse_relation,
    render,
    render_scalar,
)
from qcone.ncalg import Element, normalize
from qcone.presets import PresetName, build_preset, preset_names
from qcone.qcoeff import IMAGINARY_UNIT, QLaurent, q


class TestParse:
    """Test cases for parse."""

    def test_explicit_product(self, twistor):
        ast = parse("yb*x", twistor)
        assert len(ast.terms) == 1
        assert ast.terms[0].tokens == ("yb", "x")
        assert ast.to_element(twistor) == Element.monomial(twistor.word("yb", "x"))

    def test_qdet(self, nullvector):
        e = parse_element("X11 X22 - q^2 X12 X21", nullvector)
        assert e.coefficient(nullvector.word("X11", "X22")) == QLaurent.one()
        assert e.coefficient(nullvector.word("X12", "X21")) == -q(2)

    def test_scalars_multiply_anywhere_in_a_term(self, qplane_short):
        e = parse_element("2 x q^-1 * i y", qplane_short)
        expected = QLaurent.monomial(-1, IMAGINARY_UNIT * 2)
        assert e == qplane_short.monomial("x", "y", coeff=expected)

    def test_half_exponent_and_fraction(self, qplane_short):
        e = parse_element("3/4 q^(1/2) x", qplane_short)
        assert e == qplane_short.monomial("x", coeff=QLaurent.monomial(Fraction(1, 2), Fraction(3, 4)))

    def test_leading_sign_and_constant(self, qplane_short):
        e = parse_element("-1 + x", qplane_short)
        assert e.coefficient(()) == -QLaurent.one()

    def test_zero_literal(self, qplane_short):
        assert parse_element("0", qplane_short).is_zero()

    def test_unknown_token(self, twistor):
        with pytest.raises(UnknownGeneratorError) as exc_info:
            parse("q^(1/2) z", twistor)
        assert exc_info.value.position == len("q^(1/2) ")

    def test_token_outside_preset(self, qplane_short):
        with pytest.raises(UnknownGeneratorError):
            parse("xb x", qplane_short)

    def test_malformed_exponent(self, qplane_short):
        with pytest.raises(ExprParseError):
            parse("q^(1/3) x", qplane_short)

    def test_lexical_error(self, qplane_short):
        with pytest.raises(ExprParseError):
            parse("x + + y", qplane_short)

    def test_empty_input(self, qplane_short):
        with pytest.raises(ExprParseError):
            parse("   ", qplane_short)


class TestParseRelation:
    def test_splits_on_equals(self, qplane_short):
        lhs, rhs = parse_relation("x y = q y x", qplane_short)
        assert lhs.to_element(qplane_short) == qplane_short.monomial("x", "y")
        assert rhs.to_element(qplane_short) == qplane_short.monomial("y", "x", coeff=q(1))

    @pytest.mark.parametrize("text", ["x y", "x = y = x"])
    def test_needs_exactly_one_equals(self, qplane_short, text):
        with pytest.raises(ExprParseError):
            parse_relation(text, qplane_short)


class TestRender:
    """Test cases for render."""

    def test_zero(self, twistor):
        assert render(Element.zero(), twistor) == "0"

    def test_one_term_per_power(self, nullvector, nf):
        text = render(nf(nullvector, "X22 X11"), nullvector)
        assert text == "X11 X22 + q^-2 X12 X21 - q^2 X12 X21"

    def test_imaginary_part(self, deriv_only):
        e = deriv_only.monomial("D12", "D21", coeff=QLaurent.coerce(IMAGINARY_UNIT * -2))
        assert render(e, deriv_only) == "-2 i D12 D21"

    def test_scalar(self):
        assert render_scalar(q(1) + q(-1)) == "q^-1 + q"
        assert render_scalar(q(Fraction(-1, 2))) == "q^(-1/2)"

    @pytest.mark.parametrize("name", preset_names())
    def test_round_trip_on_normal_forms(self, name):
        p = build_preset(name)
        letters = [g.name for g in p.alphabet]
        corpus = [
            f"{letters[-1]} {letters[0]}",
            f"2/3 i q^(1/2) {letters[1]} {letters[0]} - q^-3 {letters[-1]}",
            f"{letters[-1]} {letters[-2]} {letters[0]} + 5",
        ]
        for text in corpus:
            e = normalize(parse_element(text, p), p)
            assert parse_element(render(e, p), p) == e, text

    def test_round_trip_after_classical_limit(self):
        p = build_preset(PresetName.DERIV_ONLY)
        e = p.monomial("D11", coeff=QLaurent.monomial(1, Fraction(-7, 2)) + IMAGINARY_UNIT)
        assert parse_element(render(e, p), p) == e
