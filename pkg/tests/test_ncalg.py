"""
Tests for the rewriting core: normal forms, products, the involution,
derivations and morphisms.
"""

import itertools
import random

import pytest

from qcone.expr import parse_element
from qcone.ncalg import (
    NORMAL_FORM_CACHE_SIZE,
    ConjugationError,
    DerivationError,
    DerivationTable,
    Element,
    Generator,
    Morphism,
    MorphismError,
    Parity,
    Presentation,
    RewriteRule,
    apply_derivation,
    apply_morphism,
    deglex_key,
    mul,
    normalize,
    star_element,
    _normal_word,
    validate_presentation,
)
from qcone.presets import (
    PresetName,
    automorphism,
    build_preset,
    derivation_table,
    has_derivation,
    named_element,
    preset_names,
)
from qcone.qcoeff import QLaurent, q

CONFLUENT = [
    PresetName.QPLANE_A,
    PresetName.QPLANE_B,
    PresetName.QPLANE_SHORT,
    PresetName.TWISTOR,
    PresetName.NULLVECTOR,
    PresetName.NULLVECTOR_DIFF,
    PresetName.DERIV_ONLY,
]

WITH_DIFFERENTIAL = [name for name in preset_names() if has_derivation(name)]


def _normal_monomials(p, max_degree):
    for degree in range(max_degree + 1):
        for word in itertools.combinations_with_replacement(range(len(p.alphabet)), degree):
            if any(a == b and a in p.nilpotents for a, b in zip(word, word[1:])):
                continue
            yield Element.monomial(word, p.one)


def _random_normal_form(word, p, rng):
    """Rewrites at a random redex of a random term until nothing is reducible."""
    current = Element.monomial(word, p.one)
    while True:
        reducible = [(w, c) for w, c in current.items() if p.redexes(w)]
        if not reducible:
            return current
        w, c = rng.choice(reducible)
        position = rng.choice(p.redexes(w))
        current = current - Element.monomial(w, c) + p.rewrite_at(w, position).scale(c)


class TestElement:
    """Test cases for the Element container."""

    def test_zero_coefficients_are_dropped(self):
        e = Element.from_terms([((0, 1), q(1)), ((0, 1), -q(1))])
        assert e.is_zero()
        assert e == Element.zero()

    def test_items_are_sorted_by_degree_then_word(self):
        e = Element.from_terms([((1, 0), q(1)), ((2,), q(1)), ((), q(1))])
        assert e.words() == [(), (2,), (1, 0)]
        assert e.degree == 2

    def test_concat_is_free(self):
        a = Element.monomial((1,))
        b = Element.monomial((0,), q(2))
        assert a.concat(b) == Element.monomial((1, 0), q(2))

    def test_hashable_and_comparable(self):
        a = Element.monomial((0, 1), q(1))
        assert hash(a) == hash(Element.monomial((0, 1), q(1)))
        assert a != Element.monomial((0, 1), q(2))


class TestValidatePresentation:
    """Test cases for validate_presentation."""

    @pytest.mark.parametrize("name", preset_names())
    def test_every_preset_is_valid(self, name):
        report = validate_presentation(build_preset(name))
        assert report.valid, report.violations

    def test_empty_presentation_is_valid(self):
        report = validate_presentation(Presentation(name="empty", alphabet=()))
        assert report.valid

    def test_rule_repeating_its_lhs_is_rejected(self):
        alphabet = (Generator(0, "a"), Generator(1, "b"))
        rules = {(1, 0): RewriteRule((1, 0), Element.monomial((1, 0)))}
        report = validate_presentation(Presentation(name="loop", alphabet=alphabet, rules=rules))
        assert not report.valid
        assert any("does not decrease" in v for v in report.violations)

    def test_broken_conjugation_is_reported(self):
        alphabet = (Generator(0, "a", conjugate=1), Generator(1, "b", conjugate=1))
        report = validate_presentation(Presentation(name="bad", alphabet=alphabet))
        assert any("involution" in v for v in report.violations)

    def test_printed_typo_conflict_is_reported(self):
        report = validate_presentation(build_preset(PresetName.COORD_DERIV, corrected=False))
        assert not report.valid
        assert any("D12 X21" in v for v in report.violations)


class TestNormalize:
    """Test cases for normalize."""

    def test_quantum_plane_swap(self, qplane_short, nf):
        assert nf(qplane_short, "y x") == nf(qplane_short, "q^-1 x y")

    def test_repeated_swaps(self, qplane_short, nf):
        assert nf(qplane_short, "y x x") == parse_element("q^-2 x x y", qplane_short)

    def test_two_term_nullvector_rule(self, nullvector, nf):
        expected = parse_element("X11 X22 - q^2 X12 X21 + q^-2 X12 X21", nullvector)
        assert nf(nullvector, "X22 X11") == expected

    def test_nilpotent_differential(self, qplane_short, nf):
        assert nf(qplane_short, "dx dx").is_zero()

    def test_differentials_anticommute(self, qplane_short, nf):
        assert nf(qplane_short, "dy dx") == parse_element("-q^-1 dx dy", qplane_short)

    def test_unit_is_normal(self, twistor):
        assert normalize(Element.unit(), twistor) == Element.unit()

    @pytest.mark.parametrize("name", preset_names())
    def test_idempotent(self, name):
        p = build_preset(name)
        letters = range(len(p.alphabet))
        for degree in range(5):
            for word in itertools.product(letters, repeat=degree):
                once = normalize(Element.monomial(word, p.one), p)
                assert normalize(once, p) == once, word

    def test_long_word_does_not_exhaust_the_stack(self, qplane_short):
        x, y = qplane_short.gid("x"), qplane_short.gid("y")
        word = (y,) * 40 + (x,) * 40
        result = normalize(Element.monomial(word), qplane_short)
        assert result == Element.monomial((x,) * 40 + (y,) * 40, q(-1600))

    def test_memo_is_bounded(self):
        assert _normal_word.cache_info().maxsize == NORMAL_FORM_CACHE_SIZE

    def test_shared_intermediate_words_are_collected(self, nullvector):
        word = nullvector.word("X22", "X22", "X21", "X11", "X11")
        expected = _random_normal_form(word, nullvector, random.Random(5))
        assert normalize(Element.monomial(word), nullvector) == expected

    def test_linear(self, twistor, nf):
        e1 = parse_element("yb x dy", twistor)
        e2 = parse_element("dyb xb y - q^3 y x", twistor)
        c = q(2) - 3
        lhs = normalize(e1.scale(c) + e2, twistor)
        assert lhs == normalize(e1, twistor).scale(c) + normalize(e2, twistor)

    @pytest.mark.parametrize("name", CONFLUENT)
    def test_random_strategy_agrees_with_leftmost(self, name):
        p = build_preset(name)
        rng = random.Random(2024)
        for _ in range(80):
            word = tuple(rng.randrange(len(p.alphabet)) for _ in range(rng.randint(2, 4)))
            expected = normalize(Element.monomial(word, p.one), p)
            assert _random_normal_form(word, p, rng) == expected, p.word_text(word)

    @pytest.mark.parametrize("name", preset_names())
    def test_every_step_decreases_deglex(self, name):
        p = build_preset(name)
        for pair in p.rules:
            for context in [(), (0,), (len(p.alphabet) - 1,)]:
                word = context + pair + context
                position = len(context)
                for reduced in p.rewrite_at(word, position).terms:
                    assert deglex_key(reduced) < deglex_key(word)


class TestMul:
    """Test cases for mul."""

    def test_already_normal(self, qplane_short):
        x, y = qplane_short.monomial("x"), qplane_short.monomial("y")
        assert mul(x, y, qplane_short) == qplane_short.monomial("x", "y")

    def test_reordering(self, qplane_short):
        x, y = qplane_short.monomial("x"), qplane_short.monomial("y")
        assert mul(y, x, qplane_short) == qplane_short.monomial("x", "y", coeff=q(-1))

    def test_square_of_sum(self, qplane_short, nf):
        s = parse_element("x + y", qplane_short)
        assert mul(s, s, qplane_short) == nf(qplane_short, "x x + q^-1 x y + x y + y y")

    @pytest.mark.parametrize("name", [PresetName.QPLANE_SHORT, PresetName.NULLVECTOR])
    def test_associative(self, name):
        p = build_preset(name)
        words = [w for d in range(3) for w in itertools.product(range(len(p.alphabet)), repeat=d)]
        factors = [Element.monomial(w, p.one) for w in words]
        for a, b, c in itertools.product(factors, repeat=3):
            assert mul(mul(a, b, p), c, p) == mul(a, mul(b, c, p), p)


class TestStarElement:
    """Test cases for the Hermitian conjugation."""

    def test_star_of_product(self, twistor, nf):
        xy = twistor.monomial("x", "y")
        assert star_element(xy, twistor) == nf(twistor, "q^-1 xb yb")

    def test_involutive(self, twistor, nf):
        e = nf(twistor, "x yb")
        assert star_element(star_element(e, twistor), twistor) == e

    def test_relation_maps_to_zero(self, twistor):
        relation = parse_element("x y - q y x", twistor)
        assert star_element(relation, twistor).is_zero()

    def test_antimultiplicative(self, twistor):
        for a, b in itertools.product(twistor.alphabet, repeat=2):
            ea, eb = twistor.monomial(a.name), twistor.monomial(b.name)
            lhs = star_element(mul(ea, eb, twistor), twistor)
            rhs = mul(star_element(eb, twistor), star_element(ea, twistor), twistor)
            assert lhs == rhs, f"{a.name} {b.name}"

    def test_missing_conjugate(self, qplane_short):
        with pytest.raises(ConjugationError):
            star_element(qplane_short.monomial("x"), qplane_short)


class TestApplyDerivation:
    """Test cases for the graded Leibniz extension."""

    def test_leibniz_on_product(self, qplane_short, nf):
        d = derivation_table(PresetName.QPLANE_SHORT)
        result = apply_derivation(qplane_short.monomial("x", "y"), d, qplane_short)
        assert result == nf(qplane_short, "q y dx + x dy")

    def test_graded_sign(self, qplane_short, nf):
        d = derivation_table(PresetName.QPLANE_SHORT)
        result = apply_derivation(qplane_short.monomial("dx", "y"), d, qplane_short)
        assert result == nf(qplane_short, "-dx dy")

    def test_realized_determinant_is_closed(self, twistor):
        d = derivation_table(PresetName.TWISTOR)
        qdet = named_element("qdet-twistor")
        assert normalize(qdet, twistor).is_zero()
        assert apply_derivation(qdet, d, twistor).is_zero()

    @pytest.mark.parametrize("name", WITH_DIFFERENTIAL)
    def test_square_is_zero(self, name):
        p = build_preset(name)
        d = derivation_table(name)
        for m in _normal_monomials(p, 4):
            assert apply_derivation(apply_derivation(m, d, p), d, p).is_zero(), m

    def test_odd_generator_needs_zero_image(self, qplane_short):
        dx = qplane_short.gid("dx")
        with pytest.raises(DerivationError):
            DerivationTable(images={dx: qplane_short.monomial("x")}, odd=frozenset({dx}))

    def test_missing_image(self, nullvector):
        d = DerivationTable(images={})
        with pytest.raises(DerivationError):
            apply_derivation(nullvector.monomial("X11"), d, nullvector)


class TestApplyMorphism:
    """Test cases for apply_morphism."""

    def test_identity(self, twistor, nf):
        e = parse_element("yb x - 2 q^3 dy xb", twistor)
        assert apply_morphism(e, Morphism.identity(twistor), twistor, twistor) == normalize(e, twistor)

    def test_missing_image(self, qplane_short):
        m = Morphism(images={qplane_short.gid("x"): qplane_short.monomial("y")}, name="partial")
        with pytest.raises(MorphismError):
            apply_morphism(qplane_short.monomial("x", "y"), m, qplane_short, qplane_short)

    def test_coefficient_action(self, qplane_short):
        image = apply_morphism(qplane_short.monomial("x", coeff=q(3)), automorphism(), qplane_short, qplane_short)
        assert image == qplane_short.monomial("y", coeff=q(-3))

    def test_odd_flag_marks_differentials(self, qplane_short):
        assert qplane_short.generator("dx").parity is Parity.ODD
        assert not qplane_short.is_odd(qplane_short.gid("y"))
        assert QLaurent.one() == qplane_short.one
