"""
Tests for the verification engine.
"""

import pytest

from qcone.expr import parse_element
from qcone.ncalg import Generator, Presentation, RewriteRule, Element
from qcone.presets import PresetName, build_preset, derivation_table
from qcone.qcoeff import q
from qcone.schemas import CheckStatus
from qcone.verify import (
    check_automorphism,
    check_automorphism_fixed,
    check_automorphism_involution,
    check_confluence,
    check_derivation,
    check_preset_relations,
    check_realization,
    check_relations,
    check_star_closure,
    overlap_words,
)

CONFLUENT = [
    PresetName.QPLANE_SHORT,
    PresetName.QPLANE_A,
    PresetName.QPLANE_B,
    PresetName.TWISTOR,
    PresetName.NULLVECTOR,
    PresetName.NULLVECTOR_DIFF,
    PresetName.DERIV_ONLY,
]


def _conjugate_pair_presentation(exponent):
    """x, x̄, y, ȳ with x y = q^2 y x and x̄ ȳ = q^exponent ȳ x̄."""
    alphabet = (
        Generator(0, "x", conjugate=1),
        Generator(1, "xb", conjugate=0),
        Generator(2, "y", conjugate=3),
        Generator(3, "yb", conjugate=2),
    )
    rules = {
        (2, 0): RewriteRule((2, 0), Element.monomial((0, 2), q(-2))),
        (3, 1): RewriteRule((3, 1), Element.monomial((1, 3), q(-exponent))),
    }
    return Presentation(name=f"conjugate-pair-{exponent}", alphabet=alphabet, rules=rules)


class TestCheckRelations:
    """Test cases for check_relations."""

    def test_printed_twistor_lines(self):
        report = check_preset_relations("twistor")
        assert report.status is CheckStatus.PASS
        assert report.examined > 6

    def test_trivial_pair(self, twistor):
        e = twistor.monomial("x", "y")
        assert check_relations(twistor, [(e, e)]).status is CheckStatus.PASS

    def test_wrong_line_has_witness(self, twistor):
        lhs = parse_element("x yb", twistor)
        rhs = parse_element("q^2 yb x", twistor)
        report = check_relations(twistor, [(lhs, rhs)])
        assert report.status is CheckStatus.FAIL
        assert len(report.witnesses) == 1
        assert report.witnesses[0].difference == "x yb - q x yb"

    def test_rules_are_self_consistent(self):
        for name in CONFLUENT:
            p = build_preset(name)
            relations = [(Element.monomial(pair, p.one), rule.rhs) for pair, rule in p.rules.items()]
            assert check_relations(p, relations).ok

    def test_printed_typo_reports_contradiction(self):
        report = check_preset_relations("coord-deriv", corrected=False)
        assert report.status is CheckStatus.FAIL
        assert any(w.input == "presentation" for w in report.witnesses)
        assert report.parameters["corrected"] is False

    def test_corrected_table_passes(self):
        assert check_preset_relations("coord-deriv").status is CheckStatus.PASS


class TestCheckConfluence:
    """Test cases for the critical-pair check."""

    @pytest.mark.parametrize("name", CONFLUENT)
    def test_confluent_presets(self, name):
        report = check_confluence(build_preset(name))
        assert report.status is CheckStatus.PASS, report.witnesses
        assert report.examined > 0

    def test_two_sided_system_is_not_confluent(self, coord_deriv):
        report = check_confluence(coord_deriv, expected=CheckStatus.FAIL)
        assert report.status is CheckStatus.FAIL
        assert report.ok
        witness = next(w for w in report.witnesses if w.input.startswith("D22 X22 X11"))
        assert witness.difference == "X11 - q^4 X11"

    def test_examined_count_is_the_overlap_count(self, twistor):
        report = check_confluence(twistor)
        assert report.examined == len(list(overlap_words(twistor, 3)))

    def test_deterministic(self, coord_deriv):
        assert check_confluence(coord_deriv) == check_confluence(coord_deriv)

    @pytest.mark.slow
    def test_higher_degree_is_redundant(self, qplane_short):
        report = check_confluence(qplane_short, max_degree=4)
        assert report.status is CheckStatus.PASS
        assert report.parameters["max_degree"] == 4


class TestCheckStarClosure:
    """Test cases for check_star_closure."""

    def test_twistor(self, twistor):
        assert check_star_closure(twistor).status is CheckStatus.PASS

    def test_squared_pair_fails(self):
        report = check_star_closure(_conjugate_pair_presentation(-2))
        assert report.status is CheckStatus.FAIL

    def test_matching_pair_passes(self):
        assert check_star_closure(_conjugate_pair_presentation(2)).status is CheckStatus.PASS

    def test_self_conjugate_commuting_pair(self):
        alphabet = (Generator(0, "x", conjugate=1), Generator(1, "xb", conjugate=0))
        rules = {(1, 0): RewriteRule((1, 0), Element.monomial((0, 1), q(0)))}
        p = Presentation(name="commuting", alphabet=alphabet, rules=rules)
        assert check_star_closure(p).status is CheckStatus.PASS


class TestCheckDerivation:
    """Test cases for check_derivation."""

    @pytest.mark.parametrize("name", ["qplane-a", "qplane-b", "qplane-short", "twistor"])
    def test_compatible_differentials(self, name):
        report = check_derivation(build_preset(name), derivation_table(name))
        assert report.status is CheckStatus.PASS, report.witnesses
        assert report.examined == len(build_preset(name).rule_relations())

    def test_null_vector_calculus_off_the_cone(self, nullvector_diff):
        report = check_derivation(
            nullvector_diff, derivation_table("nullvector-diff"), expected=CheckStatus.FAIL
        )
        assert report.status is CheckStatus.FAIL
        assert report.ok
        assert all(w.input.startswith("d(") for w in report.witnesses)


class TestAutomorphism:
    """Test cases for the quantum-plane automorphism checks."""

    def test_maps_long_calculi_and_fixes_short(self):
        assert check_automorphism().status is CheckStatus.PASS

    def test_long_calculus_is_not_fixed(self):
        report = check_automorphism_fixed("qplane-a")
        assert report.status is CheckStatus.FAIL

    def test_short_calculus_is_fixed(self):
        assert check_automorphism_fixed("qplane-short").status is CheckStatus.PASS

    def test_involution(self):
        report = check_automorphism_involution(3)
        assert report.status is CheckStatus.PASS
        assert report.examined == 1 + 4 + 16 + 64


class TestRealization:
    def test_realization(self):
        report = check_realization()
        assert report.status is CheckStatus.PASS, report.witnesses
        assert report.examined > 20
