"""
Verification engine: relation checks, critical pairs, star closure,
automorphism and realization checks.

Every check returns a CheckReport; problems are witnesses, never exceptions.
"""

import itertools
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from .expr import render
from .ncalg import (
    DerivationTable,
    Element,
    Morphism,
    Presentation,
    apply_derivation,
    apply_morphism,
    normalize,
    star_element,
    validate_presentation,
)
from .presets import (
    PresetName,
    automorphism,
    build_preset,
    derivation_table,
    named_element,
    printed_relations,
    realization_map,
)
from .schemas import CheckReport, CheckStatus, Witness

logger = logging.getLogger(__name__)

Relation = Tuple[Element, Element]


def _relation_text(lhs: Element, rhs: Element, p: Presentation) -> str:
    return f"{render(lhs, p)} = {render(rhs, p)}"


def check_relations(
    p: Presentation,
    relations: Sequence[Relation],
    *,
    labels: Optional[Sequence[str]] = None,
    name: str = "relations",
    expected: CheckStatus = CheckStatus.PASS,
) -> CheckReport:
    """Passes iff normalize(lhs - rhs) = 0 for every pair."""
    witnesses = []
    for idx, (lhs, rhs) in enumerate(relations):
        difference = normalize(lhs - rhs, p)
        if difference:
            label = labels[idx] if labels else _relation_text(lhs, rhs, p)
            witnesses.append(Witness(input=label, difference=render(difference, p)))
    return CheckReport.from_witnesses(
        name, witnesses, expected=expected, examined=len(relations), parameters={"preset": p.name}
    )


def check_preset_relations(
    name: str, *, corrected: bool = True, expected: CheckStatus = CheckStatus.PASS
) -> CheckReport:
    """Validation plus every printed line of the preset's tables."""
    p = build_preset(name, corrected=corrected)
    validation = validate_presentation(p)
    relations = printed_relations(name, corrected=corrected)
    report = check_relations(
        p,
        [(lhs, rhs) for _, lhs, rhs in relations],
        labels=[line for line, _, _ in relations],
        name=f"relations-{name}",
    )
    witnesses = [Witness(input="presentation", difference=v) for v in validation.violations]
    witnesses.extend(report.witnesses)
    return CheckReport.from_witnesses(
        f"relations-{name}",
        witnesses,
        expected=expected,
        examined=report.examined,
        parameters={"preset": name, "corrected": corrected},
    )


def overlap_words(p: Presentation, max_degree: int = 3) -> Iterable[Tuple[int, ...]]:
    """
    Words examined by the critical-pair check.

    Degree 3: every a·b·c with both a·b and b·c reducible. Higher degrees add
    every word with at least two reducible positions.
    """
    size = len(p.alphabet)
    for a, b, c in itertools.product(range(size), repeat=3):
        if p.is_redex(a, b) and p.is_redex(b, c):
            yield (a, b, c)
    for degree in range(4, max_degree + 1):
        for word in itertools.product(range(size), repeat=degree):
            if len(p.redexes(word)) >= 2:
                yield word


def check_confluence(
    p: Presentation, max_degree: int = 3, *, expected: CheckStatus = CheckStatus.PASS
) -> CheckReport:
    """Reduces each overlap word by every possible first step and compares the normal forms."""
    witnesses = []
    examined = 0
    for word in overlap_words(p, max_degree):
        examined += 1
        positions = p.redexes(word)
        first = normalize(p.rewrite_at(word, positions[0]), p)
        for position in positions[1:]:
            other = normalize(p.rewrite_at(word, position), p)
            difference = first - other
            if difference:
                witnesses.append(
                    Witness(
                        input=f"{p.word_text(word)} (steps at {positions[0]} and {position})",
                        difference=render(difference, p),
                    )
                )
    logger.debug(f"confluence {p.name}: {examined} overlaps, {len(witnesses)} unresolved")
    return CheckReport.from_witnesses(
        f"confluence-{p.name}",
        witnesses,
        expected=expected,
        examined=examined,
        parameters={"preset": p.name, "max_degree": max_degree},
    )


def check_star_closure(p: Presentation, *, expected: CheckStatus = CheckStatus.PASS) -> CheckReport:
    """Every rule (and nilpotent square) is mapped into the ideal by the involution."""
    witnesses = []
    relations = p.rule_relations()
    for label, relation in relations:
        image = star_element(relation, p)
        if image:
            witnesses.append(Witness(input=f"star({label})", difference=render(image, p)))
    return CheckReport.from_witnesses(
        f"star-{p.name}",
        witnesses,
        expected=expected,
        examined=len(relations),
        parameters={"preset": p.name},
    )


def check_derivation(
    p: Presentation, d: DerivationTable, *, expected: CheckStatus = CheckStatus.PASS
) -> CheckReport:
    """δ(lhs - rhs) normalizes to zero for every rule."""
    witnesses = []
    relations = p.rule_relations()
    for label, relation in relations:
        image = apply_derivation(relation, d, p)
        if image:
            witnesses.append(Witness(input=f"d({label})", difference=render(image, p)))
    return CheckReport.from_witnesses(
        f"derivation-{p.name}",
        witnesses,
        expected=expected,
        examined=len(relations),
        parameters={"preset": p.name},
    )


def _image_witnesses(
    m: Morphism, src: Presentation, dst: Presentation, prefix: str
) -> Tuple[List[Witness], int]:
    witnesses = []
    relations = src.rule_relations()
    for label, relation in relations:
        image = apply_morphism(relation, m, src, dst)
        if image:
            witnesses.append(
                Witness(input=f"{prefix}[{src.name}: {label}] in {dst.name}", difference=render(image, dst))
            )
    return witnesses, len(relations)


def check_automorphism(*, expected: CheckStatus = CheckStatus.PASS) -> CheckReport:
    """A maps (a) into (b), (b) into (a), and fixes (c)."""
    m = automorphism()
    pairs = [
        (PresetName.QPLANE_A, PresetName.QPLANE_B),
        (PresetName.QPLANE_B, PresetName.QPLANE_A),
        (PresetName.QPLANE_SHORT, PresetName.QPLANE_SHORT),
    ]
    witnesses: List[Witness] = []
    examined = 0
    for src, dst in pairs:
        found, count = _image_witnesses(m, build_preset(src), build_preset(dst), "A")
        witnesses.extend(found)
        examined += count
    return CheckReport.from_witnesses("automorphism", witnesses, expected=expected, examined=examined)


def check_automorphism_fixed(
    name: str, *, expected: CheckStatus = CheckStatus.PASS
) -> CheckReport:
    """Whether A maps the calculus ``name`` into its own ideal."""
    p = build_preset(name)
    witnesses, examined = _image_witnesses(automorphism(), p, p, "A")
    return CheckReport.from_witnesses(
        f"automorphism-fixes-{p.name}",
        witnesses,
        expected=expected,
        examined=examined,
        parameters={"preset": p.name},
    )


def check_automorphism_involution(
    max_degree: int = 3, *, expected: CheckStatus = CheckStatus.PASS
) -> CheckReport:
    """A∘A = id on every word of degree <= max_degree of the short calculus."""
    p = build_preset(PresetName.QPLANE_SHORT)
    m = automorphism()
    witnesses = []
    examined = 0
    for degree in range(max_degree + 1):
        for word in itertools.product(range(len(p.alphabet)), repeat=degree):
            examined += 1
            e = Element.monomial(word, p.one)
            twice = apply_morphism(apply_morphism(e, m, p, p), m, p, p)
            difference = twice - normalize(e, p)
            if difference:
                witnesses.append(Witness(input=f"A(A({p.word_text(word)}))", difference=render(difference, p)))
    return CheckReport.from_witnesses(
        "automorphism-involution",
        witnesses,
        expected=expected,
        examined=examined,
        parameters={"max_degree": max_degree},
    )


def check_realization(*, expected: CheckStatus = CheckStatus.PASS) -> CheckReport:
    """
    Every null-vector relation (coordinates and differentials) vanishes under ρ,
    ρ(qdet) = 0, and δ(qdet) = 0 computed on both sides of ρ.
    """
    src = build_preset(PresetName.NULLVECTOR_DIFF)
    dst = build_preset(PresetName.TWISTOR)
    rho = realization_map()
    d_src = derivation_table(PresetName.NULLVECTOR_DIFF)
    d_dst = derivation_table(PresetName.TWISTOR)
    qdet = named_element("qdet")

    cases: List[Tuple[str, Element]] = [
        (f"rho({line})", apply_morphism(lhs - rhs, rho, src, dst))
        for line, lhs, rhs in printed_relations(PresetName.NULLVECTOR_DIFF)
    ]
    cases.append(("rho(qdet)", apply_morphism(qdet, rho, src, dst)))
    cases.append(("rho(d(qdet))", apply_morphism(apply_derivation(qdet, d_src, src), rho, src, dst)))
    cases.append(("d(rho(qdet))", apply_derivation(apply_morphism(qdet, rho, src, dst), d_dst, dst)))
    cases.append(("rho(1) - 1", apply_morphism(Element.unit(), rho, src, dst) - Element.unit()))

    witnesses = [Witness(input=label, difference=render(image, dst)) for label, image in cases if image]
    return CheckReport.from_witnesses("realization", witnesses, expected=expected, examined=len(cases))
