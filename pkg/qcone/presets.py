"""
Catalog of the algebras, morphisms, derivation tables and named elements.

Presentations are built from the printed relation lines in catalog.yaml. Each
line ``lhs = rhs`` is oriented into a rule by its leading word under the
degree-lexicographic order of the alphabet; a line that restates an existing
rule is merged, a line that contradicts one is kept out of the rules and
recorded as a conflict.
"""

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from .config import CatalogConfig, GeneratorConfig, catalog_settings
from .expr import parse_element, parse_relation
from .ncalg import (
    CoefficientAction,
    DerivationTable,
    Element,
    Generator,
    Morphism,
    Presentation,
    RewriteRule,
    apply_derivation,
    apply_morphism,
    deglex_key,
    normalize,
)
from .qcoeff import IMAGINARY_UNIT, QLaurent, q

logger = logging.getLogger(__name__)


class PresetName(str, enum.Enum):
    QPLANE_A = "qplane-a"
    QPLANE_B = "qplane-b"
    QPLANE_SHORT = "qplane-short"
    TWISTOR = "twistor"
    NULLVECTOR = "nullvector"
    NULLVECTOR_DIFF = "nullvector-diff"
    COORD_DERIV = "coord-deriv"
    DERIV_ONLY = "deriv-only"
    MOMENTUM = "momentum"


class UnknownPresetError(KeyError):
    pass


def _resolve_name(name: Union[str, PresetName]) -> str:
    value = name.value if isinstance(name, PresetName) else str(name)
    if value not in {p.value for p in PresetName}:
        raise UnknownPresetError(f"Unknown preset '{value}'. Known presets: {preset_names()}")
    return value


def preset_names() -> List[str]:
    return [p.value for p in PresetName]


def _build_alphabet(entries: List[GeneratorConfig]) -> Tuple[Generator, ...]:
    ids = {entry.name: idx for idx, entry in enumerate(entries)}
    return tuple(
        Generator(
            id=idx,
            name=entry.name,
            parity=entry.parity,
            family=entry.family,
            conjugate=ids[entry.conjugate] if entry.conjugate is not None else None,
            label=entry.label or entry.name,
        )
        for idx, entry in enumerate(entries)
    )


def orient_relation(lhs: Element, rhs: Element, p: Presentation):
    """
    Turns ``lhs = rhs`` into ("rule", pair, replacement), ("nilpotent", g) or None.

    The leading word is the largest word of lhs - rhs in degree-lex order; its
    coefficient must be a unit of the Laurent ring.
    """
    difference = lhs - rhs
    if difference.is_zero():
        return None
    leading = max(difference.terms, key=deglex_key)
    coeff = difference.terms[leading]
    if len(leading) != 2:
        raise ValueError(f"leading word {p.word_text(leading)} is not quadratic")
    if not coeff.is_monomial:
        raise ValueError(f"leading coefficient {coeff} of {p.word_text(leading)} is not invertible")
    rest = difference - Element.monomial(leading, coeff)
    if rest.is_zero() and leading[0] == leading[1]:
        return "nilpotent", leading[0]
    return "rule", leading, rest.scale(-coeff.inverse())


def _table_names(name: str, corrected: bool, catalog: CatalogConfig) -> List[str]:
    preset = catalog.presets[name]
    if corrected:
        return list(preset.tables)
    return [preset.printed_tables.get(table, table) for table in preset.tables]


@lru_cache(maxsize=None)
def _build(name: str, corrected: bool) -> Presentation:
    catalog = catalog_settings
    preset = catalog.presets[name]
    bare = Presentation(name=name, alphabet=_build_alphabet(catalog.alphabets[preset.alphabet]))

    rules: Dict[Tuple[int, int], RewriteRule] = {}
    nilpotents = set()
    conflicts: List[str] = []
    for table in _table_names(name, corrected, catalog):
        for line in catalog.tables[table].lines:
            lhs, rhs = parse_relation(line, bare)
            oriented = orient_relation(lhs.to_element(bare), rhs.to_element(bare), bare)
            if oriented is None:
                continue
            if oriented[0] == "nilpotent":
                nilpotents.add(oriented[1])
                continue
            _, pair, replacement = oriented
            stored = rules.get(pair)
            if stored is None:
                rules[pair] = RewriteRule(lhs=pair, rhs=replacement, source=table)
            elif stored.rhs == replacement:
                logger.debug(f"{name}: '{line}' restates the {bare.word_text(pair)} rule")
            else:
                message = (
                    f"conflicting relations for {bare.word_text(pair)}: '{line}' ({table}) "
                    f"contradicts the rule from {stored.source}"
                )
                logger.warning(f"{name}: {message}")
                conflicts.append(message)

    return Presentation(
        name=name,
        alphabet=bare.alphabet,
        rules=rules,
        nilpotents=frozenset(nilpotents),
        conflicts=tuple(conflicts),
    )


def build_preset(name: Union[str, PresetName], *, corrected: bool = True) -> Presentation:
    """
    Builds (once) the presentation of a named algebra.

    Args:
        name: a PresetName value.
        corrected: use the corrected coordinate-derivative table; only
            ``coord-deriv`` has a printed variant, the flag is ignored elsewhere.

    Returns:
        The shared, immutable Presentation.
    """
    resolved = _resolve_name(name)
    if not catalog_settings.presets[resolved].printed_tables:
        corrected = True
    return _build(resolved, corrected)


def printed_relations(
    name: Union[str, PresetName], *, corrected: bool = True
) -> List[Tuple[str, Element, Element]]:
    """Every printed line of the preset's tables as (line, lhs, rhs)."""
    resolved = _resolve_name(name)
    p = build_preset(resolved, corrected=corrected)
    relations = []
    for table in _table_names(resolved, corrected, catalog_settings):
        for line in catalog_settings.tables[table].lines:
            lhs, rhs = parse_relation(line, p)
            relations.append((line, lhs.to_element(p), rhs.to_element(p)))
    return relations


def derivation_table(name: Union[str, PresetName]) -> DerivationTable:
    resolved = _resolve_name(name)
    pairs = catalog_settings.presets[resolved].derivation
    if not pairs:
        raise KeyError(f"Preset '{resolved}' carries no differential")
    return DerivationTable.from_pairs(build_preset(resolved), pairs)


def has_derivation(name: Union[str, PresetName]) -> bool:
    return bool(catalog_settings.presets[_resolve_name(name)].derivation)


def rule_census(p: Presentation) -> Dict[str, int]:
    """Rule counts keyed by the families of the lhs letters, e.g. 'derivative·coordinate'."""
    census: Dict[str, int] = {}
    for a, b in p.rules:
        key = f"{p.alphabet[a].family.value}·{p.alphabet[b].family.value}"
        census[key] = census.get(key, 0) + 1
    return dict(sorted(census.items()))


def describe_preset(name: Union[str, PresetName]) -> dict:
    resolved = _resolve_name(name)
    p = build_preset(resolved)
    return {
        "name": resolved,
        "description": catalog_settings.presets[resolved].description,
        "generators": [
            {"token": g.name, "family": g.family.value, "parity": g.parity.value, "label": g.label}
            for g in p.alphabet
        ],
        "rules": len(p.rules),
        "nilpotents": [p.alphabet[g].name for g in sorted(p.nilpotents)],
        "census": rule_census(p),
    }


# Twistor bilinears realizing the null-vector components
REALIZATION_WORDS: Dict[str, Tuple[str, str]] = {
    "X11": ("x", "xb"),
    "X12": ("x", "yb"),
    "X21": ("y", "xb"),
    "X22": ("y", "yb"),
}


def realization_map() -> Morphism:
    """ρ from nullvector-diff (and nullvector) into the twistor calculus."""
    src = build_preset(PresetName.NULLVECTOR_DIFF)
    dst = build_preset(PresetName.TWISTOR)
    d = derivation_table(PresetName.TWISTOR)
    images: Dict[int, Element] = {}
    for coordinate, word in REALIZATION_WORDS.items():
        image = normalize(dst.monomial(*word), dst)
        images[src.gid(coordinate)] = image
        images[src.gid("d" + coordinate)] = apply_derivation(image, d, dst)
    return Morphism(images=images, action=CoefficientAction.IDENTITY, name="realization")


def automorphism() -> Morphism:
    """x <-> y, δx <-> δy together with q -> q^{-1}; shared by the quantum-plane presets."""
    p = build_preset(PresetName.QPLANE_SHORT)
    swap = {"x": "y", "y": "x", "dx": "dy", "dy": "dx"}
    return Morphism(
        images={p.gid(src): p.monomial(dst) for src, dst in swap.items()},
        action=CoefficientAction.INVERT_Q,
        name="automorphism",
    )


def momentum_map() -> Morphism:
    """D_{AȦ} -> i·P_{AȦ}, from P = -i D."""
    src = build_preset(PresetName.DERIV_ONLY)
    dst = build_preset(PresetName.MOMENTUM)
    return Morphism(
        images={
            src.gid(g.name): dst.monomial("P" + g.name[1:], coeff=QLaurent.coerce(IMAGINARY_UNIT))
            for g in src.alphabet
        },
        name="momentum",
    )


_NAMED_ELEMENTS: Dict[str, Tuple[str, str]] = {
    "qdet": ("nullvector", "X11 X22 - q^2 X12 X21"),
    "qdalembertian": ("deriv-only", "D11 D22 - q^2 D12 D21"),
    "qdet-momentum": ("momentum", "P11 P22 - q^2 P12 P21"),
}


def named_element_names() -> List[str]:
    return sorted(list(_NAMED_ELEMENTS) + ["qdet-twistor", "qdalembertian-momentum"])


def named_element_preset(name: str) -> str:
    if name == "qdet-twistor":
        return PresetName.TWISTOR.value
    if name == "qdalembertian-momentum":
        return PresetName.MOMENTUM.value
    if name not in _NAMED_ELEMENTS:
        raise KeyError(f"Unknown named element '{name}'")
    return _NAMED_ELEMENTS[name][0]


def named_element(name: str) -> Element:
    """
    Named elements of the catalog, as written (not normalized).

    ``qdet-twistor`` is the word-by-word twistor image of ``qdet`` and
    ``qdalembertian-momentum`` is ``qdalembertian`` under D -> i·P.
    """
    if name == "qdet-twistor":
        src = build_preset(PresetName.NULLVECTOR)
        dst = build_preset(PresetName.TWISTOR)
        qdet = named_element("qdet")
        return Element.from_terms(
            (sum((dst.word(*REALIZATION_WORDS[src.alphabet[g].name]) for g in word), ()), c)
            for word, c in qdet.terms.items()
        )
    if name == "qdalembertian-momentum":
        return apply_morphism(
            named_element("qdalembertian"),
            momentum_map(),
            build_preset(PresetName.DERIV_ONLY),
            build_preset(PresetName.MOMENTUM),
        )
    preset, text = _NAMED_ELEMENTS.get(name, (None, None))
    if preset is None:
        raise KeyError(f"Unknown named element '{name}'")
    return parse_element(text, build_preset(preset))


@dataclass(frozen=True)
class EpsilonTensor:
    upper: Tuple[Tuple[QLaurent, QLaurent], Tuple[QLaurent, QLaurent]]
    lower: Tuple[Tuple[QLaurent, QLaurent], Tuple[QLaurent, QLaurent]]


def epsilon_tensor() -> EpsilonTensor:
    zero = QLaurent.zero()
    return EpsilonTensor(
        upper=((zero, q(Fraction(1, 2))), (-q(Fraction(-1, 2)), zero)),
        lower=((zero, -q(Fraction(-1, 2))), (q(Fraction(1, 2)), zero)),
    )


def eps_contract(t: EpsilonTensor) -> QLaurent:
    """Σ_{A,B} ε^{AB} ε_{BA}."""
    total = QLaurent.zero()
    for a in range(2):
        for b in range(2):
            total = total + t.upper[a][b] * t.lower[b][a]
    return total


def eps_null(t: EpsilonTensor, p: Optional[Presentation] = None) -> Element:
    """normalize(Σ φ^A φ^B ε_{AB}) with φ = (x, y)."""
    p = p or build_preset(PresetName.TWISTOR)
    phi = ("x", "y")
    terms = [
        (p.word(phi[a], phi[b]), t.lower[a][b])
        for a in range(2)
        for b in range(2)
        if t.lower[a][b]
    ]
    return normalize(Element.from_terms(terms), p)
