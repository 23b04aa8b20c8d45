"""
Derivatives as linear operators on normal-ordered coordinate polynomials.

A derivative is pushed through a sorted coordinate monomial from the left:
crossing X multiplies by c(D, X), meeting its paired coordinate also splits
off the term where that letter is removed, and a derivative reaching the right
end annihilates the term. Operator words act right to left.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

from .ncalg import Element, Family, Presentation, Word, apply_morphism, mul, normalize
from .presets import PresetName, build_preset, momentum_map, named_element
from .qcoeff import QLaurent

logger = logging.getLogger(__name__)

OperatorExpr = Element


class OperatorActionError(ValueError):
    pass


@dataclass(frozen=True)
class OperatorTable:
    """
    Push-through data read off the coordinate-derivative rules.

    ``coefficients`` and ``paired`` are keyed by (derivative id, coordinate id)
    in the derivative-only and coordinate presentations respectively.
    """

    coefficients: Mapping[Tuple[int, int], QLaurent]
    paired: Mapping[int, int]

    @classmethod
    def from_presentation(cls, combined: Presentation, derivs: Presentation, coords: Presentation) -> "OperatorTable":
        coefficients: Dict[Tuple[int, int], QLaurent] = {}
        paired: Dict[int, int] = {}
        for d in combined.ids(Family.DERIVATIVE):
            d_name = combined.alphabet[d].name
            for x in combined.ids(Family.COORDINATE):
                x_name = combined.alphabet[x].name
                rule = combined.rules.get((d, x))
                if rule is None:
                    raise OperatorActionError(f"no push-through rule for {d_name} {x_name}")
                swapped = rule.rhs.coefficient((x, d))
                unit = rule.rhs.coefficient(())
                extra = set(rule.rhs.terms) - {(x, d), ()}
                if swapped is None or extra:
                    raise OperatorActionError(f"rule {d_name} {x_name} is not a push-through rule")
                key = (derivs.gid(d_name), coords.gid(x_name))
                coefficients[key] = swapped
                if unit is not None:
                    if unit != QLaurent.one():
                        raise OperatorActionError(f"rule {d_name} {x_name} has a non-unit constant term")
                    paired[key[0]] = key[1]
        return cls(coefficients=coefficients, paired=paired)


def operator_table(*, corrected: bool = True) -> OperatorTable:
    return OperatorTable.from_presentation(
        build_preset(PresetName.COORD_DERIV, corrected=corrected),
        build_preset(PresetName.DERIV_ONLY),
        build_preset(PresetName.NULLVECTOR),
    )


def _derive_word(d: int, word: Word, coeff: QLaurent, table: OperatorTable, acc: Dict[Word, QLaurent]):
    target = table.paired.get(d)
    factor = coeff
    for j, x in enumerate(word):
        if x == target:
            reduced = word[:j] + word[j + 1 :]
            acc[reduced] = acc.get(reduced, QLaurent.zero()) + factor
        factor = factor * table.coefficients[(d, x)]


def apply_derivative(d: int, f: Element, table: OperatorTable) -> Element:
    acc: Dict[Word, QLaurent] = {}
    for word, coeff in f.terms.items():
        _derive_word(d, word, coeff, table, acc)
    return Element(acc)


def act(op: OperatorExpr, f: Element, *, table: OperatorTable = None) -> Element:
    """
    Left action of an operator on a coordinate polynomial.

    Args:
        op: element of the derivative-only presentation.
        f: element of the null-vector coordinate presentation.

    Returns:
        The normalized coordinate polynomial op(f).
    """
    coords = build_preset(PresetName.NULLVECTOR)
    derivs = build_preset(PresetName.DERIV_ONLY)
    table = table or operator_table()
    if any(g >= len(coords.alphabet) for g in f.letters()):
        raise OperatorActionError("operators act on coordinate polynomials only")
    if any(g >= len(derivs.alphabet) for g in op.letters()):
        raise OperatorActionError("operator words may contain derivatives only")

    f = normalize(f, coords)
    result = Element.zero()
    for op_word, op_coeff in op.terms.items():
        value = f
        for d in reversed(op_word):
            value = apply_derivative(d, value, table)
            if value.is_zero():
                break
        result = result + value.scale(op_coeff)
    return normalize(result, coords)


def derivative(name: str) -> OperatorExpr:
    return build_preset(PresetName.DERIV_ONLY).monomial(name)


def identity_operator() -> OperatorExpr:
    return Element.unit()


def compose(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    return mul(a, b, build_preset(PresetName.DERIV_ONLY))


def box_q() -> OperatorExpr:
    """The q-D'Alembertian D11 D22 - q^2 D12 D21."""
    return normalize(named_element("qdalembertian"), build_preset(PresetName.DERIV_ONLY))


def classical_limit(op: OperatorExpr, order: int) -> Dict[int, OperatorExpr]:
    """Expands every coefficient at q = exp(ih) and regroups by power of h; zero parts are omitted."""
    if order < 0:
        raise ValueError("Truncation order must be non-negative")
    parts: Dict[int, list] = {}
    for word, coeff in op.terms.items():
        series = coeff.expand_h(order)
        for power in range(order + 1):
            c = series.coefficient(power)
            if c:
                parts.setdefault(power, []).append((word, QLaurent.coerce(c)))
    limit = {power: Element.from_terms(terms) for power, terms in sorted(parts.items())}
    return {power: part for power, part in limit.items() if part}


def to_momenta(op: OperatorExpr) -> Element:
    """Rewrites an operator in momenta via D = i·P."""
    return apply_morphism(
        op, momentum_map(), build_preset(PresetName.DERIV_ONLY), build_preset(PresetName.MOMENTUM)
    )
