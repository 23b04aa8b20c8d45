"""
Solver for the unknown exponents of the twistor-conjugate relations.

The ansatz x x̄ = q^n x̄ x, x ȳ = q^m ȳ x, y x̄ = q^k x̄ y, y ȳ = q^l ȳ y is
combined with x y = q y x and its conjugate into a presentation whose
coefficients are q-monomials with affine exponents. Realizing the null-vector
relations in it and matching the monomials that must cancel yields linear
equations in (n, m, k, l), solved exactly with sympy.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy

from .ncalg import Element, Presentation, RewriteRule, normalize, star_element
from .presets import REALIZATION_WORDS, PresetName, build_preset, printed_relations
from .qcoeff import GaussRat, QLaurent

logger = logging.getLogger(__name__)

UNKNOWNS: Tuple[str, ...] = ("n", "m", "k", "l")


class InconsistentSystem(ValueError):
    pass


@dataclass(frozen=True)
class ExponentForm:
    """constant + Σ coefficient·unknown, over the rationals."""

    constant: Fraction = Fraction(0)
    coefficients: Tuple[Tuple[str, Fraction], ...] = ()

    @classmethod
    def build(cls, constant=0, coefficients: Optional[Mapping[str, Fraction]] = None) -> "ExponentForm":
        coefficients = coefficients or {}
        for name in coefficients:
            if name not in UNKNOWNS:
                raise ValueError(f"Unknown exponent '{name}'")
        return cls(
            Fraction(constant),
            tuple((u, Fraction(coefficients[u])) for u in UNKNOWNS if coefficients.get(u)),
        )

    @classmethod
    def var(cls, name: str) -> "ExponentForm":
        return cls.build(0, {name: 1})

    @classmethod
    def const(cls, value) -> "ExponentForm":
        return cls.build(value)

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.coefficients)

    def coefficient(self, name: str) -> Fraction:
        return self.as_dict().get(name, Fraction(0))

    @property
    def is_constant(self) -> bool:
        return not self.coefficients

    def __bool__(self) -> bool:
        return bool(self.constant) or bool(self.coefficients)

    def __add__(self, other: "ExponentForm") -> "ExponentForm":
        acc = self.as_dict()
        for name, c in other.coefficients:
            acc[name] = acc.get(name, Fraction(0)) + c
        return ExponentForm.build(self.constant + other.constant, acc)

    def __neg__(self) -> "ExponentForm":
        return ExponentForm(-self.constant, tuple((u, -c) for u, c in self.coefficients))

    def __sub__(self, other: "ExponentForm") -> "ExponentForm":
        return self + (-other)

    def scale(self, factor) -> "ExponentForm":
        factor = Fraction(factor)
        return ExponentForm.build(self.constant * factor, {u: c * factor for u, c in self.coefficients})

    def substitute(self, values: Mapping[str, "ExponentForm"]) -> "ExponentForm":
        result = ExponentForm.const(self.constant)
        for name, c in self.coefficients:
            result = result + (values[name] if name in values else ExponentForm.var(name)).scale(c)
        return result

    def sort_key(self):
        return self.constant, self.coefficients

    def __str__(self) -> str:
        parts = []
        for name, c in self.coefficients:
            if c == 1:
                parts.append(f"+ {name}")
            elif c == -1:
                parts.append(f"- {name}")
            else:
                parts.append(f"{'-' if c < 0 else '+'} {abs(c)}{name}")
        if self.constant or not parts:
            parts.append(f"{'-' if self.constant < 0 else '+'} {abs(self.constant)}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


@dataclass(frozen=True)
class SymbolicQ:
    """Linear combination of q^form with Gaussian-rational coefficients."""

    terms: Tuple[Tuple[ExponentForm, GaussRat], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[ExponentForm, GaussRat]) -> "SymbolicQ":
        items = [(f, c) for f, c in mapping.items() if c]
        return cls(tuple(sorted(items, key=lambda item: item[0].sort_key())))

    @classmethod
    def power(cls, form: ExponentForm, coeff=1) -> "SymbolicQ":
        return cls.from_mapping({form: GaussRat.coerce(coeff)})

    @classmethod
    def one(cls) -> "SymbolicQ":
        return cls.power(ExponentForm.const(0))

    @classmethod
    def coerce(cls, value) -> "SymbolicQ":
        if isinstance(value, SymbolicQ):
            return value
        value = QLaurent.coerce(value)
        return cls.from_mapping({ExponentForm.const(e): c for e, c in value.monomials()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other) -> "SymbolicQ":
        other = SymbolicQ.coerce(other)
        acc = dict(self.terms)
        for f, c in other.terms:
            acc[f] = acc.get(f, GaussRat()) + c
        return SymbolicQ.from_mapping(acc)

    __radd__ = __add__

    def __neg__(self) -> "SymbolicQ":
        return SymbolicQ(tuple((f, -c) for f, c in self.terms))

    def __sub__(self, other) -> "SymbolicQ":
        return self + (-SymbolicQ.coerce(other))

    def __mul__(self, other) -> "SymbolicQ":
        other = SymbolicQ.coerce(other)
        acc: Dict[ExponentForm, GaussRat] = {}
        for f1, c1 in self.terms:
            for f2, c2 in other.terms:
                key = f1 + f2
                acc[key] = acc.get(key, GaussRat()) + c1 * c2
        return SymbolicQ.from_mapping(acc)

    __rmul__ = __mul__

    def star(self) -> "SymbolicQ":
        return SymbolicQ.from_mapping({-f: c.conjugate() for f, c in self.terms})

    def invert_q(self) -> "SymbolicQ":
        return SymbolicQ.from_mapping({-f: c for f, c in self.terms})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c} q^({f})" for f, c in self.terms)


@dataclass(frozen=True)
class Constraint:
    form: ExponentForm
    provenance: str

    @property
    def unsatisfiable(self) -> bool:
        """A nonzero constant: the marker emitted for an impossible matching."""
        return self.form.is_constant and bool(self.form)

    def __str__(self) -> str:
        return f"{self.form} = 0"


@dataclass
class ExponentSystem:
    equations: List[Constraint] = field(default_factory=list)

    @property
    def has_unsatisfiable_marker(self) -> bool:
        return any(c.unsatisfiable for c in self.equations)

    def forms(self) -> List[ExponentForm]:
        return [c.form for c in self.equations]

    def extend(self, constraints: Iterable[Constraint]) -> "ExponentSystem":
        return ExponentSystem(self.equations + list(constraints))


@dataclass(frozen=True)
class Ansatz:
    """Exponents of the four diagonal relations; defaults to the unknowns themselves."""

    n: ExponentForm = field(default_factory=lambda: ExponentForm.var("n"))
    m: ExponentForm = field(default_factory=lambda: ExponentForm.var("m"))
    k: ExponentForm = field(default_factory=lambda: ExponentForm.var("k"))
    l: ExponentForm = field(default_factory=lambda: ExponentForm.var("l"))  # noqa: E741

    @classmethod
    def fixed(cls, **values) -> "Ansatz":
        return cls(**{name: ExponentForm.const(v) for name, v in values.items()})

    def substitute(self, values: Mapping[str, ExponentForm]) -> "Ansatz":
        return Ansatz(
            n=self.n.substitute(values),
            m=self.m.substitute(values),
            k=self.k.substitute(values),
            l=self.l.substitute(values),
        )


def ansatz_presentation(ansatz: Ansatz) -> Presentation:
    """Twistor components with x y = q y x, its conjugate, and the four ansatz relations."""
    alphabet = build_preset(PresetName.TWISTOR).alphabet[:4]
    x, xb, y, yb = range(4)

    def rule(lhs, word, exponent: ExponentForm) -> Tuple[Tuple[int, int], RewriteRule]:
        return lhs, RewriteRule(lhs, Element.monomial(word, SymbolicQ.power(exponent)), "ansatz")

    rules = dict(
        [
            rule((y, x), (x, y), ExponentForm.const(-1)),
            rule((yb, xb), (xb, yb), ExponentForm.const(-1)),
            rule((xb, x), (x, xb), -ansatz.n),
            rule((yb, x), (x, yb), -ansatz.m),
            rule((y, xb), (xb, y), ansatz.k),
            rule((yb, y), (y, yb), -ansatz.l),
        ]
    )
    return Presentation(name="twistor-ansatz", alphabet=alphabet, rules=rules, one=SymbolicQ.one())


def _realize(e: Element, p: Presentation) -> Element:
    src = build_preset(PresetName.NULLVECTOR)
    return Element.from_terms(
        (
            sum((p.word(*REALIZATION_WORDS[src.alphabet[g].name]) for g in word), ()),
            SymbolicQ.coerce(c),
        )
        for word, c in e.terms.items()
    )


def _matchings(terms: Sequence[Tuple[ExponentForm, GaussRat]]) -> List[List[Tuple[ExponentForm, ExponentForm]]]:
    """Perfect matchings of cancelling terms whose exponents can be equal."""
    if not terms:
        return [[]]
    (f0, c0), rest = terms[0], list(terms[1:])
    found = []
    for idx, (f, c) in enumerate(rest):
        if not (c0 + c) and not (f0 - f).is_constant:
            for tail in _matchings(rest[:idx] + rest[idx + 1 :]):
                found.append([(f0, f)] + tail)
    return found


def _constraints_from(element: Element, p: Presentation, provenance: str) -> List[Constraint]:
    constraints: List[Constraint] = []
    for word, coeff in element.items():
        where = f"{provenance} @ {p.word_text(word)}"
        options = _matchings(list(coeff.terms))
        if not options:
            constraints.append(Constraint(ExponentForm.const(1), where))
            continue
        if len(options) > 1:
            logger.warning(f"{where}: {len(options)} monomial matchings, using the first")
        constraints.extend(Constraint(a - b, where) for a, b in options[0])
    return constraints


def generate_constraints(
    ansatz: Optional[Ansatz] = None, targets: Optional[Sequence[Tuple[str, Element, Element]]] = None
) -> ExponentSystem:
    """
    Realizes each target relation in the ansatz presentation and matches the
    surviving monomials.

    Args:
        ansatz: exponent forms of the four relations (unknowns by default).
        targets: (label, lhs, rhs) over the null-vector coordinates; defaults
            to the printed null-vector table.

    Returns:
        Equations in insertion order, each tagged with the relation and word
        it came from.
    """
    ansatz = ansatz or Ansatz()
    if targets is None:
        targets = printed_relations(PresetName.NULLVECTOR)
    p = ansatz_presentation(ansatz)
    system = ExponentSystem()
    for label, lhs, rhs in targets:
        reduced = normalize(_realize(lhs - rhs, p), p)
        system.equations.extend(_constraints_from(reduced, p, label))
    return system


def star_closure_constraints(ansatz: Optional[Ansatz] = None) -> List[Constraint]:
    """Equations making the involution map every ansatz rule into the ideal."""
    ansatz = ansatz or Ansatz()
    p = ansatz_presentation(ansatz)
    constraints: List[Constraint] = []
    for label, relation in p.rule_relations():
        constraints.extend(_constraints_from(star_element(relation, p), p, f"star({label})"))
    return constraints


def reality_constraints() -> List[Constraint]:
    """x commutes with its conjugate."""
    return [Constraint(ExponentForm.var("n"), "reality")]


def _matrix(forms: Sequence[ExponentForm], columns: Sequence[str]) -> sympy.Matrix:
    rows = [
        [sympy.Rational(f.coefficient(u).numerator, f.coefficient(u).denominator) for u in columns]
        + [sympy.Rational(-f.constant.numerator, f.constant.denominator)]
        for f in forms
    ]
    return sympy.Matrix(rows) if rows else sympy.zeros(0, len(columns) + 1)


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def row_reduce(forms: Sequence[ExponentForm], columns: Sequence[str] = UNKNOWNS) -> List[ExponentForm]:
    """Nonzero rows of the reduced row echelon form, as forms (row = 0)."""
    matrix = _matrix(forms, columns)
    if matrix.rows == 0:
        return []
    reduced, _ = matrix.rref()
    result = []
    for i in range(reduced.rows):
        row = [_fraction(v) for v in reduced.row(i)]
        form = ExponentForm.build(-row[-1], dict(zip(columns, row[:-1])))
        if form:
            result.append(form)
    return result


@dataclass(frozen=True)
class ExponentSolution:
    """Affine solution family: every unknown as a form over the free unknowns."""

    values: Mapping[str, ExponentForm]
    free: Tuple[str, ...]

    @property
    def is_point(self) -> bool:
        return not self.free

    def point(self) -> Dict[str, int]:
        if not self.is_point:
            raise ValueError(f"solution has free unknowns {self.free}")
        return {u: int(self.values[u].constant) for u in UNKNOWNS}

    def __str__(self) -> str:
        return ", ".join(f"{u} = {self.values[u]}" for u in UNKNOWNS)


def solve(
    system: ExponentSystem,
    *,
    with_reality: bool = False,
    with_star_closure: bool = False,
) -> ExponentSolution:
    """
    Exact Gaussian elimination over the rationals.

    Pivots are taken in the order l, k, m, n so that n is the parameter of a
    one-dimensional family. Raises InconsistentSystem when there is no
    (integer) solution.
    """
    constraints = list(system.equations)
    if with_reality:
        constraints.extend(reality_constraints())
    if with_star_closure:
        constraints.extend(star_closure_constraints())

    markers = [c for c in constraints if c.unsatisfiable]
    if markers:
        raise InconsistentSystem(f"unsatisfiable: {markers[0].provenance}")

    columns = tuple(reversed(UNKNOWNS))
    matrix = _matrix([c.form for c in constraints], columns)
    values: Dict[str, ExponentForm] = {}
    pivots: Tuple[int, ...] = ()
    if matrix.rows:
        reduced, pivots = matrix.rref()
        for i in range(reduced.rows):
            row = [_fraction(v) for v in reduced.row(i)]
            if not any(row[:-1]) and row[-1]:
                raise InconsistentSystem(f"0 = {row[-1]} after elimination")
            if i < len(pivots):
                pivot = pivots[i]
                rest = {
                    columns[j]: -row[j] for j in range(len(columns)) if j != pivot and row[j]
                }
                values[columns[pivot]] = ExponentForm.build(row[-1], rest)
    free = tuple(u for u in UNKNOWNS if u not in values)
    for u in free:
        values[u] = ExponentForm.var(u)

    for u, form in values.items():
        if form.constant.denominator != 1 or any(c.denominator != 1 for _, c in form.coefficients):
            raise InconsistentSystem(f"{u} = {form} has no integer solution family")

    logger.info(f"exponent solution: {', '.join(f'{u} = {values[u]}' for u in UNKNOWNS)}")
    return ExponentSolution(values={u: values[u] for u in UNKNOWNS}, free=free)


def closure_residuals(solution: ExponentSolution, targets=None) -> List[Constraint]:
    """Equations that remain after substituting the solution into the ansatz (empty when it closes)."""
    ansatz = Ansatz().substitute(solution.values)
    return [c for c in generate_constraints(ansatz, targets).equations if c.form]
