"""
Free-algebra core: words, elements, presentations and their rewriting.

A Presentation is an ordered alphabet plus quadratic rewrite rules keyed by the
out-of-order letter pair they reduce. Normal forms are computed leftmost-first
and memoized per presentation, so ``normalize`` is a well-defined function even
when a presentation is not confluent.

Coefficients are duck-typed ring elements (``+``, ``*``, unary ``-``, truth
value, ``star()``, ``invert_q()``); QLaurent is the default ring, the exponent
solver plugs in its own symbolic one through ``Presentation.one``.
"""

from __future__ import annotations

import enum
import heapq
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from types import MappingProxyType
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .qcoeff import QLaurent
from .schemas import PresentationReport

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Pair = Tuple[int, int]

# normal forms memoized per (word, presentation), shared by the whole process
NORMAL_FORM_CACHE_SIZE = 1 << 16


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


class Family(str, enum.Enum):
    COORDINATE = "coordinate"
    DIFFERENTIAL = "differential"
    DERIVATIVE = "derivative"
    TWISTOR = "twistor"
    MOMENTUM = "momentum"


class CoefficientAction(str, enum.Enum):
    IDENTITY = "identity"
    INVERT_Q = "invert-q"


class ConjugationError(ValueError):
    pass


class DerivationError(ValueError):
    pass


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    id: int
    name: str
    parity: Parity = Parity.EVEN
    family: Family = Family.COORDINATE
    conjugate: Optional[int] = None
    label: str = ""


def _accumulate(acc: Dict[Word, Any], word: Word, coeff) -> None:
    if word in acc:
        acc[word] = acc[word] + coeff
    else:
        acc[word] = coeff


class Element:
    """Finite linear combination of words; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Word, Any]] = None):
        self._terms = {tuple(w): c for w, c in (terms or {}).items() if c}

    @classmethod
    def from_terms(cls, pairs: Iterable[Tuple[Word, Any]]) -> "Element":
        acc: Dict[Word, Any] = {}
        for word, coeff in pairs:
            _accumulate(acc, tuple(word), coeff)
        return cls(acc)

    @classmethod
    def monomial(cls, word: Iterable[int], coeff=None) -> "Element":
        return cls({tuple(word): QLaurent.one() if coeff is None else coeff})

    @classmethod
    def unit(cls, coeff=None) -> "Element":
        return cls.monomial((), coeff)

    @classmethod
    def zero(cls) -> "Element":
        return cls()

    @property
    def terms(self) -> Mapping[Word, Any]:
        return MappingProxyType(self._terms)

    def items(self) -> List[Tuple[Word, Any]]:
        return sorted(self._terms.items(), key=lambda item: (len(item[0]), item[0]))

    def words(self) -> List[Word]:
        return [w for w, _ in self.items()]

    def coefficient(self, word: Iterable[int]):
        return self._terms.get(tuple(word))

    @property
    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "Element") -> "Element":
        return Element.from_terms(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "Element":
        return Element({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, coeff) -> "Element":
        return Element({w: coeff * c for w, c in self._terms.items()})

    def concat(self, other: "Element") -> "Element":
        """Free (unnormalized) product."""
        return Element.from_terms(
            (w1 + w2, c1 * c2)
            for w1, c1 in self._terms.items()
            for w2, c2 in other._terms.items()
        )

    def map_coefficients(self, fn) -> "Element":
        return Element({w: fn(c) for w, c in self._terms.items()})

    def letters(self) -> FrozenSet[int]:
        return frozenset(g for w in self._terms for g in w)

    def __repr__(self) -> str:
        body = ", ".join(f"{w}: {c}" for w, c in self.items())
        return f"Element({{{body}}})"


@dataclass(frozen=True)
class RewriteRule:
    lhs: Pair
    rhs: Element
    source: str = ""


def inversions(word: Word) -> int:
    return sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])


def rule_measure(word: Word) -> Tuple[int, int]:
    """(length, inversions): the rule-local termination measure."""
    return len(word), inversions(word)


def deglex_key(word: Word) -> Tuple[int, Word]:
    """Degree-lexicographic key; compatible with concatenation, so it decreases on every step."""
    return len(word), tuple(word)


@dataclass(frozen=True, eq=False)
class Presentation:
    """
    Ordered alphabet with quadratic rewrite rules.

    Generator ids are their positions in ``alphabet`` and the id order is the
    normal order. ``conflicts`` lists printed relations that disagreed with an
    already stored rule for the same pair; they are reported by validation.
    """

    name: str
    alphabet: Tuple[Generator, ...]
    rules: Mapping[Pair, RewriteRule] = field(default_factory=dict)
    nilpotents: FrozenSet[int] = frozenset()
    conflicts: Tuple[str, ...] = ()
    one: Any = field(default_factory=QLaurent.one)

    @cached_property
    def by_name(self) -> Dict[str, int]:
        return {g.name: g.id for g in self.alphabet}

    def generator(self, name: str) -> Generator:
        return self.alphabet[self.by_name[name]]

    def gid(self, name: str) -> int:
        return self.by_name[name]

    def word(self, *names: str) -> Word:
        return tuple(self.by_name[n] for n in names)

    def monomial(self, *names: str, coeff=None) -> Element:
        return Element.monomial(self.word(*names), self.one if coeff is None else coeff)

    def is_odd(self, gid: int) -> bool:
        return self.alphabet[gid].parity is Parity.ODD

    def ids(self, family: Family) -> List[int]:
        return [g.id for g in self.alphabet if g.family is family]

    def is_redex(self, a: int, b: int) -> bool:
        return (a, b) in self.rules or (a == b and a in self.nilpotents)

    def redexes(self, word: Word) -> List[int]:
        return [i for i in range(len(word) - 1) if self.is_redex(word[i], word[i + 1])]

    def first_redex(self, word: Word) -> Optional[int]:
        for i in range(len(word) - 1):
            if self.is_redex(word[i], word[i + 1]):
                return i
        return None

    def rewrite_at(self, word: Word, position: int) -> Element:
        """One rewrite step at ``position``; the pair there must be a redex."""
        pair = (word[position], word[position + 1])
        prefix, suffix = word[:position], word[position + 2 :]
        rule = self.rules.get(pair)
        if rule is None:
            if pair[0] == pair[1] and pair[0] in self.nilpotents:
                return Element.zero()
            raise KeyError(f"No rule for {self.word_text(pair)} in {self.name}")
        return Element.from_terms((prefix + w + suffix, c) for w, c in rule.rhs.terms.items())

    def word_text(self, word: Word) -> str:
        return " ".join(self.alphabet[g].name for g in word) if word else "1"

    def rule_relations(self) -> List[Tuple[str, Element]]:
        """Every rule and nilpotent square as (label, lhs - rhs)."""
        relations = []
        for pair in sorted(self.rules):
            rule = self.rules[pair]
            relations.append(
                (self.word_text(pair), Element.monomial(pair, self.one) - rule.rhs)
            )
        for g in sorted(self.nilpotents):
            relations.append((self.word_text((g, g)), Element.monomial((g, g), self.one)))
        return relations


def validate_presentation(p: Presentation) -> PresentationReport:
    """
    Checks the rule-shape and termination invariants of a presentation.

    Every problem is collected into the report instead of being raised, so a
    printed table with contradictions can still be inspected.
    """
    violations: List[str] = []
    size = len(p.alphabet)

    seen = set()
    for idx, g in enumerate(p.alphabet):
        if g.name in seen:
            violations.append(f"duplicate generator name '{g.name}'")
        seen.add(g.name)
        if g.id != idx:
            violations.append(f"generator '{g.name}' has id {g.id} but position {idx}")
        if g.conjugate is not None:
            if not 0 <= g.conjugate < size:
                violations.append(f"generator '{g.name}' has an unknown conjugate")
                continue
            partner = p.alphabet[g.conjugate]
            if partner.conjugate != g.id:
                violations.append(f"conjugation is not an involution on '{g.name}'")
            if partner.parity is not g.parity:
                violations.append(f"'{g.name}' and its conjugate differ in parity")

    for pair, rule in sorted(p.rules.items()):
        a, b = pair
        if not (0 <= a < size and 0 <= b < size):
            violations.append(f"rule {pair} uses letters outside the alphabet")
            continue
        label = p.word_text(pair)
        if rule.lhs != pair:
            violations.append(f"rule {label} is stored under a different pair")
        if not a > b:
            violations.append(f"rule {label}: lhs is not an out-of-order pair")
        for word in rule.rhs.terms:
            if any(not 0 <= g < size for g in word):
                violations.append(f"rule {label}: rhs uses letters outside the alphabet")
                continue
            if not rule_measure(word) < rule_measure(pair):
                violations.append(
                    f"rule {label}: rhs word {p.word_text(word)} does not decrease (length, inversions)"
                )
            if not deglex_key(word) < deglex_key(pair):
                violations.append(
                    f"rule {label}: rhs word {p.word_text(word)} does not decrease the degree-lex order"
                )

    for g in sorted(p.nilpotents):
        if not 0 <= g < size:
            violations.append(f"nilpotent id {g} outside the alphabet")

    violations.extend(p.conflicts)
    return PresentationReport(preset=p.name, valid=not violations, violations=violations)


def _heap_key(word: Word) -> Tuple[int, Tuple[int, ...]]:
    # min-heap order that pops the deg-lex largest word first
    return -len(word), tuple(-g for g in word)


@lru_cache(maxsize=NORMAL_FORM_CACHE_SIZE)
def _normal_word(word: Word, p: Presentation) -> Dict[Word, Any]:
    """
    Normal form of a single word under leftmost rewriting.

    Pending words are reduced largest first in deg-lex order. Every rewrite
    step lowers that order, so a word popped from the heap receives no further
    contributions and its accumulated coefficient is final.
    """
    pending: Dict[Word, Any] = {word: p.one}
    heap = [(_heap_key(word), word)]
    result: Dict[Word, Any] = {}
    while heap:
        _, current = heapq.heappop(heap)
        coeff = pending.pop(current)
        if not coeff:
            continue
        position = p.first_redex(current)
        if position is None:
            result[current] = coeff
            continue
        for reduced, c in p.rewrite_at(current, position).terms.items():
            if reduced in pending:
                pending[reduced] = pending[reduced] + coeff * c
            else:
                pending[reduced] = coeff * c
                heapq.heappush(heap, (_heap_key(reduced), reduced))
    return result


def normalize(e: Element, p: Presentation) -> Element:
    acc: Dict[Word, Any] = {}
    for word, coeff in e.terms.items():
        for normal, coeff2 in _normal_word(word, p).items():
            _accumulate(acc, normal, coeff * coeff2)
    return Element(acc)


def mul(a: Element, b: Element, p: Presentation) -> Element:
    return normalize(a.concat(b), p)


def star_element(e: Element, p: Presentation) -> Element:
    """Hermitian conjugation: reverse words, conjugate letters, star the coefficients."""
    acc: Dict[Word, Any] = {}
    for word, coeff in e.terms.items():
        starred = []
        for g in reversed(word):
            partner = p.alphabet[g].conjugate
            if partner is None:
                raise ConjugationError(f"'{p.alphabet[g].name}' has no conjugate in {p.name}")
            starred.append(partner)
        _accumulate(acc, tuple(starred), coeff.star())
    return normalize(Element(acc), p)


@dataclass(frozen=True)
class DerivationTable:
    """Values of the exterior differential on generators; odd generators map to zero."""

    images: Mapping[int, Element]
    odd: FrozenSet[int] = frozenset()

    def __post_init__(self):
        for g in self.odd:
            if self.images.get(g):
                raise DerivationError(f"odd generator {g} must have a zero differential")

    @classmethod
    def from_pairs(cls, p: Presentation, pairs: Mapping[str, str]) -> "DerivationTable":
        images: Dict[int, Element] = {}
        for source, target in pairs.items():
            images[p.gid(source)] = p.monomial(target)
        odd = frozenset(g.id for g in p.alphabet if g.parity is Parity.ODD)
        for g in odd:
            images.setdefault(g, Element.zero())
        return cls(images=images, odd=odd)


def apply_derivation(e: Element, d: DerivationTable, p: Presentation) -> Element:
    """
    Graded Leibniz extension δ(uv) = δ(u)v + (-1)^{|u|} u δ(v), applied to the
    words of ``e`` as given and normalized afterwards.

    Words are not normalized first: δ of a relation ``lhs - rhs`` is zero
    exactly when the differential is compatible with that relation.
    """
    acc: List[Tuple[Word, Any]] = []
    for word, coeff in e.terms.items():
        negative = False
        for i, g in enumerate(word):
            if g not in d.images:
                raise DerivationError(f"'{p.alphabet[g].name}' has no differential in {p.name}")
            prefix, suffix = word[:i], word[i + 1 :]
            for image_word, image_coeff in d.images[g].terms.items():
                value = coeff * image_coeff
                acc.append((prefix + image_word + suffix, -value if negative else value))
            if g in d.odd:
                negative = not negative
    return normalize(Element.from_terms(acc), p)


@dataclass(frozen=True)
class Morphism:
    images: Mapping[int, Element]
    action: CoefficientAction = CoefficientAction.IDENTITY
    name: str = ""

    @classmethod
    def identity(cls, p: Presentation) -> "Morphism":
        return cls(images={g.id: Element.monomial((g.id,), p.one) for g in p.alphabet}, name="id")

    def act_on(self, coeff):
        if self.action is CoefficientAction.INVERT_Q:
            return coeff.invert_q()
        return coeff


def apply_morphism(e: Element, m: Morphism, src: Presentation, dst: Presentation) -> Element:
    """Multiplicative extension word by word, then normalization in ``dst``."""
    acc: List[Tuple[Word, Any]] = []
    for word, coeff in e.terms.items():
        image = Element.unit(dst.one)
        for g in word:
            if g not in m.images:
                raise MorphismError(
                    f"morphism {m.name or '?'} has no image for '{src.alphabet[g].name}'"
                )
            image = image.concat(m.images[g])
        scalar = m.act_on(coeff)
        acc.extend((w, scalar * c) for w, c in image.terms.items())
    return normalize(Element.from_terms(acc), dst)
