"""Core semantic structures: polarities, formal concepts, LE-models, Kripke lifting.

A polarity (A, X, I) induces the Galois connection up/down between object
sets and attribute sets; LE-models add I-compatible relations R_box, R_dia
and a concept-valued valuation. Everything here is immutable after
construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

Pair = Tuple[str, str]


class SortError(ValueError):
    """An identifier was used at the wrong sort (object vs attribute)."""


def _as_frozen(items: Iterable[str]) -> FrozenSet[str]:
    return items if isinstance(items, frozenset) else frozenset(items)


@dataclass(frozen=True)
class Polarity:
    """A formal context: objects, attributes, and an incidence relation.

    Declaration order of ``objects`` and ``attributes`` is preserved and
    fixes the iteration order of every derived computation, so outputs are
    deterministic. Object and attribute namespaces must be disjoint.
    """

    objects: Tuple[str, ...]
    attributes: Tuple[str, ...]
    incidence: FrozenSet[Pair]

    def __post_init__(self):
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object identifiers")
        if len(set(self.attributes)) != len(self.attributes):
            raise ValueError("duplicate attribute identifiers")
        overlap = set(self.objects) & set(self.attributes)
        if overlap:
            raise SortError(f"identifiers in both sorts: {sorted(overlap)}")
        for a, x in self.incidence:
            if a not in set(self.objects):
                raise SortError(f"incidence references unknown object {a!r}")
            if x not in set(self.attributes):
                raise SortError(f"incidence references unknown attribute {x!r}")

    @staticmethod
    def make(objects: Iterable[str], attributes: Iterable[str],
             incidence: Iterable[Pair]) -> "Polarity":
        return Polarity(tuple(objects), tuple(attributes),
                        frozenset((a, x) for a, x in incidence))

    def check_objects(self, items: Iterable[str]) -> FrozenSet[str]:
        items = _as_frozen(items)
        bad = items - set(self.objects)
        if bad:
            raise SortError(f"unknown object identifiers: {sorted(bad)}")
        return items

    def check_attributes(self, items: Iterable[str]) -> FrozenSet[str]:
        items = _as_frozen(items)
        bad = items - set(self.attributes)
        if bad:
            raise SortError(f"unknown attribute identifiers: {sorted(bad)}")
        return items

    def up(self, objs: Iterable[str]) -> FrozenSet[str]:
        """B^up = { x | every b in B has b I x }."""
        objs = self.check_objects(objs)
        return frozenset(x for x in self.attributes
                         if all((b, x) in self.incidence for b in objs))

    def down(self, attrs: Iterable[str]) -> FrozenSet[str]:
        """Y^down = { a | every y in Y has a I y }."""
        attrs = self.check_attributes(attrs)
        return frozenset(a for a in self.objects
                         if all((a, y) in self.incidence for y in attrs))

    def stable_objects(self, objs: Iterable[str]) -> bool:
        objs = self.check_objects(objs)
        return self.down(self.up(objs)) == objs

    def stable_attributes(self, attrs: Iterable[str]) -> bool:
        attrs = self.check_attributes(attrs)
        return self.up(self.down(attrs)) == attrs


def galois_up(polarity: Polarity, objs: Iterable[str]) -> FrozenSet[str]:
    """Attributes shared by every object in ``objs`` (the up map of I)."""
    return polarity.up(objs)


def galois_down(polarity: Polarity, attrs: Iterable[str]) -> FrozenSet[str]:
    """Objects bearing every attribute in ``attrs`` (the down map of I)."""
    return polarity.down(attrs)


@dataclass(frozen=True)
class Concept:
    """A Galois-stable (extent, intent) pair.

    Identity and hashing are by extent alone: the intent of a concept is
    determined by its extent.
    """

    extent: FrozenSet[str]
    intent: FrozenSet[str]

    def __eq__(self, other):
        if not isinstance(other, Concept):
            return NotImplemented
        return self.extent == other.extent

    def __hash__(self):
        return hash(self.extent)

    def leq(self, other: "Concept") -> bool:
        return self.extent <= other.extent


def make_concept(polarity: Polarity, objs: Iterable[str]) -> Concept:
    """The smallest concept whose extent contains ``objs``."""
    intent = polarity.up(objs)
    return Concept(polarity.down(intent), intent)


def is_concept(polarity: Polarity, c: Concept) -> bool:
    return (polarity.up(c.extent) == c.intent
            and polarity.down(c.intent) == c.extent)


def top_concept(polarity: Polarity) -> Concept:
    # A is always stable (A^up^down is contained in A and contains it).
    full = frozenset(polarity.objects)
    c = Concept(full, polarity.up(full))
    assert polarity.down(c.intent) == full
    return c


def bottom_concept(polarity: Polarity) -> Concept:
    full = frozenset(polarity.attributes)
    return Concept(polarity.down(full), full)


@dataclass(frozen=True)
class LEModel:
    """A polarity with I-compatible relations R_box, R_dia and a valuation.

    ``r_box`` is a set of (object, attribute) pairs, ``r_dia`` a set of
    (attribute, object) pairs. Construction checks sorts only;
    I-compatibility and concept-hood of the valuation are checked by
    :func:`validate_model`.
    """

    polarity: Polarity
    r_box: FrozenSet[Pair]
    r_dia: FrozenSet[Pair]
    valuation: Mapping[str, Concept]

    def __post_init__(self):
        objs, attrs = set(self.polarity.objects), set(self.polarity.attributes)
        for a, x in self.r_box:
            if a not in objs or x not in attrs:
                raise SortError(f"r_box pair {(a, x)!r} is not object x attribute")
        for x, a in self.r_dia:
            if x not in attrs or a not in objs:
                raise SortError(f"r_dia pair {(x, a)!r} is not attribute x object")
        for p, c in self.valuation.items():
            self.polarity.check_objects(c.extent)
            self.polarity.check_attributes(c.intent)

    @staticmethod
    def make(polarity: Polarity, r_box: Iterable[Pair], r_dia: Iterable[Pair],
             valuation: Mapping[str, Concept]) -> "LEModel":
        return LEModel(polarity, frozenset(tuple(p) for p in r_box),
                       frozenset(tuple(p) for p in r_dia), dict(valuation))

    @property
    def objects(self) -> Tuple[str, ...]:
        return self.polarity.objects

    @property
    def attributes(self) -> Tuple[str, ...]:
        return self.polarity.attributes

    def variables(self) -> Tuple[str, ...]:
        return tuple(sorted(self.valuation))

    # Row/column views of the three relations, used all over the place.
    def i_row(self, a: str) -> FrozenSet[str]:
        return frozenset(x for x in self.attributes if (a, x) in self.polarity.incidence)

    def i_col(self, x: str) -> FrozenSet[str]:
        return frozenset(a for a in self.objects if (a, x) in self.polarity.incidence)

    def box_row(self, a: str) -> FrozenSet[str]:
        return frozenset(x for x in self.attributes if (a, x) in self.r_box)

    def box_col(self, x: str) -> FrozenSet[str]:
        return frozenset(a for a in self.objects if (a, x) in self.r_box)

    def dia_row(self, x: str) -> FrozenSet[str]:
        return frozenset(a for a in self.objects if (x, a) in self.r_dia)

    def dia_col(self, a: str) -> FrozenSet[str]:
        return frozenset(x for x in self.attributes if (x, a) in self.r_dia)


def rel_preimage(model: LEModel, rel: str, targets: Iterable[str],
                 index: int) -> FrozenSet[str]:
    """Universal (pre)image R^(0)/R^(1) of one of the model's relations.

    ``rel`` is one of ``"I"``, ``"box"``, ``"dia"``. For a relation
    R between sorts (S0, S1), index 0 maps a subset of S1 to
    { u in S0 | u R v for all v in targets } and index 1 maps a subset of
    S0 to { v in S1 | u R v for all u in targets }. I and R_box live on
    A x X, R_dia on X x A. Empty targets give the full carrier.
    """
    pol = model.polarity
    if rel == "I":
        pairs, s0, s1 = pol.incidence, pol.objects, pol.attributes
    elif rel == "box":
        pairs, s0, s1 = model.r_box, pol.objects, pol.attributes
    elif rel == "dia":
        pairs, s0, s1 = model.r_dia, pol.attributes, pol.objects
    else:
        raise ValueError(f"unknown relation {rel!r}")
    if index == 0:
        targets = _as_frozen(targets)
        bad = targets - set(s1)
        if bad:
            raise SortError(f"targets {sorted(bad)} not in the codomain sort of {rel}")
        return frozenset(u for u in s0 if all((u, v) in pairs for v in targets))
    if index == 1:
        targets = _as_frozen(targets)
        bad = targets - set(s0)
        if bad:
            raise SortError(f"targets {sorted(bad)} not in the domain sort of {rel}")
        return frozenset(v for v in s1 if all((u, v) in pairs for u in targets))
    raise ValueError("index must be 0 or 1")


@dataclass(frozen=True)
class Violation:
    """One failed validity condition of a candidate LE-model."""

    kind: str  # "r_box_row" | "r_box_col" | "r_dia_row" | "r_dia_col" | "valuation"
    subject: str  # the element or variable the condition is about
    found: FrozenSet[str]
    expected: FrozenSet[str]

    def __str__(self):
        return (f"{self.kind}[{self.subject}]: {sorted(self.found)} is not "
                f"Galois-stable (closure {sorted(self.expected)})")


def validate_model(model: LEModel) -> List[Violation]:
    """Every violated I-compatibility instance and non-concept valuation entry.

    The relations are I-compatible when, for each object a and attribute x,
    the four singleton (pre)images {x' | a R_box x'}, {a' | a' R_box x},
    {a' | x R_dia a'} and {x' | x' R_dia a} are Galois-stable. An empty
    report means the input is a genuine LE-model.
    """
    pol = model.polarity
    out: List[Violation] = []

    def need_stable_attrs(kind, subject, ys):
        closure = pol.up(pol.down(ys))
        if closure != ys:
            out.append(Violation(kind, subject, ys, closure))

    def need_stable_objs(kind, subject, bs):
        closure = pol.down(pol.up(bs))
        if closure != bs:
            out.append(Violation(kind, subject, bs, closure))

    for a in pol.objects:
        need_stable_attrs("r_box_row", a, model.box_row(a))
        need_stable_attrs("r_dia_col", a, model.dia_col(a))
    for x in pol.attributes:
        need_stable_objs("r_box_col", x, model.box_col(x))
        need_stable_objs("r_dia_row", x, model.dia_row(x))
    for p in sorted(model.valuation):
        c = model.valuation[p]
        up = pol.up(c.extent)
        if up != c.intent:
            out.append(Violation("valuation", p, c.intent, up))
        elif pol.down(c.intent) != c.extent:
            out.append(Violation("valuation", p, c.extent, pol.down(c.intent)))
    return out


@dataclass(frozen=True)
class KripkeModel:
    """A plain Kripke model (worlds, accessibility, valuation)."""

    worlds: Tuple[str, ...]
    rel: FrozenSet[Pair]
    valuation: Mapping[str, FrozenSet[str]]

    def __post_init__(self):
        ws = set(self.worlds)
        for u, v in self.rel:
            if u not in ws or v not in ws:
                raise ValueError(f"accessibility pair {(u, v)!r} references unknown world")
        for p, vs in self.valuation.items():
            if not set(vs) <= ws:
                raise ValueError(f"valuation of {p!r} references unknown worlds")

    @staticmethod
    def make(worlds: Iterable[str], rel: Iterable[Pair],
             valuation: Mapping[str, Iterable[str]]) -> "KripkeModel":
        return KripkeModel(tuple(worlds), frozenset(tuple(p) for p in rel),
                           {p: frozenset(v) for p, v in valuation.items()})


def lift_kripke(k: KripkeModel) -> LEModel:
    """The LE-model with objects/attributes two copies of the worlds.

    Incidence is inequality, R_box = R_dia is the complement of the
    accessibility relation, and each variable becomes the concept
    (V(p), W minus V(p)). Every subset is Galois-stable under the
    inequality incidence, so the result always validates cleanly.
    World w is duplicated as w_A (object) and w_X (attribute).
    """
    ws = k.worlds
    objs = tuple(w + "_A" for w in ws)
    attrs = tuple(w + "_X" for w in ws)
    inc = frozenset((u + "_A", v + "_X") for u in ws for v in ws if u != v)
    comp = frozenset((u, v) for u in ws for v in ws if (u, v) not in k.rel)
    r_box = frozenset((u + "_A", v + "_X") for u, v in comp)
    r_dia = frozenset((u + "_X", v + "_A") for u, v in comp)
    pol = Polarity(objs, attrs, inc)
    val = {}
    for p in sorted(k.valuation):
        vs = k.valuation[p]
        val[p] = Concept(frozenset(w + "_A" for w in vs),
                         frozenset(w + "_X" for w in ws if w not in vs))
    return LEModel(pol, r_box, r_dia, val)
