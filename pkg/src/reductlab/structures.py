"""Finite relational structures and the two base catalogs.

A base catalog fixes an infinite homogeneous structure by its finite data:
the signature, the maximal relation arity (2 for every catalog here), and a
finite list of forbidden substructures (bounds).  A finite structure belongs
to the age of the base exactly when no bound embeds into it; both catalogs
are universal for their ages, which is what lets satisfiability questions
over the infinite base reduce to the existence of a consistent finite type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import InvalidStructure, UnsupportedBase

Q_ORDER = "q-order"
RANDOM_GRAPH = "random-graph"
ORDERED_RANDOM_GRAPH = "ordered-random-graph"
EQUALITY = "equality"

BASE_TAGS = (Q_ORDER, RANDOM_GRAPH, ORDERED_RANDOM_GRAPH, EQUALITY)


@dataclass(frozen=True)
class FiniteStructure:
    """A finite relational structure over an explicit signature.

    Tuples are index tuples into range(size).  JSON form:
    {"sig": [[name, arity], ...], "n": size, "rels": {name: [[...], ...]}}.
    """

    signature: tuple[tuple[str, int], ...]
    size: int
    relations: Mapping[str, frozenset[tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        rels = {name: frozenset(tuple(t) for t in tuples)
                for name, tuples in self.relations.items()}
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "signature", tuple((n, a) for n, a in self.signature))
        arities = dict(self.signature)
        for name, tuples in rels.items():
            if name not in arities:
                raise InvalidStructure(f"relation {name!r} not in signature")
            for t in tuples:
                if len(t) != arities[name]:
                    raise InvalidStructure(f"tuple {t} has wrong arity for {name!r}")
                if any(i < 0 or i >= self.size for i in t):
                    raise InvalidStructure(f"tuple {t} out of range for size {self.size}")

    def tuples(self, name: str) -> frozenset[tuple[int, ...]]:
        return self.relations.get(name, frozenset())

    def to_json(self) -> dict:
        return {
            "sig": [[n, a] for n, a in self.signature],
            "n": self.size,
            "rels": {name: sorted(list(t) for t in tuples)
                     for name, tuples in sorted(self.relations.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteStructure":
        return cls(
            signature=tuple((n, a) for n, a in data["sig"]),
            size=data["n"],
            relations={name: frozenset(tuple(t) for t in tuples)
                       for name, tuples in data.get("rels", {}).items()},
        )


def chain(n: int) -> FiniteStructure:
    """The n-element linear order as a finite structure."""
    lt = frozenset((i, j) for i in range(n) for j in range(n) if i < j)
    return FiniteStructure((("<", 2),), n, {"<": lt})


def graph_structure(n: int, edges: Iterator[tuple[int, int]],
                    ordered: bool = False) -> FiniteStructure:
    """A finite (optionally ordered) graph; edges stored symmetrically."""
    sym = frozenset(p for i, j in edges for p in ((i, j), (j, i)))
    rels = {"E": sym}
    sig = [("E", 2)]
    if ordered:
        sig.append(("<", 2))
        rels["<"] = frozenset((i, j) for i in range(n) for j in range(n) if i < j)
    return FiniteStructure(tuple(sig), n, rels)


# Bounds.  Sizes never exceed 3; together they pin each age exactly:
# a finite {<}-structure avoiding loop, non-total pair, 2-cycle and 3-cycle
# is a linear order (totality is per pair, transitivity follows from the
# 2- and 3-cycle exclusions), and a finite {E}-structure avoiding the loop
# and the asymmetric pair is a graph.

def _order_bounds() -> tuple[FiniteStructure, ...]:
    s = (("<", 2),)
    loop = FiniteStructure(s, 1, {"<": {(0, 0)}})
    non_total = FiniteStructure(s, 2, {"<": set()})
    two_cycle = FiniteStructure(s, 2, {"<": {(0, 1), (1, 0)}})
    three_cycle = FiniteStructure(s, 3, {"<": {(0, 1), (1, 2), (2, 0)}})
    return (loop, non_total, two_cycle, three_cycle)


def _graph_bounds() -> tuple[FiniteStructure, ...]:
    s = (("E", 2),)
    loop = FiniteStructure(s, 1, {"E": {(0, 0)}})
    asym = FiniteStructure(s, 2, {"E": {(0, 1)}})
    return (loop, asym)


def _ordered_graph_bounds() -> tuple[FiniteStructure, ...]:
    sig = (("E", 2), ("<", 2))

    def lift(b: FiniteStructure) -> FiniteStructure:
        return FiniteStructure(sig, b.size, dict(b.relations))

    return tuple(lift(b) for b in _graph_bounds() + _order_bounds())


@dataclass(frozen=True)
class BaseCatalog:
    """One of the supported base structures, given by its finite data."""

    tag: str
    signature: tuple[tuple[str, int], ...]
    bounds: tuple[FiniteStructure, ...]
    max_relation_arity: int = 2

    @property
    def is_graph_like(self) -> bool:
        return self.tag in (RANDOM_GRAPH, ORDERED_RANDOM_GRAPH, EQUALITY)

    @property
    def is_ordered(self) -> bool:
        return self.tag in (Q_ORDER, ORDERED_RANDOM_GRAPH)

    @property
    def has_edges(self) -> bool:
        return self.tag in (RANDOM_GRAPH, ORDERED_RANDOM_GRAPH)


BASES: dict[str, BaseCatalog] = {
    Q_ORDER: BaseCatalog(Q_ORDER, (("<", 2),), _order_bounds()),
    RANDOM_GRAPH: BaseCatalog(RANDOM_GRAPH, (("E", 2),), _graph_bounds()),
    ORDERED_RANDOM_GRAPH: BaseCatalog(
        ORDERED_RANDOM_GRAPH, (("E", 2), ("<", 2)), _ordered_graph_bounds()),
    EQUALITY: BaseCatalog(EQUALITY, (), ()),
}


def get_base(tag: str) -> BaseCatalog:
    try:
        return BASES[tag]
    except KeyError:
        raise UnsupportedBase(f"unknown base tag {tag!r}; expected one of {BASE_TAGS}")


def embeddings(p: FiniteStructure, s: FiniteStructure) -> list[tuple[int, ...]]:
    """All embeddings of p into s: injective maps preserving every relation
    in both directions.  Returned as tuples (image of 0, image of 1, ...)."""
    if set(dict(p.signature)) != set(dict(s.signature)):
        raise InvalidStructure("signature mismatch between pattern and structure")
    rels = [name for name, _ in p.signature]
    out: list[tuple[int, ...]] = []

    def compatible(partial: list[int], nxt: int) -> bool:
        k = len(partial)
        for name in rels:
            pt, st = p.tuples(name), s.tuples(name)
            for t in itertools.product(range(k + 1), repeat=dict(p.signature)[name]):
                if any(i == k for i in t):
                    image = tuple(nxt if i == k else partial[i] for i in t)
                    if (t in pt) != (image in st):
                        return False
        return True

    def extend(partial: list[int]):
        if len(partial) == p.size:
            out.append(tuple(partial))
            return
        for cand in range(s.size):
            if cand in partial:
                continue
            if compatible(partial, cand):
                partial.append(cand)
                extend(partial)
                partial.pop()

    extend([])
    return out


def check_age(base: BaseCatalog | str, s: FiniteStructure) -> bool:
    """True iff no bound of the base embeds into s."""
    if isinstance(base, str):
        base = get_base(base)
    want = set(dict(base.signature))
    have = set(dict(s.signature))
    if want != have:
        raise InvalidStructure(
            f"structure signature {sorted(have)} does not match base {base.tag}")
    return all(not embeddings(b, s) for b in base.bounds)
