"""Named relations over the base catalogs, and the small Boolean structures
used as hardness targets.

Every relation here is materialized as its exact set of types, either by
normalizing a defining formula or by filtering the type space with a
predicate.  Names are stable CLI identifiers.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import ReductLabError, UnsupportedBase
from .structures import EQUALITY, Q_ORDER, RANDOM_GRAPH, get_base
from .types import (
    ConstantConfig,
    GraphType,
    SituatedType,
    WeakOrderType,
    enumerate_types,
    no_constants,
)
from .formulas import Language, Relation, normalize, parse_qf, relation_from_predicate

__all__ = [
    "builtin_relation", "builtin_names", "language_from_names", "language",
    "boolean_structure", "boolean_names", "BooleanRelation", "BooleanStructure",
    "lift_to_order", "to_equality_base", "is_equality_determined",
]


def _distinct(t: SituatedType) -> bool:
    core = t.core
    if isinstance(core, WeakOrderType):
        return core.n_blocks == core.arity
    return core.n_blocks == core.arity


def _edge_count(core: GraphType) -> int:
    return len(core.edges)


def _graph_iso(core: GraphType, edge_lists: list[set[frozenset[int]]]) -> bool:
    """Does the (all-distinct) core match one of the prototype edge sets up to
    permuting vertices?"""
    import itertools
    n = core.n_blocks
    edges = {frozenset(e) for e in core.edges}
    for proto in edge_lists:
        for perm in itertools.permutations(range(n)):
            if {frozenset({perm[a]for a in e}) for e in proto} == edges:
                return True
    return False


def _parity(core: GraphType, block_ids: list[int]) -> int:
    cnt = 0
    for i, a in enumerate(block_ids):
        for b in block_ids[i + 1:]:
            if (min(a, b), max(a, b)) in core.edges:
                cnt += 1
    return cnt % 2


def _q(formula: str, nvars: int, name: str) -> Relation:
    names = [f"x{i + 1}" for i in range(nvars)]
    return normalize(parse_qf(formula, Q_ORDER, names), name=name)


@lru_cache(maxsize=None)
def builtin_relation(name: str, base: str | None = None) -> Relation:
    """Look up a named relation, optionally pinned to a base catalog."""
    if name in ("eq", "neq", "="):
        tag = base or Q_ORDER
        types = enumerate_types(tag, 2)
        want_eq = name != "neq"
        picked = frozenset(
            t for t in types
            if ((t.core.n_blocks == 1) if want_eq else (t.core.n_blocks == 2)))
        return Relation("eq" if want_eq else "neq", tag, 2, picked)

    if name == "<":
        tag = base or Q_ORDER
        if not get_base(tag).is_ordered:
            raise UnsupportedBase("'<' needs an ordered base")
        return _order_atom(tag, "<")
    if name == ">":
        tag = base or Q_ORDER
        return _order_atom(tag, ">")

    if name in ("Betw", "Cycl", "Sep", "T3", "mT3"):
        if base not in (None, Q_ORDER):
            raise UnsupportedBase(f"{name} lives over {Q_ORDER}")
        if name == "Betw":
            return _q("x1<x2 & x2<x3 | x3<x2 & x2<x1", 3, "Betw")
        if name == "Cycl":
            return _q("(x1<x2 & x2<x3) | (x2<x3 & x3<x1) | (x3<x1 & x1<x2)",
                      3, "Cycl")
        if name == "Sep":
            chains = ["x1 x3 x2 x4", "x1 x4 x2 x3", "x2 x3 x1 x4", "x2 x4 x1 x3",
                      "x3 x1 x4 x2", "x3 x2 x4 x1", "x4 x1 x3 x2", "x4 x2 x3 x1"]
            disj = []
            for ch in chains:
                vs = ch.split()
                disj.append(" & ".join(f"{a}<{b}" for a, b in zip(vs, vs[1:])))
            return _q(" | ".join(f"({d})" for d in disj), 4, "Sep")
        if name == "T3":
            return _q("(x1=x2 & x2<x3) | (x1=x3 & x3<x2)", 3, "T3")
        if name == "mT3":
            return _q("(x1=x2 & x3<x2) | (x1=x3 & x2<x3)", 3, "mT3")

    if name == "E6":
        tag = base or EQUALITY
        pattern = {(True, False, False), (False, True, False), (False, False, True)}

        def pred(t: SituatedType) -> bool:
            c = t.core
            same = (lambda i, j: c.compare(i, j) == "=") \
                if isinstance(c, WeakOrderType) else c.same_class
            return (same(0, 1), same(2, 3), same(4, 5)) in pattern

        return relation_from_predicate("E6", tag, 6, pred)

    graph_names = {"E", "N", "R3", "R4", "R5", "T", "H", "Hlit", "P3", "Q4", "L"}
    if name in graph_names:
        if base not in (None, RANDOM_GRAPH):
            raise UnsupportedBase(f"{name} lives over {RANDOM_GRAPH}")
        return _graph_relation(name)

    raise ReductLabError(f"unknown relation name {name!r}")


def _order_atom(tag: str, direction: str) -> Relation:
    types = enumerate_types(tag, 2)
    picked = frozenset(t for t in types if t.core.compare(0, 1) == direction)
    return Relation(direction, tag, 2, picked)


def _graph_relation(name: str) -> Relation:
    tag = RANDOM_GRAPH

    if name == "E":
        return relation_from_predicate(
            "E", tag, 2, lambda t: _distinct(t) and t.core.adjacent(0, 1))
    if name == "N":
        return relation_from_predicate(
            "N", tag, 2, lambda t: _distinct(t) and not t.core.adjacent(0, 1))

    if name in ("R3", "R4", "R5"):
        k = int(name[1])

        def pred(t: SituatedType) -> bool:
            return _distinct(t) and _parity(t.core, list(range(k))) == 1

        return relation_from_predicate(name, tag, k, pred)

    if name == "T":
        # 4 distinct vertices inducing: one edge; a 2-edge path plus an
        # isolated vertex; a 3-edge path; or a complement of one of these.
        f = frozenset
        protos = [
            {f({0, 1})},                                    # single edge
            {f({0, 1}), f({1, 2})},                         # 2-edge path + isolated
            {f({0, 1}), f({1, 2}), f({2, 3})},              # 3-edge path
        ]
        all_pairs = {f({i, j}) for i in range(4) for j in range(i + 1, 4)}
        protos += [all_pairs - p for p in protos]

        def pred(t: SituatedType) -> bool:
            return _distinct(t) and _graph_iso(t.core, protos)

        return relation_from_predicate("T", tag, 4, pred)

    if name in ("H", "Hlit"):
        non_edge_reading = name == "H"

        def pred(t: SituatedType) -> bool:
            if not _distinct(t):
                return False
            c = t.core
            pairs = [(0, 1), (2, 3), (4, 5)]
            for gi in range(3):
                for gj in range(gi + 1, 3):
                    for u in pairs[gi]:
                        for v in pairs[gj]:
                            crossing_edge = c.adjacent(u, v)
                            if non_edge_reading and crossing_edge:
                                return False
                            if not non_edge_reading and not crossing_edge:
                                return False
            flags = [c.adjacent(i, j) for i, j in pairs]
            if non_edge_reading:
                return flags.count(True) == 1
            return flags.count(False) == 1

        return relation_from_predicate(name, tag, 6, pred)

    if name == "P3":
        def pred(t: SituatedType) -> bool:
            return _distinct(t) and _edge_count(t.core) in (1, 2)

        return relation_from_predicate("P3", tag, 3, pred)

    if name == "Q4":
        def pred(t: SituatedType) -> bool:
            if not _distinct(t):
                return False
            return _edge_count(t.core) in (0, 6)

        return relation_from_predicate("Q4", tag, 4, pred)

    if name == "L":
        def pred(t: SituatedType) -> bool:
            if not _distinct(t):
                return False
            return _parity(t.core, [0, 1, 2]) == _parity(t.core, [3, 4, 5])

        return relation_from_predicate("L", tag, 6, pred)

    raise ReductLabError(f"unknown graph relation {name!r}")


def builtin_names() -> list[tuple[str, str, int, str]]:
    """(name, base, arity, short description) for the whole relation catalog."""
    rows = [
        ("<", Q_ORDER, 2, "x1<x2"),
        ("eq", Q_ORDER, 2, "x1=x2 (any base via --base)"),
        ("neq", Q_ORDER, 2, "x1!=x2 (any base via --base)"),
        ("Betw", Q_ORDER, 3, "x1<x2<x3 or x3<x2<x1"),
        ("Cycl", Q_ORDER, 3, "x1<x2<x3 or x2<x3<x1 or x3<x1<x2"),
        ("Sep", Q_ORDER, 4, "pairs {x1,x3},{x2,x4} separate each other"),
        ("T3", Q_ORDER, 3, "(x1=x2<x3) or (x1=x3<x2)"),
        ("mT3", Q_ORDER, 3, "(x1=x2>x3) or (x1=x3>x2)"),
        ("E6", EQUALITY, 6, "exactly one of the pairs (x1,x2),(x3,x4),(x5,x6) is equal"),
        ("E", RANDOM_GRAPH, 2, "edge"),
        ("N", RANDOM_GRAPH, 2, "distinct non-adjacent pair"),
        ("R3", RANDOM_GRAPH, 3, "3 distinct vertices spanning an odd number of edges"),
        ("R4", RANDOM_GRAPH, 4, "4 distinct vertices spanning an odd number of edges"),
        ("R5", RANDOM_GRAPH, 5, "5 distinct vertices spanning an odd number of edges"),
        ("T", RANDOM_GRAPH, 4, "4 distinct vertices inducing an edge+2 isolated, "
                               "2-edge path+isolated, 3-edge path, or a complement"),
        ("H", RANDOM_GRAPH, 6, "3 cross-independent pairs, exactly one an edge "
                               "(non-edge reading of the cross condition)"),
        ("P3", RANDOM_GRAPH, 3, "3 distinct vertices, neither a clique nor independent"),
        ("Q4", RANDOM_GRAPH, 4, "4 distinct vertices inducing a clique or independent set"),
        ("L", RANDOM_GRAPH, 6, "two distinct triples with equal edge-count parity"),
    ]
    return [(n, b, a, d) for n, b, a, d in rows]


def language_from_names(names: list[str], base: str | None = None,
                        constants: ConstantConfig | None = None,
                        lang_name: str | None = None) -> Language:
    rels = tuple(builtin_relation(n, base) for n in names)
    tag = rels[0].base if rels else (base or Q_ORDER)
    return Language(lang_name or "{" + ",".join(names) + "}", tag, rels,
                    constants or no_constants(tag))


def language(*names: str, base: str | None = None, constants: int = 0,
             lang_name: str | None = None) -> Language:
    """Convenience builder: language('Betw'), language('<', constants=1)...
    The base is inferred from the first base-specific relation."""
    rels: list[Relation] = []
    tag = base
    for n in names:
        r = builtin_relation(n, tag)
        if tag is None:
            tag = r.base
        rels.append(r)
    tag = tag or Q_ORDER
    return Language(lang_name or "{" + ",".join(names) + "}", tag, tuple(rels),
                    ConstantConfig(tag, constants))


# --- equality-pattern helpers -----------------------------------------------

def is_equality_determined(r: Relation) -> bool:
    """Membership depends only on the equality pattern of the tuple."""
    partition_of = _partition_key
    inside = {partition_of(t) for t in r.types}
    return all((partition_of(t) in inside) == (t in r.types)
               for t in enumerate_types(r.base, r.arity, r.constants))


def _partition_key(t: SituatedType):
    core = t.core
    seq = core.ranks if isinstance(core, WeakOrderType) else core.blocks
    renum: dict[int, int] = {}
    for b in seq:
        renum.setdefault(b, len(renum))
    return tuple(renum[b] for b in seq)


def to_equality_base(r: Relation) -> Relation:
    """Re-express an equality-pattern-determined relation over the equality base."""
    if r.constants.count:
        raise ReductLabError("only constant-free relations convert")
    if not is_equality_determined(r):
        raise ReductLabError(f"relation {r.name} is not equality-pattern-determined")
    keys = {_partition_key(t) for t in r.types}
    return relation_from_predicate(r.name, EQUALITY, r.arity,
                                   lambda t: _partition_key(t) in keys)


def lift_to_order(r: Relation) -> Relation:
    """Lift an equality-base relation to the q-order base (same patterns)."""
    if r.base != EQUALITY:
        raise ReductLabError("only equality-base relations lift")
    keys = {_partition_key(t) for t in r.types}
    return relation_from_predicate(r.name, Q_ORDER, r.arity,
                                   lambda t: _partition_key(t) in keys)


# --- Boolean structures -------------------------------------------------------

from dataclasses import dataclass


@dataclass(frozen=True)
class BooleanRelation:
    name: str
    arity: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self):
        object.__setattr__(self, "tuples", frozenset(tuple(t) for t in self.tuples))
        for t in self.tuples:
            if len(t) != self.arity or any(v not in (0, 1) for v in t):
                raise ReductLabError(f"bad Boolean tuple {t} for {self.name}")


@dataclass(frozen=True)
class BooleanStructure:
    name: str
    relations: tuple[BooleanRelation, ...]

    def get(self, name: str) -> BooleanRelation:
        for r in self.relations:
            if r.name == name:
                return r
        raise ReductLabError(f"no Boolean relation {name!r} in {self.name}")


def _bool_rel(name: str, arity: int, pred) -> BooleanRelation:
    import itertools
    tuples = frozenset(t for t in itertools.product((0, 1), repeat=arity) if pred(t))
    return BooleanRelation(name, arity, tuples)


@lru_cache(maxsize=None)
def boolean_structure(name: str) -> BooleanStructure:
    if name == "NAE":
        return BooleanStructure("NAE", (_bool_rel(
            "NAE", 3, lambda t: len(set(t)) == 2),))
    if name == "OIT":
        return BooleanStructure("OIT", (_bool_rel(
            "OIT", 3, lambda t: sum(t) == 1),))
    if name == "TwoOfFour":
        return BooleanStructure("TwoOfFour", (_bool_rel(
            "R", 4, lambda t: sum(t) == 2),))
    if name == "NotAllZeroWithNeg":
        return BooleanStructure("NotAllZeroWithNeg", (
            _bool_rel("R", 3, lambda t: sum(t) >= 1),
            _bool_rel("Neg", 2, lambda t: t[0] != t[1]),
        ))
    if name == "FullTernary":
        return BooleanStructure("FullTernary", (_bool_rel(
            "R", 3, lambda t: True),))
    raise ReductLabError(f"unknown Boolean structure {name!r}")


def boolean_names() -> list[str]:
    return ["NAE", "OIT", "TwoOfFour", "NotAllZeroWithNeg", "FullTernary"]
