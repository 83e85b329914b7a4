"""Behaviors: finite maps on 2-types standing in for canonical functions.

A canonical function between our catalogs is determined by what it does to
2-types (the maximal relation arity of every base is 2), so an m-ary
canonical function over a constant configuration is a finite table from
m-tuples of input 2-types (refined by the constants) to plain output
2-types.

Realizability is local consistency: for every configuration of at most
three points per coordinate, the pairwise outputs must assemble into a
consistent type (weak-order transitivity, respectively equality congruence
with the edge relation).  Three points suffice because the bounds of both
catalogs have at most three elements and the only extra condition, equality
transitivity, is ternary.  The step from this local consistency to an
actual function on the countable base is the standard compactness argument
available for finitely bounded catalogs; the package trusts it and does not
re-prove it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import AssemblyError, CapExceeded, ReductLabError, UnsupportedBase
from .structures import EQUALITY, Q_ORDER, RANDOM_GRAPH, get_base
from .types import (
    ConstantConfig,
    GraphType,
    SituatedType,
    WeakOrderType,
    enumerate_types,
    no_constants,
    refinements,
)
from .formulas import Relation

TableKey = tuple[SituatedType, ...]


@lru_cache(maxsize=500_000)
def _pair_proj(t: SituatedType, i: int, j: int) -> SituatedType:
    return t.project((i, j))


def swap_2type(t: SituatedType) -> SituatedType:
    """The same 2-type with the two variable points exchanged."""
    return _pair_proj(t, 1, 0)


def plain_2types(base: str) -> tuple[SituatedType, ...]:
    return enumerate_types(base, 2)


@dataclass(frozen=True)
class Behavior:
    """A complete behavior: arity m, inputs refined by constants, plain outputs."""

    base: str
    arity: int
    constants: ConstantConfig = field(default=None)  # type: ignore[assignment]
    entries: tuple[tuple[TableKey, SituatedType], ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.constants is None:
            object.__setattr__(self, "constants", no_constants(self.base))
        object.__setattr__(self, "entries", tuple(sorted(
            ((tuple(k), v) for k, v in self.entries),
            key=lambda e: tuple(k.key() for k in e[0]))))
        inputs = enumerate_types(self.base, 2, self.constants)
        table = dict(self.entries)
        expect = set(itertools.product(inputs, repeat=self.arity))
        if set(table) != expect:
            raise ReductLabError(
                f"behavior table is not complete: {len(table)} of {len(expect)} keys")
        for key, out in table.items():
            if out.constants.count or out.arity != 2 or out.base != self.base:
                raise ReductLabError("outputs must be plain 2-types")
            if all(_is_diagonal(k) for k in key) and out.core.n_blocks != 1:
                raise ReductLabError("all-equal inputs must map to the equal type")
            swapped = tuple(swap_2type(k) for k in key)
            if table[swapped] != swap_2type(out):
                raise ReductLabError("table is not symmetric under point swap")
        object.__setattr__(self, "_table", table)

    def table(self) -> dict[TableKey, SituatedType]:
        return self._table  # type: ignore[attr-defined]

    def lookup(self, key: TableKey) -> SituatedType:
        return self._table[tuple(key)]  # type: ignore[attr-defined]

    def renamed(self, name: str) -> "Behavior":
        return Behavior(self.base, self.arity, self.constants, self.entries, name)

    def to_json(self) -> dict:
        return {"base": self.base, "arity": self.arity,
                "constants": self.constants.to_json(),
                "name": self.name,
                "table": {" || ".join(k.key() for k in key): out.key()
                          for key, out in sorted(
                              self.entries,
                              key=lambda e: tuple(k.key() for k in e[0]))}}


def _is_diagonal(t: SituatedType) -> bool:
    core = t.core
    if isinstance(core, WeakOrderType):
        return core.ranks[0] == core.ranks[1]
    return core.blocks[0] == core.blocks[1]


def behavior_from_rule(base: str, arity: int, rule,
                       constants: ConstantConfig | None = None,
                       name: str = "") -> Behavior:
    """Build a behavior from a function (key tuple) -> plain 2-type."""
    config = constants or no_constants(base)
    inputs = enumerate_types(base, 2, config)
    entries = []
    for key in itertools.product(inputs, repeat=arity):
        entries.append((key, rule(key)))
    return Behavior(base, arity, config, tuple(entries), name)


# --- assembling outputs -------------------------------------------------------

def assemble(base: str, n_points: int,
             pairwise: dict[tuple[int, int], SituatedType]) -> SituatedType:
    """Assemble pairwise output 2-types into a single plain type on n points.

    Raises AssemblyError when the pairwise data is inconsistent.
    """
    cat = get_base(base)
    if cat.tag == Q_ORDER:
        def cmp(i: int, j: int) -> str:
            if i == j:
                return "="
            t = pairwise[(min(i, j), max(i, j))]
            c = t.core.compare(0, 1)
            if i > j:
                c = {"<": ">", ">": "<", "=": "="}[c]
            return c

        below = [sum(1 for j in range(n_points) if cmp(j, i) == "<")
                 for i in range(n_points)]
        order = sorted(set(below))
        dense = {v: k for k, v in enumerate(order)}
        ranks = tuple(dense[b] for b in below)
        core = WeakOrderType(ranks)
        for i in range(n_points):
            for j in range(i + 1, n_points):
                if core.compare(i, j) != cmp(i, j):
                    raise AssemblyError(
                        f"pairwise outputs do not form a weak order at ({i},{j})")
        return SituatedType(base, core)

    # graph-like bases: union-find on equalities, then congruence
    parent = list(range(n_points))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def pair(i: int, j: int) -> SituatedType:
        t = pairwise[(min(i, j), max(i, j))]
        return t if i < j else swap_2type(t)

    def is_eq(i: int, j: int) -> bool:
        return pair(i, j).core.n_blocks == 1

    for i in range(n_points):
        for j in range(i + 1, n_points):
            if is_eq(i, j):
                parent[find(i)] = find(j)
    reps: dict[int, int] = {}
    blocks = []
    for p in range(n_points):
        r = find(p)
        reps.setdefault(r, len(reps))
        blocks.append(reps[r])
    nb = len(reps)
    edges: set[tuple[int, int]] = set()
    order_rel: dict[tuple[int, int], str] = {}
    for i in range(n_points):
        for j in range(i + 1, n_points):
            bi, bj = blocks[i], blocks[j]
            t = pairwise[(i, j)]
            if bi == bj:
                if t.core.n_blocks != 1:
                    raise AssemblyError(
                        f"points ({i},{j}) merged but their output is not equality")
                continue
            if t.core.n_blocks == 1:
                raise AssemblyError("equality output across distinct classes")
            key = (min(bi, bj), max(bi, bj))
            if isinstance(t.core, GraphType) and t.core.adjacent(0, 1):
                edges.add(key)
            if cat.is_ordered:
                c = t.core.compare(0, 1)
                c = c if bi < bj else {"<": ">", ">": "<"}[c]
                if order_rel.setdefault(key, c) != c:
                    raise AssemblyError("class order congruence violated")
    # congruence: every pair between two fixed classes must agree on edges
    for i in range(n_points):
        for j in range(i + 1, n_points):
            bi, bj = blocks[i], blocks[j]
            if bi == bj:
                continue
            t = pairwise[(i, j)]
            adjacent = isinstance(t.core, GraphType) and t.core.adjacent(0, 1)
            if ((min(bi, bj), max(bi, bj)) in edges) != adjacent:
                raise AssemblyError("edge congruence violated")
    order = None
    if cat.is_ordered:
        wins = [0] * nb
        for (a, b), c in order_rel.items():
            if c == "<":
                wins[b] += 1
            else:
                wins[a] += 1
        vals = sorted(set(wins))
        if len(vals) != nb:
            raise AssemblyError("class order is not total")
        rankof = {v: k for k, v in enumerate(vals)}
        order = tuple(rankof[w] for w in wins)
        for (a, b), c in order_rel.items():
            got = "<" if order[a] < order[b] else ">"
            if got != c:
                raise AssemblyError("class order is not transitive")
    if cat.tag == EQUALITY:
        return SituatedType(base, GraphType(tuple(blocks)))
    return SituatedType(base, GraphType(tuple(blocks), frozenset(edges), order))


def apply_to_type(b: Behavior, inputs: Sequence[SituatedType]) -> SituatedType:
    """Apply a behavior to an m-tuple of r-ary situated types (the type of the
    image tuple under any function with this behavior)."""
    if len(inputs) != b.arity:
        raise ReductLabError(f"behavior arity {b.arity}, got {len(inputs)} inputs")
    r = inputs[0].arity
    for t in inputs:
        if t.arity != r or t.base != b.base or t.constants != b.constants:
            raise ReductLabError("inputs must share arity, base and constants")
    pairwise = {}
    for i in range(r):
        for j in range(i + 1, r):
            key = tuple(_pair_proj(t, i, j) for t in inputs)
            pairwise[(i, j)] = b.lookup(key)
    cat = get_base(b.base)
    if r <= 1:
        if cat.tag == Q_ORDER:
            core = WeakOrderType(tuple(range(r)))
        else:
            core = GraphType(tuple(range(r)), frozenset(),
                             tuple(range(r)) if cat.is_ordered else None)
        return SituatedType(b.base, core)
    return assemble(b.base, r, pairwise)


# --- realizability ------------------------------------------------------------

def is_realizable(b: Behavior) -> bool:
    """Local consistency on all configurations of three points per coordinate."""
    triples = enumerate_types(b.base, 3, b.constants)
    for combo in itertools.product(triples, repeat=b.arity):
        pairwise = {}
        try:
            for i in range(3):
                for j in range(i + 1, 3):
                    key = tuple(_pair_proj(t, i, j) for t in combo)
                    pairwise[(i, j)] = b.lookup(key)
            assemble(b.base, 3, pairwise)
        except AssemblyError:
            return False
    return True


# --- preservation -------------------------------------------------------------

def preserves(b: Behavior, r: Relation) -> bool:
    """True iff applying the behavior to tuples inside r always lands in r."""
    return violates(b, r) is None


@dataclass(frozen=True)
class Witness:
    """A violation: inputs inside the relation whose image leaves it."""

    behavior: Behavior
    relation_name: str
    inputs: tuple[SituatedType, ...]
    output: SituatedType

    def recheck(self, r: Relation) -> bool:
        if r.name != self.relation_name:
            return False
        for t in self.inputs:
            if t.variable_part() not in r.types:
                return False
        try:
            out = apply_to_type(self.behavior, self.inputs)
        except AssemblyError:
            return False
        return out == self.output and self.output not in r.types

    def to_json(self) -> dict:
        return {"relation": self.relation_name,
                "inputs": [t.key() for t in self.inputs],
                "output": self.output.key(),
                "behavior": self.behavior.name or "<table>"}


def violates(b: Behavior, r: Relation) -> Witness | None:
    """A re-checkable witness that b does not preserve r, if one exists."""
    if r.base != b.base:
        raise ReductLabError("behavior and relation live over different bases")
    if r.constants.count:
        raise ReductLabError("preservation is checked for plain relations")
    refined: list[SituatedType] = []
    for t in sorted(r.types, key=lambda t: t.key()):
        refined.extend(refinements(t, b.constants))
    for combo in itertools.product(refined, repeat=b.arity):
        try:
            out = apply_to_type(b, combo)
        except AssemblyError:
            raise AssemblyError(
                f"behavior {b.name or '<table>'} is not realizable on {r.name}")
        if out not in r.types:
            return Witness(b, r.name, tuple(combo), out)
    return None


# --- enumeration ----------------------------------------------------------------

def enumerate_behaviors(base: str, arity: int,
                        constants: ConstantConfig | None = None,
                        max_free_keys: int = 40,
                        max_arity: int = 3) -> tuple[Behavior, ...]:
    """All realizable complete behaviors, canonically ordered.

    Backtracks over table entries (one representative per swap orbit) and
    prunes with three-point consistency as soon as all keys of a
    configuration are assigned.
    """
    if arity > max_arity:
        raise CapExceeded("behavior-arity", f"{arity} > {max_arity}")
    config = constants or no_constants(base)
    inputs = enumerate_types(base, 2, config)
    outputs = plain_2types(base)
    keys = list(itertools.product(inputs, repeat=arity))

    def orbit_rep(key: TableKey) -> TableKey:
        swapped = tuple(swap_2type(k) for k in key)
        return min(key, swapped, key=lambda kk: tuple(k.key() for k in kk))

    reps: list[TableKey] = []
    seen = set()
    for key in sorted(keys, key=lambda kk: tuple(k.key() for k in kk)):
        rep = orbit_rep(key)
        if rep not in seen:
            seen.add(rep)
            reps.append(rep)
    diagonal = [rep for rep in reps if all(_is_diagonal(k) for k in rep)]
    free = [rep for rep in reps if rep not in diagonal]
    if len(free) > max_free_keys:
        raise CapExceeded("behavior-table-size",
                          f"{len(free)} free entries exceed {max_free_keys}")

    eq_out = next(t for t in outputs if t.core.n_blocks == 1)
    rep_index = {rep: i for i, rep in enumerate(free)}

    # configurations: m-tuples of 3-point types; each touches three orbit reps
    triples = enumerate_types(base, 3, config)
    configs = []
    for combo in itertools.product(triples, repeat=arity):
        touched = []
        for i, j in ((0, 1), (0, 2), (1, 2)):
            key = tuple(_pair_proj(t, i, j) for t in combo)
            touched.append(((i, j), key))
        last = max((rep_index.get(orbit_rep(k), -1) for _, k in touched))
        configs.append((last, combo, touched))
    by_last: dict[int, list] = {}
    for last, combo, touched in configs:
        by_last.setdefault(last, []).append((combo, touched))

    assignment: dict[TableKey, SituatedType] = {rep: eq_out for rep in diagonal}
    for rep in diagonal:
        assignment[tuple(swap_2type(k) for k in rep)] = eq_out
    out: list[Behavior] = []

    def consistent_upto(idx: int) -> bool:
        for combo, touched in by_last.get(idx, []):
            pairwise = {}
            try:
                for (i, j), key in touched:
                    pairwise[(i, j)] = assignment[key]
                assemble(base, 3, pairwise)
            except AssemblyError:
                return False
        return True

    def backtrack(i: int):
        if i == len(free):
            entries = tuple(sorted(
                ((key, assignment[key]) for key in keys),
                key=lambda e: tuple(k.key() for k in e[0])))
            out.append(Behavior(base, arity, config, entries))
            return
        rep = free[i]
        swapped = tuple(swap_2type(k) for k in rep)
        for val in outputs:
            assignment[rep] = val
            assignment[swapped] = swap_2type(val)
            if consistent_upto(i):
                backtrack(i + 1)
            assignment.pop(rep, None)
            assignment.pop(swapped, None)

    # check configurations all of whose keys are diagonal (index -1) up front
    if consistent_upto(-1):
        backtrack(0)
    return tuple(out)


# --- duality --------------------------------------------------------------------

def _conjugate_type(t: SituatedType) -> SituatedType:
    """Order reversal (q-order) or graph complementation of a type, with the
    constant slots renumbered so the configuration stays canonical."""
    base = get_base(t.base)
    n = t.core.arity
    k = t.arity
    c = t.constants.count
    if base.tag == Q_ORDER:
        rev = t.core.reversed()
        # reversal flips the constants c1<...<cn; renumber them back
        perm = list(range(k)) + [k + c - 1 - i for i in range(c)]
        core = rev.project(perm)
        return SituatedType(t.base, core, t.constants)
    if base.tag == EQUALITY:
        return t
    core = t.core.complemented()
    new_edges = frozenset(
        (i, j) for i in range(c) for j in range(i + 1, c)
        if (i, j) not in t.constants.edges)
    return SituatedType(t.base, core, ConstantConfig(t.base, c, new_edges))


def dual(b: Behavior) -> Behavior:
    """Conjugate by the order reversal (q-order) or by complementation (graph)."""
    entries = []
    config = None
    for key, outv in b.entries:
        new_key = tuple(_conjugate_type(k) for k in key)
        config = new_key[0].constants if new_key else b.constants
        entries.append((new_key, _conjugate_type(outv)))
    return Behavior(b.base, b.arity, config or b.constants, tuple(entries),
                    name=f"dual_{b.name}" if b.name else "")


# --- catalog --------------------------------------------------------------------

def _order_rel(t: SituatedType) -> str:
    return t.core.compare(0, 1)


def _graph_rel(t: SituatedType) -> str:
    if t.core.same_class(0, 1):
        return "="
    return "E" if t.core.adjacent(0, 1) else "N"


def _plain_out(base: str, rel: str) -> SituatedType:
    if rel == "=":
        core = WeakOrderType((0, 0)) if get_base(base).tag == Q_ORDER \
            else GraphType((0, 0))
        return SituatedType(base, core)
    if base == Q_ORDER:
        return SituatedType(base, WeakOrderType((0, 1) if rel == "<" else (1, 0)))
    if rel == "E":
        return SituatedType(base, GraphType((0, 1), frozenset({(0, 1)})))
    return SituatedType(base, GraphType((0, 1)))


def _const_side(t: SituatedType, point: int) -> str:
    """LOW when the point sits strictly below the constant, else HIGH."""
    c_slot = t.arity
    cmp = t.core.compare(point, c_slot)
    return "LOW" if cmp == "<" else "HIGH"


CATALOG_ORDER = [
    "identity", "reversal", "constant", "rotation",
    "lex", "dual_lex", "pp", "dual_pp",
    "e_E", "e_N", "minus", "sw",
    "p1_balanced", "max_balanced", "max_edom", "p1_edom", "p1_bal_edom",
    "dual_max_balanced", "dual_max_edom", "dual_p1_edom", "dual_p1_bal_edom",
    "binary_injection_equality",
]


@lru_cache(maxsize=None)
def catalog_behavior(name: str, base: str | None = None) -> Behavior:
    """The named behavior; base is needed only for identity and constant."""
    if name == "identity":
        tag = base or Q_ORDER
        return behavior_from_rule(tag, 1, lambda key: key[0].variable_part(),
                                  name="identity")
    if name == "constant":
        tag = base or Q_ORDER
        eq_out = _plain_out(tag, "=")
        return behavior_from_rule(tag, 1, lambda key: eq_out, name="constant")

    if name == "reversal":
        def rule(key):
            rel = _order_rel(key[0])
            return _plain_out(Q_ORDER, {"<": ">", ">": "<", "=": "="}[rel])
        return behavior_from_rule(Q_ORDER, 1, rule, name="reversal")

    if name == "rotation":
        config = ConstantConfig(Q_ORDER, 1)

        def rule(key):
            t = key[0]
            if _order_rel(t) == "=":
                return _plain_out(Q_ORDER, "=")
            sx, sy = _const_side(t, 0), _const_side(t, 1)
            if sx == sy:
                return _plain_out(Q_ORDER, _order_rel(t))
            return _plain_out(Q_ORDER, ">" if sx == "LOW" else "<")
        return behavior_from_rule(Q_ORDER, 1, rule, config, name="rotation")

    if name in ("lex", "dual_lex"):
        def rule(key):
            t1, t2 = _order_rel(key[0]), _order_rel(key[1])
            return _plain_out(Q_ORDER, t1 if t1 != "=" else t2)
        b = behavior_from_rule(Q_ORDER, 2, rule, name="lex")
        return b if name == "lex" else dual(b).renamed("dual_lex")

    if name in ("pp", "dual_pp"):
        config = ConstantConfig(Q_ORDER, 1)

        def rule(key):
            t1, t2 = key
            r1 = _order_rel(t1)
            if r1 == "=" and _order_rel(t2) == "=":
                return _plain_out(Q_ORDER, "=")
            s_a, s_b = _const_side(t1, 0), _const_side(t1, 1)
            if s_a == "LOW" and s_b == "LOW":
                return _plain_out(Q_ORDER, r1)
            if s_a == "LOW":
                return _plain_out(Q_ORDER, "<")
            if s_b == "LOW":
                return _plain_out(Q_ORDER, ">")
            return _plain_out(Q_ORDER, _order_rel(t2))
        b = behavior_from_rule(Q_ORDER, 2, rule, config, name="pp")
        return b if name == "pp" else dual(b).renamed("dual_pp")

    if name in ("e_E", "e_N"):
        out = "E" if name == "e_E" else "N"

        def rule(key):
            rel = _graph_rel(key[0])
            return _plain_out(RANDOM_GRAPH, "=" if rel == "=" else out)
        return behavior_from_rule(RANDOM_GRAPH, 1, rule, name=name)

    if name == "minus":
        def rule(key):
            rel = _graph_rel(key[0])
            return _plain_out(RANDOM_GRAPH,
                              {"=": "=", "E": "N", "N": "E"}[rel])
        return behavior_from_rule(RANDOM_GRAPH, 1, rule, name="minus")

    if name == "sw":
        config = ConstantConfig(RANDOM_GRAPH, 1)

        def rule(key):
            t = key[0]
            rel = _graph_rel(t)
            if rel == "=":
                return _plain_out(RANDOM_GRAPH, "=")
            c_slot = t.arity
            touches = t.core.same_class(0, c_slot) or t.core.same_class(1, c_slot)
            if touches:
                return _plain_out(RANDOM_GRAPH, "N" if rel == "E" else "E")
            return _plain_out(RANDOM_GRAPH, rel)
        return behavior_from_rule(RANDOM_GRAPH, 1, rule, config, name="sw")

    binary_graph = {
        "p1_balanced": ("p1", "bal", "bal"),
        "max_balanced": ("max", "bal", "bal"),
        "max_edom": ("max", "edom", "edom"),
        "p1_edom": ("p1", "edom", "edom"),
        "p1_bal_edom": ("p1", "bal", "edom"),
    }
    if name in binary_graph:
        kind, first, second = binary_graph[name]

        def rule(key):
            r1, r2 = _graph_rel(key[0]), _graph_rel(key[1])
            if r1 == "=" and r2 == "=":
                return _plain_out(RANDOM_GRAPH, "=")
            if r1 != "=" and r2 != "=":
                if kind == "p1":
                    return _plain_out(RANDOM_GRAPH, r1)
                edge = (r1 == "E") or (r2 == "E")
                return _plain_out(RANDOM_GRAPH, "E" if edge else "N")
            if r2 == "=":  # the first argument varies
                return _plain_out(RANDOM_GRAPH, r1 if first == "bal" else "E")
            return _plain_out(RANDOM_GRAPH, r2 if second == "bal" else "E")
        return behavior_from_rule(RANDOM_GRAPH, 2, rule, name=name)

    if name.startswith("dual_") and name[5:] in binary_graph:
        return dual(catalog_behavior(name[5:])).renamed(name)

    if name == "binary_injection_equality":
        def rule(key):
            both_eq = all(_is_diagonal(k) for k in key)
            core = GraphType((0, 0)) if both_eq else GraphType((0, 1))
            return SituatedType(EQUALITY, core)
        return behavior_from_rule(EQUALITY, 2, rule, name=name)

    raise ReductLabError(f"unknown behavior name {name!r}")


def catalog_behaviors_for(base: str) -> list[Behavior]:
    """Catalog behaviors applicable over a base, in a stable order."""
    tag = get_base(base).tag
    names_by_base = {
        Q_ORDER: ["identity", "constant", "reversal", "rotation",
                  "lex", "dual_lex", "pp", "dual_pp"],
        RANDOM_GRAPH: ["identity", "constant", "e_E", "e_N", "minus", "sw",
                       "p1_balanced", "max_balanced", "max_edom", "p1_edom",
                       "p1_bal_edom", "dual_max_balanced", "dual_max_edom",
                       "dual_p1_edom", "dual_p1_bal_edom"],
        EQUALITY: ["identity", "constant", "binary_injection_equality"],
    }
    if tag not in names_by_base:
        raise UnsupportedBase(f"no behavior catalog for {tag}")
    return [catalog_behavior(n, tag) for n in names_by_base[tag]]


def catalog_names() -> list[str]:
    return list(CATALOG_ORDER)
