"""Quantifier-free types over the base catalogs, represented finitely.

A complete type of a k-tuple over the dense linear order is a weak order on
the k positions, stored as a canonical rank array.  Over the random graph it
is a partition of the positions (collapsing equality) together with a graph
on the partition classes, plus a class order for the ordered variant; the
equality catalog uses the same shape with an always-empty edge set.

Constants refine types: a situated type carries its core over positions
variables + constants, with the constants occupying the trailing slots in a
fixed configuration (for order-like bases the constants are abstract points
c1 < ... < cn; for graph bases the induced graph on the constants is part of
the configuration, since constants are only fixed up to type).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import InvalidStructure, UnsupportedBase
from .structures import (
    BASES,
    EQUALITY,
    ORDERED_RANDOM_GRAPH,
    Q_ORDER,
    RANDOM_GRAPH,
    FiniteStructure,
    check_age,
    get_base,
)

LT, EQ, GT = "<", "=", ">"


@dataclass(frozen=True)
class WeakOrderType:
    """A weak order on k points as a rank array (surjection onto 0..b-1)."""

    ranks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        if self.ranks:
            b = max(self.ranks) + 1
            if set(self.ranks) != set(range(b)) or min(self.ranks) < 0:
                raise InvalidStructure(f"ranks {self.ranks} are not a canonical surjection")

    @property
    def arity(self) -> int:
        return len(self.ranks)

    @property
    def n_blocks(self) -> int:
        return max(self.ranks) + 1 if self.ranks else 0

    def compare(self, i: int, j: int) -> str:
        a, b = self.ranks[i], self.ranks[j]
        return EQ if a == b else (LT if a < b else GT)

    def project(self, positions: Sequence[int]) -> "WeakOrderType":
        """Induced weak order on the given positions (repeats allowed)."""
        picked = [self.ranks[p] for p in positions]
        order = sorted(set(picked))
        dense = {r: i for i, r in enumerate(order)}
        return WeakOrderType(tuple(dense[r] for r in picked))

    def reversed(self) -> "WeakOrderType":
        b = self.n_blocks
        return WeakOrderType(tuple(b - 1 - r for r in self.ranks))

    def rotated(self, cut: int) -> "WeakOrderType":
        """Move the blocks below `cut` after the rest (ties never split)."""
        b = self.n_blocks
        if not 0 < cut < b:
            raise InvalidStructure(f"cut {cut} not strictly inside 1..{b - 1}")
        return WeakOrderType(tuple(r - cut if r >= cut else r + b - cut
                                   for r in self.ranks))

    def to_json(self) -> dict:
        return {"ranks": list(self.ranks)}

    @classmethod
    def from_json(cls, data: dict) -> "WeakOrderType":
        return cls(tuple(data["ranks"]))


@dataclass(frozen=True)
class GraphType:
    """Equality classes of k positions plus a graph (and optional order) on them.

    blocks is a restricted-growth string: blocks[p] is the class of position p,
    classes numbered by first occurrence.  edges holds pairs (i, j) with i < j
    of adjacent classes; order, when present, gives each class its rank in the
    total class order.
    """

    blocks: tuple[int, ...]
    edges: frozenset[tuple[int, int]] = frozenset()
    order: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        seen = 0
        for b in self.blocks:
            if b > seen:
                raise InvalidStructure(f"blocks {self.blocks} not a restricted growth string")
            seen = max(seen, b + 1)
        nb = self.n_blocks
        for i, j in self.edges:
            if not (0 <= i < j < nb):
                raise InvalidStructure(f"edge {(i, j)} invalid for {nb} classes")
        if self.order is not None:
            object.__setattr__(self, "order", tuple(self.order))
            if sorted(self.order) != list(range(nb)):
                raise InvalidStructure(f"order {self.order} is not a permutation of classes")

    @property
    def arity(self) -> int:
        return len(self.blocks)

    @property
    def n_blocks(self) -> int:
        return max(self.blocks) + 1 if self.blocks else 0

    def same_class(self, i: int, j: int) -> bool:
        return self.blocks[i] == self.blocks[j]

    def adjacent(self, i: int, j: int) -> bool:
        a, b = self.blocks[i], self.blocks[j]
        return a != b and (min(a, b), max(a, b)) in self.edges

    def compare(self, i: int, j: int) -> str:
        if self.order is None:
            raise UnsupportedBase("type has no class order")
        if self.same_class(i, j):
            return EQ
        return LT if self.order[self.blocks[i]] < self.order[self.blocks[j]] else GT

    def project(self, positions: Sequence[int]) -> "GraphType":
        old = [self.blocks[p] for p in positions]
        renum: dict[int, int] = {}
        new_blocks = []
        for b in old:
            if b not in renum:
                renum[b] = len(renum)
            new_blocks.append(renum[b])
        new_edges = frozenset(
            (min(renum[a], renum[b]), max(renum[a], renum[b]))
            for a, b in itertools.combinations(renum, 2)
            if (min(a, b), max(a, b)) in self.edges)
        new_order = None
        if self.order is not None:
            kept = sorted(renum, key=lambda b: self.order[b])
            rank = {b: i for i, b in enumerate(kept)}
            new_order = tuple(rank[b] for b in sorted(renum, key=renum.get))
        return GraphType(tuple(new_blocks), new_edges, new_order)

    def complemented(self) -> "GraphType":
        nb = self.n_blocks
        all_pairs = {(i, j) for i in range(nb) for j in range(i + 1, nb)}
        return GraphType(self.blocks, frozenset(all_pairs - self.edges), self.order)

    def switched(self, classes: frozenset[int]) -> "GraphType":
        """Flip edges crossing the cut between `classes` and the rest."""
        nb = self.n_blocks
        new = set(self.edges)
        for i in range(nb):
            for j in range(i + 1, nb):
                if (i in classes) != (j in classes):
                    new.symmetric_difference_update({(i, j)})
        return GraphType(self.blocks, frozenset(new), self.order)

    def to_json(self) -> dict:
        nb = self.n_blocks
        parts = [[p for p, b in enumerate(self.blocks) if b == c] for c in range(nb)]
        data: dict = {"partition": parts, "edges": sorted(list(e) for e in self.edges)}
        if self.order is not None:
            data["order"] = list(self.order)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "GraphType":
        pos_to_block: dict[int, int] = {}
        for c, part in enumerate(data["partition"]):
            for p in part:
                pos_to_block[p] = c
        blocks = tuple(pos_to_block[p] for p in range(len(pos_to_block)))
        # Renumber to restricted growth form, translating edges and order.
        renum: dict[int, int] = {}
        for b in blocks:
            renum.setdefault(b, len(renum))
        edges = frozenset((min(renum[a], renum[b]), max(renum[a], renum[b]))
                          for a, b in data.get("edges", []))
        order = data.get("order")
        if order is not None:
            new_order = [0] * len(renum)
            for old, new in renum.items():
                new_order[new] = order[old]
            order = tuple(new_order)
        return cls(tuple(renum[b] for b in blocks), edges, order)


Core = WeakOrderType | GraphType


@dataclass(frozen=True)
class ConstantConfig:
    """A configuration of named constants for a base.

    Order-like bases fix abstract positions c1 < ... < cn; graph bases carry
    the induced graph on the constants (pairs of constant indices).
    """

    base: str
    count: int = 0
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        base = get_base(self.base)
        if self.edges and not base.has_edges:
            raise InvalidStructure(f"base {self.base} takes no constant edges")
        for i, j in self.edges:
            if not (0 <= i < j < self.count):
                raise InvalidStructure(f"constant edge {(i, j)} out of range")

    def core(self) -> Core:
        """The type of the constant tuple itself."""
        base = get_base(self.base)
        n = self.count
        if base.tag == Q_ORDER:
            return WeakOrderType(tuple(range(n)))
        order = tuple(range(n)) if base.is_ordered else None
        return GraphType(tuple(range(n)), self.edges, order)

    def to_json(self) -> dict:
        data: dict = {"count": self.count}
        if self.edges:
            data["edges"] = sorted(list(e) for e in self.edges)
        return data

    @classmethod
    def from_json(cls, base: str, data: dict | int | None) -> "ConstantConfig":
        if data is None:
            return cls(base, 0)
        if isinstance(data, int):
            return cls(base, data)
        return cls(base, data["count"],
                   frozenset(tuple(e) for e in data.get("edges", [])))


def no_constants(base: str) -> ConstantConfig:
    return ConstantConfig(base, 0)


@dataclass(frozen=True)
class SituatedType:
    """A complete quantifier-free type of a tuple, optionally over constants.

    The core covers arity + constants.count positions; the constants occupy
    the trailing slots and their induced type must equal the configuration.
    """

    base: str
    core: Core
    constants: ConstantConfig = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.constants is None:
            object.__setattr__(self, "constants", no_constants(self.base))
        base = get_base(self.base)
        if self.constants.base != self.base:
            raise InvalidStructure("constant configuration base mismatch")
        if base.tag == Q_ORDER:
            if not isinstance(self.core, WeakOrderType):
                raise InvalidStructure("q-order types need a weak order core")
        else:
            if not isinstance(self.core, GraphType):
                raise InvalidStructure(f"{self.base} types need a graph core")
            if base.tag == EQUALITY and self.core.edges:
                raise InvalidStructure("equality types carry no edges")
            if (self.core.order is not None) != (base.tag == ORDERED_RANDOM_GRAPH):
                raise InvalidStructure("class order present iff the base is ordered")
        n = self.constants.count
        if self.core.arity < n:
            raise InvalidStructure("core smaller than the constant configuration")
        if n:
            induced = self.core.project(self.const_slots())
            if induced != self.constants.core():
                raise InvalidStructure(
                    "constant slots do not realize the declared configuration")
            slots = self.const_slots()
            blocks = (self.core.ranks if isinstance(self.core, WeakOrderType)
                      else self.core.blocks)
            if len({blocks[s] for s in slots}) != n:
                raise InvalidStructure("constants must be pairwise distinct")

    @property
    def arity(self) -> int:
        return self.core.arity - self.constants.count

    def const_slots(self) -> tuple[int, ...]:
        return tuple(range(self.arity, self.core.arity))

    def variable_part(self) -> "SituatedType":
        """Forget the constants: the plain type of the variable tuple."""
        if not self.constants.count:
            return self
        return SituatedType(self.base, self.core.project(range(self.arity)))

    def project(self, positions: Sequence[int]) -> "SituatedType":
        """Induced situated type on the given variable positions (repeats ok)."""
        for p in positions:
            if not 0 <= p < self.arity:
                raise InvalidStructure(f"position {p} outside variables 0..{self.arity - 1}")
        full = tuple(positions) + self.const_slots()
        return SituatedType(self.base, self.core.project(full), self.constants)

    def key(self) -> str:
        """Canonical human-readable encoding, stable across runs."""
        names = [f"x{i + 1}" for i in range(self.arity)] + \
            [f"c{i + 1}" for i in range(self.constants.count)]
        return render_type(self, names)

    def to_json(self) -> dict:
        data: dict = {"base": self.base, "core": self.core.to_json()}
        if self.constants.count:
            data["constants"] = self.constants.to_json()
        return data

    @classmethod
    def from_json(cls, data: dict) -> "SituatedType":
        base = data["base"]
        core_data = data["core"]
        core: Core
        if "ranks" in core_data:
            core = WeakOrderType.from_json(core_data)
        else:
            core = GraphType.from_json(core_data)
        return cls(base, core, ConstantConfig.from_json(base, data.get("constants")))


@dataclass(frozen=True)
class ProductType:
    """A tuple of same-arity situated types, one per coordinate of a power."""

    factors: tuple[SituatedType, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InvalidStructure("empty product")
        arities = {f.arity for f in self.factors}
        bases = {f.base for f in self.factors}
        if len(arities) != 1 or len(bases) != 1:
            raise InvalidStructure("product factors must share arity and base")

    @property
    def arity(self) -> int:
        return self.factors[0].arity


def render_type(t: SituatedType, names: Sequence[str]) -> str:
    """Readable one-line form of a type, e.g. 'x1<x2=c1' or 'x1,x2|c1;E(x1,c1)'."""
    core = t.core
    if isinstance(core, WeakOrderType):
        groups: dict[int, list[str]] = {}
        for p, r in enumerate(core.ranks):
            groups.setdefault(r, []).append(names[p])
        return "<".join("=".join(groups[r]) for r in sorted(groups))
    groups = {}
    for p, b in enumerate(core.blocks):
        groups.setdefault(b, []).append(names[p])
    ids = sorted(groups)
    if core.order is not None:
        ids.sort(key=lambda b: core.order[b])
    part = "|".join(",".join(groups[b]) for b in ids)
    edges = ";".join(f"E({groups[a][0]},{groups[b][0]})"
                     for a, b in sorted(core.edges))
    return part + (";" + edges if edges else "")


# --- enumeration -----------------------------------------------------------

def _weak_orders(n: int) -> Iterator[tuple[int, ...]]:
    """All weak orders on n points as rank arrays, by point insertion."""
    if n == 0:
        yield ()
        return
    for prefix in _weak_orders(n - 1):
        b = max(prefix) + 1 if prefix else 0
        for r in range(b):  # join an existing block
            yield prefix + (r,)
        for gap in range(b + 1):  # open a new block in any gap
            yield tuple(x + 1 if x >= gap else x for x in prefix) + (gap,)


def _partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All set partitions of n positions as restricted growth strings."""
    if n == 0:
        yield ()
        return
    for prefix in _partitions(n - 1):
        b = max(prefix) + 1 if prefix else 0
        for c in range(b + 1):
            yield prefix + (c,)


def _graph_cores(n: int, ordered: bool, with_edges: bool) -> Iterator[GraphType]:
    for blocks in _partitions(n):
        nb = max(blocks) + 1 if blocks else 0
        pairs = list(itertools.combinations(range(nb), 2))
        edge_sets: Iterable[frozenset[tuple[int, int]]]
        if with_edges:
            edge_sets = (frozenset(c) for r in range(len(pairs) + 1)
                         for c in itertools.combinations(pairs, r))
        else:
            edge_sets = (frozenset(),)
        for edges in edge_sets:
            if ordered:
                for perm in itertools.permutations(range(nb)):
                    yield GraphType(blocks, edges, perm)
            else:
                yield GraphType(blocks, edges, None)


def _core_sort_key(core: Core):
    if isinstance(core, WeakOrderType):
        return (core.ranks,)
    return (core.blocks, tuple(sorted(core.edges)),
            core.order if core.order is not None else ())


@lru_cache(maxsize=None)
def enumerate_types(base: str, arity: int,
                    constants: ConstantConfig | None = None) -> tuple[SituatedType, ...]:
    """All complete types of `arity`-tuples over the base with the constants.

    Exhaustive, duplicate-free, in a deterministic canonical order.
    """
    cat = get_base(base)
    if arity < 0:
        raise InvalidStructure("arity must be nonnegative")
    config = constants or no_constants(base)
    if config.base != base:
        raise InvalidStructure("constant configuration base mismatch")
    total = arity + config.count
    cores: Iterator[Core]
    if cat.tag == Q_ORDER:
        cores = (WeakOrderType(r) for r in _weak_orders(total))
    else:
        cores = _graph_cores(total, ordered=cat.tag == ORDERED_RANDOM_GRAPH,
                             with_edges=cat.has_edges)
    out = []
    const_core = config.core()
    slots = tuple(range(arity, total))
    for core in cores:
        if config.count:
            if core.project(slots) != const_core:
                continue
            blocks = core.ranks if isinstance(core, WeakOrderType) else core.blocks
            if len({blocks[s] for s in slots}) != config.count:
                continue
        out.append(SituatedType(base, core, config))
    out.sort(key=lambda t: _core_sort_key(t.core))
    return tuple(out)


@lru_cache(maxsize=None)
def _refinement_index(base: str, arity: int,
                      constants: ConstantConfig) -> dict:
    index: dict[SituatedType, tuple[SituatedType, ...]] = {}
    for t in enumerate_types(base, arity, constants):
        index.setdefault(t.variable_part(), ())
        index[t.variable_part()] += (t,)
    return index


def refinements(plain: SituatedType, constants: ConstantConfig) -> tuple[SituatedType, ...]:
    """All situated types over the constants whose variable part is `plain`."""
    if plain.constants.count:
        raise InvalidStructure("refine a plain type only")
    return _refinement_index(plain.base, plain.arity, constants).get(plain, ())


# --- types of concrete tuples ---------------------------------------------

def type_of_tuple(base: str, certificate: FiniteStructure | None,
                  points: Sequence, constants: Sequence = ()) -> SituatedType:
    """The unique type realized by a concrete tuple.

    q-order: points and constants are rationals (constants strictly increasing).
    equality: any hashable values (constants pairwise distinct).
    graph bases: a certificate structure in the base's age plus point indices.
    """
    cat = get_base(base)
    if cat.tag == Q_ORDER:
        cvals = [Fraction(c) for c in constants]
        if any(a >= b for a, b in zip(cvals, cvals[1:])):
            raise InvalidStructure("q-order constants must be strictly increasing")
        vals = [Fraction(p) for p in points] + cvals
        order = sorted(set(vals))
        rank = {v: i for i, v in enumerate(order)}
        core: Core = WeakOrderType(tuple(rank[v] for v in vals))
        return SituatedType(base, core, ConstantConfig(base, len(cvals)))
    if cat.tag == EQUALITY:
        if len(set(constants)) != len(constants):
            raise InvalidStructure("constants must be pairwise distinct")
        vals = list(points) + list(constants)
        renum: dict = {}
        blocks = []
        for v in vals:
            renum.setdefault(v, len(renum))
            blocks.append(renum[v])
        return SituatedType(base, GraphType(tuple(blocks)),
                            ConstantConfig(base, len(constants)))
    if certificate is None:
        raise InvalidStructure(f"base {base} needs a certificate structure")
    if not check_age(cat, certificate):
        raise InvalidStructure("certificate violates the bounds of the base")
    idxs = list(points) + list(constants)
    for i in idxs:
        if not 0 <= i < certificate.size:
            raise InvalidStructure(f"index {i} out of range")
    if len(set(constants)) != len(constants):
        raise InvalidStructure("constants must be pairwise distinct")
    renum = {}
    blocks = []
    for i in idxs:
        renum.setdefault(i, len(renum))
        blocks.append(renum[i])
    edges = frozenset(
        (min(renum[a], renum[b]), max(renum[a], renum[b]))
        for a, b in itertools.combinations(renum, 2)
        if (a, b) in certificate.tuples("E"))
    order = None
    if cat.tag == ORDERED_RANDOM_GRAPH:
        lt = certificate.tuples("<")
        verts = sorted(renum, key=lambda v: sum((w, v) in lt for w in renum))
        pos = {v: i for i, v in enumerate(verts)}
        order = tuple(pos[v] for v in sorted(renum, key=renum.get))
    core = GraphType(tuple(blocks), edges, order)
    cedges = frozenset(
        (i, j) for i, j in itertools.combinations(range(len(constants)), 2)
        if (constants[i], constants[j]) in certificate.tuples("E"))
    return SituatedType(base, core, ConstantConfig(base, len(constants), cedges))


def restrict_type(t: SituatedType, positions: Sequence[int]) -> SituatedType:
    """The induced type on a subset of variable positions (constants kept)."""
    return t.project(positions)


# --- realization ------------------------------------------------------------

def realize(t: SituatedType) -> dict:
    """A concrete witness for a type: a rational assignment over q-order, or a
    finite graph certificate over graph bases (one vertex per class)."""
    core = t.core
    names = [f"x{i + 1}" for i in range(t.arity)] + \
        [f"c{i + 1}" for i in range(t.constants.count)]
    if isinstance(core, WeakOrderType):
        return {"assignment": {names[p]: core.ranks[p] for p in range(core.arity)}}
    nb = core.n_blocks
    cert = graph_structure(nb, core.edges,
                           ordered=core.order is not None)
    if core.order is not None:
        # vertex i is class i; re-emit < following the class order
        lt = frozenset((i, j) for i in range(nb) for j in range(nb)
                       if core.order[i] < core.order[j])
        cert = FiniteStructure(cert.signature, nb, {"E": cert.tuples("E"), "<": lt})
    return {"certificate": cert.to_json(),
            "assignment": {names[p]: core.blocks[p] for p in range(core.arity)}}


def as_finite_structure(t: SituatedType) -> FiniteStructure:
    """View a type on its distinct points as a finite structure, one point per
    equality class."""
    core = t.core
    if isinstance(core, WeakOrderType):
        n = core.n_blocks
        lt = frozenset((i, j) for i in range(n) for j in range(n) if i < j)
        return FiniteStructure((("<", 2),), n, {"<": lt})
    n = core.n_blocks
    if t.base == EQUALITY:
        return FiniteStructure((), n, {})
    rels: dict = {"E": frozenset(p for i, j in core.edges for p in ((i, j), (j, i)))}
    sig = [("E", 2)]
    if core.order is not None:
        sig.append(("<", 2))
        rels["<"] = frozenset((i, j) for i in range(n) for j in range(n)
                              if core.order[i] < core.order[j])
    return FiniteStructure(tuple(sig), n, rels)


def ordered_bell(n: int) -> int:
    """Number of weak orders on n points, by the standard recursion."""
    from math import comb
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(comb(m, k) * a[m - k] for k in range(1, m + 1)))
    return a[n]
