"""Exact evaluation of primitive positive formulas over type-set relations.

Satisfiability over the infinite base reduces to the existence of a
consistent complete type on the variables, because both catalogs are
universal for their ages (every finite linear order, every finite graph
embeds).  This is the soundness cornerstone of the module: a pp formula is
evaluated by searching complete types of all its variables, and a CSP
instance is satisfiable exactly when such a type exists.

The search inserts one point at a time (into a block or gap of the weak
order under construction, or as a joined or new class of the graph) and
prunes with restriction profiles: the placed arguments of a constraint must
induce a type that is a restriction of some type of its relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import CapExceeded, ReductLabError
from .structures import EQUALITY, ORDERED_RANDOM_GRAPH, Q_ORDER, RANDOM_GRAPH, get_base
from .types import (
    ConstantConfig,
    GraphType,
    SituatedType,
    WeakOrderType,
    enumerate_types,
    realize,
)
from .formulas import (
    Atom,
    Language,
    PpFormula,
    Relation,
    Term,
    parse_pp,
)

DEFAULT_VAR_CAPS = {Q_ORDER: 10, EQUALITY: 10, RANDOM_GRAPH: 8,
                    ORDERED_RANDOM_GRAPH: 8}

Constraint = tuple[Relation, tuple[int, ...]]


@lru_cache(maxsize=None)
def _restriction_profile(rel: Relation, positions: tuple[int, ...]) -> frozenset:
    """Cores of the projections of rel's types onto the given positions."""
    return frozenset(t.core.project(positions) for t in rel.types)


@lru_cache(maxsize=None)
def equality_relation(base: str) -> Relation:
    types = enumerate_types(base, 2)
    return Relation("eq", base, 2,
                    frozenset(t for t in types if t.core.n_blocks == 1))


class _OrderState:
    """Incrementally built weak order: rank per placed point."""

    def __init__(self, n_points: int):
        self.ranks: list[int | None] = [None] * n_points
        self.n_blocks = 0

    def place(self, p: int, rank: int, new_block: bool):
        if new_block:
            for q, r in enumerate(self.ranks):
                if r is not None and r >= rank:
                    self.ranks[q] = r + 1
            self.n_blocks += 1
        self.ranks[p] = rank

    def unplace(self, p: int, rank: int, new_block: bool):
        self.ranks[p] = None
        if new_block:
            self.n_blocks -= 1
            for q, r in enumerate(self.ranks):
                if r is not None and r > rank:
                    self.ranks[q] = r - 1

    def options(self):
        b = self.n_blocks
        return [(rank, False) for rank in range(b)] + \
               [(rank, True) for rank in range(b + 1)]

    def project(self, points: Sequence[int]) -> WeakOrderType:
        picked = [self.ranks[p] for p in points]
        order = sorted(set(picked))
        dense = {r: i for i, r in enumerate(order)}
        return WeakOrderType(tuple(dense[r] for r in picked))

    def full_core(self) -> WeakOrderType:
        return WeakOrderType(tuple(self.ranks))  # type: ignore[arg-type]


class _GraphState:
    """Incrementally built graph type (optionally with a class order)."""

    def __init__(self, n_points: int, ordered: bool, with_edges: bool):
        self.block_of: list[int | None] = [None] * n_points
        self.sizes: list[int] = []
        self.edges: set[tuple[int, int]] = set()
        self.ordered = ordered
        self.with_edges = with_edges
        self.order: list[int] = []

    @property
    def n_blocks(self) -> int:
        return len(self.sizes)

    def options(self):
        b = self.n_blocks
        opts: list[tuple] = [("join", c) for c in range(b)]
        masks = range(1 << b) if self.with_edges else (0,)
        slots = range(b + 1) if self.ordered else (0,)
        opts += [("new", mask, slot) for mask in masks for slot in slots]
        return opts

    def place(self, p: int, opt: tuple):
        if opt[0] == "join":
            c = opt[1]
            self.block_of[p] = c
            self.sizes[c] += 1
            return
        _, mask, slot = opt
        c = self.n_blocks
        self.sizes.append(1)
        self.block_of[p] = c
        for d in range(c):
            if mask >> d & 1:
                self.edges.add((d, c))
        if self.ordered:
            for d in range(c):
                if self.order[d] >= slot:
                    self.order[d] += 1
            self.order.append(slot)

    def unplace(self, p: int, opt: tuple):
        if opt[0] == "join":
            self.sizes[opt[1]] -= 1
            self.block_of[p] = None
            return
        _, mask, slot = opt
        c = self.n_blocks - 1
        self.block_of[p] = None
        self.sizes.pop()
        for d in range(c):
            self.edges.discard((d, c))
        if self.ordered:
            self.order.pop()
            for d in range(c):
                if self.order[d] > slot:
                    self.order[d] -= 1

    def project(self, points: Sequence[int]) -> GraphType:
        old = [self.block_of[p] for p in points]
        renum: dict[int, int] = {}
        blocks = []
        for b in old:
            renum.setdefault(b, len(renum))
            blocks.append(renum[b])
        edges = frozenset((min(renum[a], renum[b]), max(renum[a], renum[b]))
                          for a, b in itertools.combinations(renum, 2)
                          if (min(a, b), max(a, b)) in self.edges)
        order = None
        if self.ordered:
            kept = sorted(renum, key=lambda c: self.order[c])
            rank = {c: i for i, c in enumerate(kept)}
            order = tuple(rank[c] for c in sorted(renum, key=renum.get))
        return GraphType(tuple(blocks), edges, order)

    def full_core(self) -> GraphType:
        return self.project(range(len(self.block_of)))


class TypeSearch:
    """Backtracking search over complete types of n variables plus constants.

    Constraint positions index variables 0..n-1; for relations that carry
    their own constant configuration the constants are appended implicitly.
    """

    def __init__(self, base: str, constants: ConstantConfig,
                 n_vars: int, constraints: Sequence[Constraint],
                 node_budget: int = 2_000_000):
        self.base = get_base(base)
        self.config = constants
        self.n_vars = n_vars
        self.n_points = n_vars + constants.count
        self.node_budget = node_budget
        self.nodes = 0
        prepared = []
        for rel, args in constraints:
            pos = tuple(args)
            if rel.constants.count:
                if rel.constants != constants:
                    raise ReductLabError(
                        f"relation {rel.name} expects constants {rel.constants}")
                pos = pos + tuple(n_vars + i for i in range(constants.count))
            prepared.append((rel, pos))
        # cheapest relations first: better pruning order, never affects results
        self.constraints = sorted(prepared, key=lambda c: (len(c[0].types), c[1]))
        self.by_var: list[list[tuple[Relation, tuple[int, ...]]]] = \
            [[] for _ in range(self.n_points)]
        for rel, pos in self.constraints:
            for p in set(pos):
                self.by_var[p].append((rel, pos))

    def _new_state(self):
        if self.base.tag == Q_ORDER:
            st = _OrderState(self.n_points)
            for i in range(self.config.count):
                st.place(self.n_vars + i, i, True)
            return st
        st = _GraphState(self.n_points, ordered=self.base.is_ordered,
                         with_edges=self.base.has_edges)
        const_core = self.config.core()
        for i in range(self.config.count):
            mask = 0
            for d in range(i):
                if (d, i) in self.config.edges:
                    mask |= 1 << d
            slot = const_core.order[i] if const_core.order is not None else 0
            st.place(self.n_vars + i, ("new", mask, slot))
        return st

    def _preplace(self, st, t: SituatedType, upto: int):
        if t.constants != self.config:
            raise ReductLabError("prefix type has a different constant configuration")
        core = t.core
        if isinstance(core, WeakOrderType):
            rank_map = {core.ranks[upto + i]: st.ranks[self.n_vars + i]
                        for i in range(self.config.count)}
            for p in sorted(range(upto), key=lambda p: core.ranks[p]):
                tr = core.ranks[p]
                if tr in rank_map:
                    st.place(p, rank_map[tr], False)
                    continue
                below = [sr for t_r, sr in rank_map.items() if t_r < tr]
                new_rank = max(below) + 1 if below else 0
                st.place(p, new_rank, True)
                for t_r in list(rank_map):
                    if rank_map[t_r] >= new_rank:
                        rank_map[t_r] += 1
                rank_map[tr] = new_rank
            return
        block_map = {core.blocks[upto + i]: st.block_of[self.n_vars + i]
                     for i in range(self.config.count)}
        for p in range(upto):
            tb = core.blocks[p]
            if tb in block_map:
                st.place(p, ("join", block_map[tb]))
                continue
            mask = 0
            for t_b, sc in block_map.items():
                if (min(t_b, tb), max(t_b, tb)) in core.edges:
                    mask |= 1 << sc
            slot = 0
            if core.order is not None:
                slot = sum(1 for t_b in block_map
                           if core.order[t_b] < core.order[tb])
            st.place(p, ("new", mask, slot))
            block_map[tb] = st.block_of[p]

    def _check(self, st, placed: set[int], newly: int) -> bool:
        for rel, pos in self.by_var[newly]:
            got = [p for p in pos if p in placed]
            if len(got) < 2:
                continue
            if len(got) == len(pos):
                if st.project(pos) not in _restriction_profile(
                        rel, tuple(range(len(pos)))):
                    return False
                continue
            idx = tuple(i for i, p in enumerate(pos) if p in placed)
            if st.project(got) not in _restriction_profile(rel, idx):
                return False
        return True

    def _order_vars(self, start: int) -> list[int]:
        remaining = list(range(start, self.n_vars))
        chosen: list[int] = []
        placed = set(range(start)) | set(range(self.n_vars, self.n_points))
        while remaining:
            def score(v: int):
                s = sum(1 for rel, pos in self.by_var[v]
                        if any(p in placed for p in pos))
                return (-s, v)
            nxt = min(remaining, key=score)
            chosen.append(nxt)
            remaining.remove(nxt)
            placed.add(nxt)
        return chosen

    def run(self, mode: str, prefix: SituatedType | None = None,
            collect_arity: int = 0):
        """mode 'exists' -> bool; 'witness' -> SituatedType | None;
        'collect' -> frozenset of projections onto the first collect_arity vars."""
        st = self._new_state()
        start = 0
        if prefix is not None:
            start = prefix.arity
            self._preplace(st, prefix, start)
        placed = set(range(start)) | set(range(self.n_vars, self.n_points))
        for rel, pos in self.constraints:
            if all(p in placed for p in pos) and \
                    st.project(pos) not in _restriction_profile(
                        rel, tuple(range(len(pos)))):
                return (False if mode == "exists" else
                        (None if mode == "witness" else frozenset()))
        order = self._order_vars(start)
        found: set[SituatedType] = set()
        witness: list[SituatedType] = []

        def backtrack(i: int) -> bool:
            self.nodes += 1
            if self.nodes > self.node_budget:
                raise CapExceeded("search-nodes", f"budget {self.node_budget}")
            if i == len(order):
                if mode == "exists":
                    return True
                full = SituatedType(self.base.tag, st.full_core(), self.config)
                if mode == "witness":
                    witness.append(full)
                    return True
                found.add(full.project(range(collect_arity)))
                return False
            v = order[i]
            for opt in st.options():
                if isinstance(st, _OrderState):
                    st.place(v, *opt)
                else:
                    st.place(v, opt)
                placed.add(v)
                if self._check(st, placed, v) and backtrack(i + 1):
                    return True
                placed.discard(v)
                if isinstance(st, _OrderState):
                    st.unplace(v, *opt)
                else:
                    st.unplace(v, opt)
            return False

        hit = backtrack(0)
        if mode == "exists":
            return hit
        if mode == "witness":
            return witness[0] if witness else None
        return frozenset(found)


def _atoms_to_constraints(atoms: Sequence[Atom], n_vars: int,
                          base: str, language: Language | None) -> list[Constraint]:
    out: list[Constraint] = []
    for atom in atoms:
        pos = tuple(n_vars + t.index if t.is_const else t.index for t in atom.args)
        if atom.kind == "eq":
            rel = equality_relation(base)
        elif atom.kind == "rel":
            if language is None:
                raise ReductLabError("relation atoms need a language")
            rel = language.require(atom.rel_name)
        elif atom.kind == "true":
            continue
        else:
            raise ReductLabError(f"atom kind {atom.kind} is not primitive positive")
        out.append((rel, pos))
    return out


def _solve_relation(base: str, config: ConstantConfig, n_vars: int,
                    constraints: Sequence[Constraint], out_arity: int,
                    node_budget: int, name: str) -> Relation:
    """The relation on the first out_arity variables defined by the constraints
    with the rest existential: candidate types filtered by extension search."""
    kept = []
    direct = [(rel, pos) for rel, pos in constraints
              if all(p < out_arity or p >= n_vars for p in pos)]
    for cand in enumerate_types(base, out_arity, config):
        ok = True
        for rel, pos in direct:
            mapped = tuple(p if p < out_arity else out_arity + (p - n_vars)
                           for p in pos)
            if cand.core.project(mapped) not in _restriction_profile(
                    rel, tuple(range(len(pos)))):
                ok = False
                break
        if not ok:
            continue
        if out_arity == n_vars:
            kept.append(cand)
            continue
        search = TypeSearch(base, config, n_vars, constraints, node_budget)
        if search.run("exists", prefix=cand):
            kept.append(cand)
    return Relation(name, base, out_arity, frozenset(kept), config)


def evaluate_pp(f: PpFormula, language: Language,
                max_vars: int | None = None,
                name: str | None = None,
                node_budget: int = 2_000_000) -> Relation:
    """The exact relation a pp formula defines on its free variables."""
    cap = max_vars if max_vars is not None else DEFAULT_VAR_CAPS[language.base]
    if f.total_variables > cap:
        raise CapExceeded("pp-variables",
                          f"{f.total_variables} variables exceed cap {cap}")
    n = f.total_variables
    constraints = _atoms_to_constraints(f.atoms, n, language.base, language)
    return _solve_relation(language.base, f.constants, n, constraints,
                           len(f.free_variables), node_budget,
                           name or f.text or f.render())


# --- CSP instances -----------------------------------------------------------

@dataclass(frozen=True)
class CspInstance:
    language: Language
    variables: tuple[str, ...]
    constraints: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints",
                           tuple((r, tuple(a)) for r, a in self.constraints))
        names = set(self.variables)
        for rel_name, args in self.constraints:
            rel = self.language.require(rel_name)
            if len(args) != rel.arity:
                raise ReductLabError(f"constraint {rel_name}{args} has wrong arity")
            for a in args:
                if a not in names:
                    raise ReductLabError(f"undeclared variable {a!r}")

    def to_json(self) -> dict:
        return {"language": self.language.to_json(),
                "vars": list(self.variables),
                "constraints": [{"rel": r, "args": list(a)}
                                for r, a in self.constraints]}

    @classmethod
    def from_json(cls, data: dict, language: Language) -> "CspInstance":
        return cls(language, tuple(data["vars"]),
                   tuple((c["rel"], tuple(c["args"])) for c in data["constraints"]))


@dataclass(frozen=True)
class CspResult:
    satisfiable: bool
    witness: SituatedType | None = None

    def realization(self) -> dict | None:
        return realize(self.witness) if self.witness else None

    def to_json(self) -> dict:
        data: dict = {"satisfiable": self.satisfiable}
        if self.witness is not None:
            data["witness_type"] = self.witness.key()
            data["witness"] = self.realization()
        return data


def solve_csp(inst: CspInstance, max_vars: int | None = None,
              node_budget: int = 2_000_000) -> CspResult:
    """Decide a CSP instance, producing a witness type when satisfiable."""
    cap = max_vars if max_vars is not None else \
        max(DEFAULT_VAR_CAPS[inst.language.base], 12)
    if len(inst.variables) > cap:
        raise CapExceeded("csp-variables",
                          f"{len(inst.variables)} variables exceed cap {cap}")
    index = {v: i for i, v in enumerate(inst.variables)}
    constraints = [(inst.language.require(rel), tuple(index[a] for a in args))
                   for rel, args in inst.constraints]
    search = TypeSearch(inst.language.base, inst.language.constants,
                        len(inst.variables), constraints, node_budget)
    witness = search.run("witness")
    return CspResult(witness is not None, witness)


# --- pp and ep closure --------------------------------------------------------

@dataclass(frozen=True)
class Derivation:
    """A pp formula over the original language, or a finite union of them."""

    formulas: tuple[PpFormula, ...]

    @property
    def is_union(self) -> bool:
        return len(self.formulas) > 1

    def render(self) -> str:
        if len(self.formulas) == 1:
            return self.formulas[0].render()
        return " | ".join(f"({f.render()})" for f in self.formulas)


@dataclass
class ClosureReport:
    language: Language
    entries: list[tuple[Relation, Derivation]]
    max_total_vars: int
    max_arity: int
    steps: int = 0
    truncated: bool = False

    def find(self, target: Relation) -> Derivation | None:
        for rel, deriv in self.entries:
            if rel.arity == target.arity and rel.types == target.types \
                    and rel.constants == target.constants:
                return deriv
        return None

    def relations(self) -> list[Relation]:
        return [r for r, _ in self.entries]

    def to_json(self) -> dict:
        return {"language": self.language.name,
                "caps": {"max_total_vars": self.max_total_vars,
                         "max_arity": self.max_arity},
                "steps": self.steps,
                "truncated": self.truncated,
                "relations": [{"arity": r.arity, "types": len(r.types),
                               "derivation": d.render()}
                              for r, d in self.entries]}


def _arg_patterns(arity: int, n_existing: int, max_vars: int) -> Iterator[tuple[int, ...]]:
    """Argument tuples over existing variables 0..n_existing-1 plus canonically
    numbered fresh ones, max_vars total."""

    def extend(prefix: tuple[int, ...], used: int):
        if len(prefix) == arity:
            yield prefix
            return
        for v in range(min(used + 1, max_vars)):
            yield from extend(prefix + (v,), max(used, v + 1))

    yield from extend((), n_existing)


def _inline(parts: list[tuple[PpFormula, tuple[int, ...]]], n_used: int,
            out_vars: tuple[int, ...], base: str,
            config: ConstantConfig) -> PpFormula:
    """Substitute each part's derivation into a join, projecting onto out_vars."""
    names = [f"v{i + 1}" for i in range(n_used)]
    free = tuple(names[v] for v in out_vars)
    exist = [names[v] for v in range(n_used) if v not in out_vars]
    atoms: list[Atom] = []
    fresh = 0
    for formula, args in parts:
        mapping: dict[int, str] = {}
        for i, v in enumerate(args):
            mapping[i] = names[v]
        offset = len(formula.free_variables)
        for j in range(len(formula.existentials)):
            fresh += 1
            w = f"w{fresh}"
            exist.append(w)
            mapping[offset + j] = w
        for atom in formula.atoms:
            new_args = tuple(
                t if t.is_const else Term(mapping[t.index], 0)
                for t in atom.args)
            atoms.append(Atom(atom.kind, new_args, atom.rel_name))
    order = list(free) + exist
    index = {v: i for i, v in enumerate(order)}
    atoms = [Atom(a.kind,
                  tuple(t if t.is_const else Term(t.name, index[t.name])
                        for t in a.args),
                  a.rel_name) for a in atoms]
    return PpFormula(base, free, tuple(exist), tuple(atoms), config)


def pp_closure(language: Language, caps: tuple[int, int],
               max_relations: int = 300, max_steps: int = 40_000,
               node_budget: int = 300_000,
               with_unions: bool = False,
               rounds: int = 4) -> ClosureReport:
    """Fixpoint of single join+project steps within the caps.

    Each step conjoins at most two relations from the pool over at most
    max_total_vars distinct variables and projects onto at most max_arity of
    them.  Produced relations carry a pp derivation over the original
    language (derivations of pool relations are inlined).  Relations are
    deduplicated by type-set equality only, so variable permutations of a
    relation appear as separate entries.  Budget exhaustion is reported via
    the truncated flag, never silently.
    """
    max_vars, max_arity = caps
    if max_vars < 1 or max_arity < 1:
        raise CapExceeded("closure-caps", "caps must be positive")
    report = ClosureReport(language, [], max_vars, max_arity)
    base = language.base
    config = language.constants

    pool: list[tuple[Relation, PpFormula]] = []
    union_pool: list[tuple[Relation, Derivation]] = []
    seen: set = set()
    seen_recipes: set = set()

    def add(rel: Relation, deriv: Derivation,
            formula: PpFormula | None) -> bool:
        key = (rel.arity, rel.types)
        if key in seen or not rel.types:
            return False
        if len(pool) + len(union_pool) >= max_relations:
            report.truncated = True
            return False
        seen.add(key)
        if formula is not None:
            pool.append((rel, formula))
        else:
            union_pool.append((rel, deriv))
        report.entries.append((rel, deriv))
        return True

    def identity_formula(rel_name: str, arity: int) -> PpFormula:
        names = tuple(f"v{i + 1}" for i in range(arity))
        if rel_name == "=":
            atoms = (Atom("eq", (Term(names[0], 0), Term(names[1], 1))),)
        else:
            atoms = (Atom("rel", tuple(Term(n, i) for i, n in enumerate(names)),
                          rel_name),)
        return PpFormula(base, names, (), atoms, config)

    eq = equality_relation(base)
    add(eq, Derivation((identity_formula("=", 2),)), identity_formula("=", 2))
    for r in language.relations:
        f = identity_formula(r.name, r.arity)
        add(r, Derivation((f,)), f)

    def run_step(parts: list[tuple[int, tuple[int, ...]]], n_used: int) -> bool:
        changed = False
        constraints = []
        for pool_idx, args in parts:
            rel, _ = pool[pool_idx]
            constraints.append((rel, args))
        for r in range(1, min(max_arity, n_used) + 1):
            for out_vars in itertools.permutations(range(n_used), r):
                if report.steps >= max_steps:
                    report.truncated = True
                    return changed
                report.steps += 1
                # reindex so the projected variables come first
                perm = list(out_vars) + [v for v in range(n_used)
                                         if v not in out_vars]
                inv = {old: new for new, old in enumerate(perm)}
                permuted = [(rel, tuple(inv[a] for a in args))
                            for rel, args in constraints]
                try:
                    rel = _solve_relation(base, config, n_used, permuted,
                                          r, node_budget, "step")
                except CapExceeded:
                    report.truncated = True
                    continue
                if (rel.arity, rel.types) in seen:
                    continue
                formula = _inline(
                    [(pool[i][1], tuple(inv[a] for a in args))
                     for i, args in parts],
                    n_used, tuple(range(r)), base, config)
                if add(rel.renamed(formula.render()), Derivation((formula,)),
                       formula):
                    changed = True
        return changed

    def one_round() -> bool:
        changed = False
        size = len(pool)
        for i in range(size):
            arity_i = pool[i][0].arity
            for args_i in _arg_patterns(arity_i, 0, max_vars):
                n1 = max(args_i) + 1 if args_i else 0
                recipe = (i, args_i)
                if recipe not in seen_recipes:
                    seen_recipes.add(recipe)
                    if run_step([(i, args_i)], n1):
                        changed = True
                for j in range(i, size):
                    arity_j = pool[j][0].arity
                    if arity_i + arity_j > 2 * max_vars:
                        continue
                    for args_j in _arg_patterns(arity_j, n1, max_vars):
                        n_used = max(n1, (max(args_j) + 1) if args_j else 0)
                        if n_used > max_vars:
                            continue
                        recipe = (i, args_i, j, args_j)
                        if recipe in seen_recipes:
                            continue
                        seen_recipes.add(recipe)
                        if run_step([(i, args_i), (j, args_j)], n_used):
                            changed = True
                if report.truncated:
                    return changed
        if with_unions:
            everything = [(r, d) for r, d in report.entries]
            for (r1, d1), (r2, d2) in itertools.combinations(everything, 2):
                if r1.arity != r2.arity:
                    continue
                union = Relation("union", base, r1.arity, r1.types | r2.types,
                                 config)
                if add(union, Derivation(d1.formulas + d2.formulas), None):
                    changed = True
        return changed

    for _ in range(rounds):
        if not one_round() or report.truncated:
            break
    return report


def ep_closure(language: Language, caps: tuple[int, int],
               **kwargs) -> ClosureReport:
    """Closure under join+project and finite unions of same-arity relations."""
    return pp_closure(language, caps, with_unions=True, **kwargs)


def reevaluate(deriv: Derivation, language: Language,
               max_vars: int = 24, node_budget: int = 2_000_000) -> Relation:
    """Evaluate a stored derivation from scratch over the language."""
    parts = [evaluate_pp(f, language, max_vars=max_vars,
                         node_budget=node_budget)
             for f in deriv.formulas]
    types = frozenset().union(*(p.types for p in parts))
    return Relation(deriv.render(), language.base, parts[0].arity, types,
                    language.constants)


def evaluate_pp_text(text: str, language: Language,
                     free_variables: Sequence[str] | None = None,
                     max_vars: int | None = None) -> Relation:
    """Parse and evaluate in one call."""
    return evaluate_pp(parse_pp(text, language, free_variables), language,
                       max_vars=max_vars)
