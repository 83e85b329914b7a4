"""Quantifier-free and primitive-positive formulas over the base signatures.

Grammar (ASCII):
    variables    [a-z][a-z0-9]*        (must be declared or bound)
    constants    c1, c2, ... and 0 as an alias for c1
    atoms        x<y   x=y   E(x,y)   Name(v1,...,vk)   true   false
    sugar        x!=y  ->  !(x=y)         x<=y  ->  (x<y | x=y)
    connectives  !  &  |   with the usual precedence, parentheses allowed
    existentials Ev1 v2 ... .  prefix (pp formulas only)

Quantifier-free formulas may use negation and disjunction; they are
normalized by evaluating them on every complete type of the free tuple, which
is the quantifier elimination both catalogs admit.  Primitive positive
formulas are conjunctions of atoms under an existential prefix; their atoms
are the named relations of a language plus equality (x!=y is accepted only
when the language carries a relation named "neq").
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ParseError, ReductLabError, UnsupportedBase
from .structures import EQUALITY, get_base
from .types import (
    EQ,
    GT,
    LT,
    ConstantConfig,
    GraphType,
    SituatedType,
    WeakOrderType,
    enumerate_types,
    no_constants,
)


@dataclass(frozen=True)
class Relation:
    """Exact semantics of a definable relation: a finite set of types.

    All types share the base, the arity and the constant configuration.
    """

    name: str
    base: str
    arity: int
    types: frozenset[SituatedType]
    constants: ConstantConfig = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.constants is None:
            object.__setattr__(self, "constants", no_constants(self.base))
        object.__setattr__(self, "types", frozenset(self.types))
        for t in self.types:
            if t.base != self.base or t.arity != self.arity or t.constants != self.constants:
                raise ReductLabError(
                    f"relation {self.name!r}: type {t.key()!r} does not match "
                    f"base/arity/constants")

    def __contains__(self, t: SituatedType) -> bool:
        return t in self.types

    def renamed(self, name: str) -> "Relation":
        return Relation(name, self.base, self.arity, self.types, self.constants)

    def sorted_types(self) -> list[SituatedType]:
        return sorted(self.types, key=lambda t: t.key())

    def to_json(self) -> dict:
        return {"name": self.name, "arity": self.arity,
                "types": [t.key() for t in self.sorted_types()]}


def equivalent(r1: Relation, r2: Relation) -> bool:
    """Type-set equality; names are irrelevant."""
    if r1.base != r2.base or r1.arity != r2.arity:
        raise ReductLabError("cannot compare relations of different base or arity")
    return r1.types == r2.types and r1.constants == r2.constants


def relation_from_predicate(name: str, base: str, arity: int, predicate,
                            constants: ConstantConfig | None = None) -> Relation:
    config = constants or no_constants(base)
    types = frozenset(t for t in enumerate_types(base, arity, config) if predicate(t))
    return Relation(name, base, arity, types, config)


@dataclass(frozen=True)
class Language:
    """A finite constraint language: named relations over one base, possibly
    expanded by constants."""

    name: str
    base: str
    relations: tuple[Relation, ...]
    constants: ConstantConfig = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.constants is None:
            object.__setattr__(self, "constants", no_constants(self.base))
        object.__setattr__(self, "relations", tuple(self.relations))
        for r in self.relations:
            if r.base != self.base:
                raise ReductLabError(f"relation {r.name} has base {r.base}, "
                                     f"language has {self.base}")

    def get(self, name: str) -> Relation | None:
        for r in self.relations:
            if r.name == name:
                return r
        return None

    def require(self, name: str) -> Relation:
        r = self.get(name)
        if r is None:
            raise ReductLabError(f"unknown relation {name!r} in language {self.name!r}")
        return r

    @property
    def max_arity(self) -> int:
        return max((r.arity for r in self.relations), default=0)

    def to_json(self) -> dict:
        data: dict = {"name": self.name, "base": self.base,
                      "relations": [{"name": r.name, "formula": render(r)}
                                    for r in self.relations]}
        if self.constants.count:
            data["constants"] = self.constants.to_json()
        return data


# --- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    """A variable (index into the formula's variable list) or a constant."""

    name: str
    index: int
    is_const: bool = False


@dataclass(frozen=True)
class Atom:
    kind: str                      # 'lt' | 'eq' | 'edge' | 'rel' | 'true' | 'false'
    args: tuple[Term, ...] = ()
    rel_name: str | None = None


@dataclass(frozen=True)
class Not:
    child: "Node"


@dataclass(frozen=True)
class And:
    children: tuple["Node", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Node", ...]


Node = Atom | Not | And | Or


@dataclass(frozen=True)
class QfFormula:
    base: str
    variables: tuple[str, ...]
    root: Node
    constants: ConstantConfig = field(default=None)  # type: ignore[assignment]
    text: str = ""

    def __post_init__(self):
        if self.constants is None:
            object.__setattr__(self, "constants", no_constants(self.base))


@dataclass(frozen=True)
class PpFormula:
    base: str
    free_variables: tuple[str, ...]
    existentials: tuple[str, ...]
    atoms: tuple[Atom, ...]
    constants: ConstantConfig = field(default=None)  # type: ignore[assignment]
    text: str = ""

    def __post_init__(self):
        if self.constants is None:
            object.__setattr__(self, "constants", no_constants(self.base))

    @property
    def total_variables(self) -> int:
        return len(self.free_variables) + len(self.existentials)

    def render(self) -> str:
        parts = [_render_atom(a, self.free_variables + self.existentials)
                 for a in self.atoms]
        body = " & ".join(parts) if parts else "true"
        if self.existentials:
            return "E" + " ".join(self.existentials) + ". " + body
        return body


# --- tokenizer / parser -----------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _NAME_RE.match(text, pos)
        if m:
            tokens.append(("name", m.group(0), pos))
            pos = m.end()
            continue
        for two in ("<=", "!="):
            if text.startswith(two, pos):
                tokens.append(("op", two, pos))
                pos += 2
                break
        else:
            ch = text[pos]
            if ch == "0":
                tokens.append(("zero", "0", pos))
            elif ch in "<=(),&|!.":
                tokens.append(("op", ch, pos))
            else:
                raise ParseError(f"unexpected character {ch!r}", pos)
            pos += 1
    return tokens


class _Parser:
    def __init__(self, text: str, base: str, variables: Sequence[str],
                 language: Language | None, constants: ConstantConfig,
                 pp_mode: bool, declared_only: bool):
        self.text = text
        self.base = base
        self.language = language
        self.constants = constants
        self.pp_mode = pp_mode
        self.declared_only = declared_only
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables: list[str] = list(variables)

    # token helpers
    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", pos)

    # term resolution
    def term(self, name: str, pos: int) -> Term:
        if name in self.variables:
            return Term(name, self.variables.index(name))
        if self.constants.count:
            if name == "0" and self.constants.count >= 1:
                return Term("c1", 0, True)
            m = re.fullmatch(r"c([0-9]+)", name)
            if m and 1 <= int(m.group(1)) <= self.constants.count:
                return Term(name, int(m.group(1)) - 1, True)
        if self.declared_only:
            raise ParseError(f"undeclared variable {name!r}", pos)
        self.variables.append(name)
        return Term(name, len(self.variables) - 1)

    def parse_term(self) -> Term:
        kind, val, pos = self.next()
        if kind in ("name", "zero"):
            return self.term(val, pos)
        raise ParseError(f"expected a variable or constant, found {val!r}", pos)

    # grammar
    def parse_formula(self) -> Node:
        node = self.parse_conj()
        kind, val, pos = self.peek()
        parts = [node]
        while val == "|":
            if self.pp_mode:
                raise ParseError("disjunction is not allowed in pp formulas", pos)
            self.next()
            parts.append(self.parse_conj())
            kind, val, pos = self.peek()
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_conj(self) -> Node:
        parts = [self.parse_unary()]
        while self.peek()[1] == "&":
            self.next()
            parts.append(self.parse_unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_unary(self) -> Node:
        kind, val, pos = self.peek()
        if val == "!":
            if self.pp_mode:
                raise ParseError("negation is not allowed in pp formulas", pos)
            self.next()
            return Not(self.parse_unary())
        if val == "(":
            self.next()
            node = self.parse_formula()
            self.expect(")")
            return node
        return self.parse_atom()

    def parse_atom(self) -> Node:
        kind, val, pos = self.next()
        if val == "true":
            return Atom("true")
        if val == "false":
            if self.pp_mode:
                raise ParseError("'false' is not a pp atom", pos)
            return Atom("false")
        if kind == "name" and self.peek()[1] == "(":
            return self.parse_rel_atom(val, pos)
        if kind in ("name", "zero"):
            left = self.term(val, pos)
            okind, op, opos = self.next()
            if op not in ("<", "=", "!=", "<="):
                raise ParseError(f"expected a comparison after {val!r}", opos)
            right = self.parse_term()
            return self.comparison(left, op, right, opos)
        raise ParseError(f"unexpected token {val!r}", pos)

    def parse_rel_atom(self, name: str, pos: int) -> Node:
        self.expect("(")
        args = [self.parse_term()]
        while self.peek()[1] == ",":
            self.next()
            args.append(self.parse_term())
        self.expect(")")
        arity = self.resolve_relation(name, pos)
        if arity != len(args):
            raise ParseError(f"relation {name!r} expects {arity} arguments, got "
                             f"{len(args)}", pos)
        return Atom("rel", tuple(args), rel_name=name)

    def resolve_relation(self, name: str, pos: int) -> int:
        if name == "E" and not self.pp_mode:
            if not get_base(self.base).has_edges:
                raise ParseError(f"edge atoms need a graph base, not {self.base}", pos)
            return 2
        if self.language is not None:
            r = self.language.get(name)
            if r is not None:
                return r.arity
        if name == "E" and get_base(self.base).has_edges and self.language is None:
            return 2
        raise ParseError(f"unknown relation {name!r}", pos)

    def comparison(self, left: Term, op: str, right: Term, pos: int) -> Node:
        if op == "=":
            return Atom("eq", (left, right))
        if op == "<":
            if self.pp_mode:
                if self.language is None or self.language.get("<") is None:
                    raise ParseError("'<' is not available: the language has no "
                                     "relation named '<'", pos)
                return Atom("rel", (left, right), rel_name="<")
            if not get_base(self.base).is_ordered:
                raise ParseError(f"order atoms need an ordered base, not {self.base}", pos)
            return Atom("lt", (left, right))
        if op == "!=":
            if self.pp_mode:
                if self.language is None or self.language.get("neq") is None:
                    raise ParseError("x!=y needs a relation named 'neq' in pp mode", pos)
                return Atom("rel", (left, right), rel_name="neq")
            return Not(Atom("eq", (left, right)))
        if op == "<=":
            if self.pp_mode:
                raise ParseError("x<=y expands to a disjunction; not a pp atom", pos)
            lt = self.comparison(left, "<", right, pos)
            return Or((lt, Atom("eq", (left, right))))
        raise ParseError(f"unknown comparison {op!r}", pos)

    def parse_existential_prefix(self) -> list[str]:
        # "Ev1 v2 ."  -- the first bound variable is glued to the E
        kind, val, pos = self.peek()
        if kind != "name" or not val.startswith("E") or len(val) < 2:
            return []
        # lookahead: a relation atom "Name(..." must not be eaten
        if self.i + 1 < len(self.tokens) and self.tokens[self.i + 1][1] == "(":
            return []
        save = self.i
        names = [val[1:]]
        self.next()
        while True:
            kind, val, pos = self.peek()
            if val == ".":
                self.next()
                return names
            if kind == "name":
                names.append(val)
                self.next()
            else:
                self.i = save
                return []


def parse_qf(text: str, base: str, variables: Sequence[str],
             language: Language | None = None,
             constants: ConstantConfig | None = None) -> QfFormula:
    """Parse a quantifier-free formula over declared variables."""
    config = constants if constants is not None else no_constants(base)
    p = _Parser(text, base, variables, language, config,
                pp_mode=False, declared_only=True)
    root = p.parse_formula()
    if p.peek()[0] is not None:
        raise ParseError(f"trailing input {p.peek()[1]!r}", p.peek()[2])
    return QfFormula(base, tuple(variables), root, config, text)


def parse_pp(text: str, language: Language,
             free_variables: Sequence[str] | None = None) -> PpFormula:
    """Parse a primitive positive formula over a language.

    Free variables default to their order of first occurrence in the text.
    """
    config = language.constants
    p = _Parser(text, language.base, [], language, config,
                pp_mode=True, declared_only=False)
    exist = p.parse_existential_prefix()
    p.variables = list(exist)
    root = p.parse_formula()
    if p.peek()[0] is not None:
        raise ParseError(f"trailing input {p.peek()[1]!r}", p.peek()[2])
    atoms = _flatten_conjunction(root)
    occurring = [v for v in p.variables if v not in exist]
    if free_variables is None:
        free = tuple(occurring)
    else:
        free = tuple(free_variables)
        missing = set(occurring) - set(free)
        if missing:
            raise ParseError(f"variables {sorted(missing)} are neither free nor bound")
    order = list(free) + list(exist)
    index = {v: i for i, v in enumerate(order)}
    remapped = []
    for atom in atoms:
        args = tuple(t if t.is_const else Term(t.name, index[t.name]) for t in atom.args)
        remapped.append(Atom(atom.kind, args, atom.rel_name))
    return PpFormula(language.base, free, tuple(exist), tuple(remapped), config, text)


def _flatten_conjunction(node: Node) -> list[Atom]:
    if isinstance(node, Atom):
        return [] if node.kind == "true" else [node]
    if isinstance(node, And):
        out = []
        for child in node.children:
            out.extend(_flatten_conjunction(child))
        return out
    raise ParseError("pp formulas are conjunctions of atoms")


# --- evaluation on types ----------------------------------------------------

def _positions(atom: Atom, n_vars: int) -> tuple[int, ...]:
    return tuple(n_vars + t.index if t.is_const else t.index for t in atom.args)


def atom_holds(atom: Atom, t: SituatedType, n_vars: int,
               language: Language | None) -> bool:
    core = t.core
    pos = _positions(atom, n_vars)
    if atom.kind == "true":
        return True
    if atom.kind == "false":
        return False
    if atom.kind == "eq":
        i, j = pos
        if isinstance(core, WeakOrderType):
            return core.compare(i, j) == EQ
        return core.same_class(i, j)
    if atom.kind == "lt":
        i, j = pos
        return core.compare(i, j) == LT
    if atom.kind == "rel":
        if atom.rel_name == "E" and (language is None or language.get("E") is None):
            i, j = pos
            return isinstance(core, GraphType) and core.adjacent(i, j)
        rel = language.require(atom.rel_name)  # type: ignore[union-attr]
        return _project_mixed(t, pos, rel) in rel.types
    raise ReductLabError(f"unknown atom kind {atom.kind}")


def _project_mixed(t: SituatedType, positions: tuple[int, ...],
                   rel: Relation) -> SituatedType:
    """Project a situated type onto raw core positions, matching the target
    relation's constant expectations."""
    if rel.constants.count:
        if rel.constants != t.constants:
            raise ReductLabError("relation constants differ from the evaluated type")
        full = tuple(positions) + tuple(
            t.arity + i for i in range(t.constants.count))
        return SituatedType(t.base, t.core.project(full), t.constants)
    return SituatedType(t.base, t.core.project(positions))


def _eval_node(node: Node, t: SituatedType, n_vars: int,
               language: Language | None) -> bool:
    if isinstance(node, Atom):
        return atom_holds(node, t, n_vars, language)
    if isinstance(node, Not):
        return not _eval_node(node.child, t, n_vars, language)
    if isinstance(node, And):
        return all(_eval_node(c, t, n_vars, language) for c in node.children)
    if isinstance(node, Or):
        return any(_eval_node(c, t, n_vars, language) for c in node.children)
    raise ReductLabError(f"unknown node {node!r}")


def evaluate_qf(f: QfFormula, t: SituatedType,
                language: Language | None = None) -> bool:
    if t.arity != len(f.variables):
        raise ReductLabError("type arity does not match the formula's variables")
    return _eval_node(f.root, t, len(f.variables), language)


def normalize(f: QfFormula, base: str | None = None,
              language: Language | None = None, name: str | None = None) -> Relation:
    """The exact relation a quantifier-free formula defines: its set of types."""
    tag = base or f.base
    if tag != f.base:
        raise UnsupportedBase("formula base differs from the requested base")
    types = frozenset(t for t in enumerate_types(tag, len(f.variables), f.constants)
                      if evaluate_qf(f, t, language))
    return Relation(name or f.text or "<anonymous>", tag, len(f.variables),
                    types, f.constants)


# --- rendering --------------------------------------------------------------

def _render_atom(atom: Atom, names: Sequence[str]) -> str:
    def nm(t: Term) -> str:
        return t.name
    if atom.kind == "true":
        return "true"
    if atom.kind == "false":
        return "false"
    if atom.kind == "eq":
        return f"{nm(atom.args[0])}={nm(atom.args[1])}"
    if atom.kind == "lt":
        return f"{nm(atom.args[0])}<{nm(atom.args[1])}"
    if atom.kind == "rel":
        if atom.rel_name == "<":
            return f"{nm(atom.args[0])}<{nm(atom.args[1])}"
        return f"{atom.rel_name}({','.join(nm(a) for a in atom.args)})"
    raise ReductLabError(f"cannot render {atom}")


def _type_conjunction(t: SituatedType, names: Sequence[str]) -> str:
    """A conjunction of base atoms pinning the type exactly."""
    core = t.core
    k = core.arity
    parts: list[str] = []
    if t.constants.count == 1:
        all_names = list(names) + ["0"]
    else:
        all_names = list(names) + [f"c{i + 1}" for i in range(t.constants.count)]
    for i in range(k):
        for j in range(i + 1, k):
            a, b = all_names[i], all_names[j]
            if isinstance(core, WeakOrderType):
                c = core.compare(i, j)
                parts.append(f"{a}<{b}" if c == LT else
                             (f"{b}<{a}" if c == GT else f"{a}={b}"))
            else:
                if core.same_class(i, j):
                    parts.append(f"{a}={b}")
                    continue
                if core.adjacent(i, j):
                    parts.append(f"E({a},{b})")
                elif t.base != EQUALITY and get_base(t.base).has_edges:
                    parts.append(f"!({a}={b}) & !E({a},{b})")
                else:
                    parts.append(f"!({a}={b})")
                if core.order is not None:
                    c = core.compare(i, j)
                    parts.append(f"{a}<{b}" if c == LT else f"{b}<{a}")
    if not parts:
        parts.append("true" if k else "true")
    return " & ".join(parts)


def render(r: Relation, variables: Sequence[str] | None = None) -> str:
    """Canonical disjunctive normal form: one disjunct per type."""
    names = list(variables) if variables is not None else \
        [f"x{i + 1}" for i in range(r.arity)]
    if r.arity == 0:
        return "true" if r.types else "false"
    if not r.types:
        v = names[0]
        return f"!({v}={v})"
    disjuncts = [_type_conjunction(t, names) for t in r.sorted_types()]
    if len(disjuncts) == 1:
        return disjuncts[0]
    return " | ".join(f"({d})" for d in disjuncts)
