"""Deciding primitive positive and existential positive definability.

Two semi-procedures run in tandem, round by round with growing caps: the
syntactic side searches the pp (or ep) closure of the language for the
target's exact type-set; the semantic side searches for a realizable
behavior that preserves every language relation and violates the target.
Either answer is sound on its own; when the caps run out with no answer the
verdict is Inconclusive, which is an honest outcome since no effective
bounds on the behavior arity and constant count are available here.

The behavior search tries the named catalog first, then exhaustively
enumerates the feasible table spaces (all unary tables over up to the
constant cap, and binary tables without constants).  Binary tables over
constants are beyond exhaustive enumeration; the catalog covers the cases
that matter for the shipped classifiers.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .errors import CapExceeded
from .structures import EQUALITY, Q_ORDER, RANDOM_GRAPH, get_base
from .types import ConstantConfig, no_constants
from .formulas import Language, Relation, equivalent
from .ppalg import ClosureReport, Derivation, ep_closure, pp_closure, reevaluate
from .canonical import (
    Behavior,
    Witness,
    catalog_behaviors_for,
    enumerate_behaviors,
    is_realizable,
    violates,
)

DEFINABLE = "Definable"
NOT_DEFINABLE = "NotDefinable"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DefinabilityCaps:
    max_vars: int = 8
    max_arity: int = 4
    max_behavior_arity: int = 2
    max_constants: int = 2
    closure_steps: int = 40_000
    node_budget: int = 300_000


@dataclass
class DefinabilityVerdict:
    kind: str
    mode: str                                  # 'pp' or 'ep'
    derivation: Derivation | None = None
    witness_behavior: Behavior | None = None
    witness: Witness | None = None
    caps: DefinabilityCaps = field(default_factory=DefinabilityCaps)
    elapsed: float = 0.0

    def to_json(self) -> dict:
        data: dict = {"kind": self.kind, "mode": self.mode,
                      "elapsed": round(self.elapsed, 3),
                      "caps": {"max_vars": self.caps.max_vars,
                               "max_behavior_arity": self.caps.max_behavior_arity,
                               "max_constants": self.caps.max_constants}}
        if self.derivation is not None:
            data["formula"] = self.derivation.render()
        if self.witness_behavior is not None:
            data["witness_behavior"] = self.witness_behavior.to_json()
        if self.witness is not None:
            data["violation"] = self.witness.to_json()
        return data


def _constant_configs(base: str, count: int) -> list[ConstantConfig]:
    """All constant configurations with `count` constants, up to type."""
    tag = get_base(base).tag
    if count == 0:
        return [no_constants(base)]
    if tag == Q_ORDER or tag == EQUALITY:
        return [ConstantConfig(base, count)]
    pairs = list(itertools.combinations(range(count), 2))
    return [ConstantConfig(base, count, frozenset(chosen))
            for r in range(len(pairs) + 1)
            for chosen in itertools.combinations(pairs, r)]


def _witness_candidates(language: Language, caps: DefinabilityCaps,
                        unary_only: bool = False):
    """Candidate behaviors in deterministic order: catalog first, then
    exhaustive enumerations of the feasible spaces."""
    base = language.base
    for b in catalog_behaviors_for(base):
        if b.arity > (1 if unary_only else caps.max_behavior_arity):
            continue
        if b.constants.count > caps.max_constants:
            continue
        yield b
    seen: set = set()
    for k in range(caps.max_constants + 1):
        for config in _constant_configs(base, k):
            try:
                for b in enumerate_behaviors(base, 1, config):
                    if b.entries not in seen:
                        seen.add(b.entries)
                        yield b
            except CapExceeded:
                continue
    if not unary_only and caps.max_behavior_arity >= 2:
        try:
            for b in enumerate_behaviors(base, 2):
                if b.entries not in seen:
                    seen.add(b.entries)
                    yield b
        except CapExceeded:
            pass


def _behavior_witness(target: Relation, language: Language,
                      caps: DefinabilityCaps,
                      unary_only: bool) -> tuple[Behavior, Witness] | None:
    for b in _witness_candidates(language, caps, unary_only):
        if any(violates(b, r) is not None for r in language.relations):
            continue
        w = violates(b, target)
        if w is not None:
            return b, w
    return None


def _closure_rounds(caps: DefinabilityCaps) -> list[tuple[int, int]]:
    out = []
    for v in (3, 4, 5, 6, 8):
        if v <= caps.max_vars:
            out.append(v)
    if caps.max_vars not in out:
        out.append(caps.max_vars)
    return out


def _decide(target: Relation, language: Language, caps: DefinabilityCaps,
            mode: str) -> DefinabilityVerdict:
    t0 = time.time()
    if target.base != language.base:
        raise CapExceeded("base", "target and language bases differ")
    closure_fn = ep_closure if mode == "ep" else pp_closure
    unary_only = mode == "ep"
    witness_done = False
    for round_no, max_vars in enumerate(_closure_rounds(caps)):
        arity_cap = min(caps.max_arity, max(target.arity, 2))
        try:
            report = closure_fn(language, (max_vars, arity_cap),
                                max_steps=caps.closure_steps,
                                node_budget=caps.node_budget)
            deriv = report.find(target)
        except CapExceeded:
            deriv = None
        if deriv is not None:
            return DefinabilityVerdict(DEFINABLE, mode, derivation=deriv,
                                       caps=caps, elapsed=time.time() - t0)
        if not witness_done:
            witness_done = True
            hit = _behavior_witness(target, language, caps, unary_only)
            if hit is not None:
                b, w = hit
                return DefinabilityVerdict(NOT_DEFINABLE, mode,
                                           witness_behavior=b, witness=w,
                                           caps=caps, elapsed=time.time() - t0)
    return DefinabilityVerdict(INCONCLUSIVE, mode, caps=caps,
                               elapsed=time.time() - t0)


def decide_pp(target: Relation, language: Language,
              caps: DefinabilityCaps | None = None) -> DefinabilityVerdict:
    """Is the target primitive positive definable from the language?

    Definable comes with an explicit pp formula; NotDefinable with a
    realizable behavior preserving the language and violating the target.
    Neither verdict is ever unsound; Inconclusive reports exhausted caps.
    """
    return _decide(target, language, caps or DefinabilityCaps(), "pp")


def decide_ep(target: Relation, language: Language,
              caps: DefinabilityCaps | None = None) -> DefinabilityVerdict:
    """Existential positive definability: closure with unions on the
    syntactic side, unary behaviors (endomorphisms) on the witness side."""
    return _decide(target, language, caps or DefinabilityCaps(), "ep")


def verify_verdict(v: DefinabilityVerdict, target: Relation,
                   language: Language) -> bool:
    """Re-check a verdict from scratch."""
    if v.kind == DEFINABLE:
        if v.derivation is None:
            return False
        if v.mode == "pp" and v.derivation.is_union:
            return False
        try:
            rel = reevaluate(v.derivation, language)
        except CapExceeded:
            return False
        return equivalent(rel, target)
    if v.kind == NOT_DEFINABLE:
        b, w = v.witness_behavior, v.witness
        if b is None or w is None:
            return False
        if v.mode == "ep" and b.arity != 1:
            return False
        if not is_realizable(b):
            return False
        if any(violates(b, r) is not None for r in language.relations):
            return False
        if w.behavior.entries != b.entries:
            return False
        return w.recheck(target)
    return v.kind == INCONCLUSIVE
