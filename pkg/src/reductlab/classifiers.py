"""Classifiers for reducts of the two catalogs and their CSPs.

The first-order classifiers work purely on type-sets: a permutation-style
generator preserves a relation exactly when the relation's type-set is
closed under the generator's type action, so each classification reduces to
finitely many closure tests.

The type actions are derived from the pointwise definitions of the
generators:

* order reversal maps a weak order to its reverse;
* a rotation moves every point below an irrational cut above the rest,
  preserving order on both sides, so on types it moves a downward-closed
  prefix of blocks after the remaining blocks (ties never split);
* switching about a vertex set flips the edges crossing the cut, so on
  types it flips edges across every subset of classes;
* complementation flips all edges between distinct classes.

The CSP classifiers compose the definability engine with the behavior
catalog.  Their hard side searches for a pp-definable hard relation, the
tractable side for a preserved catalog behavior; with neither found they
return Inconclusive, because four of the nine tractable binary operations
of the temporal dichotomy have no definition available here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import CapExceeded, ReductLabError, UnsupportedBase
from .structures import EQUALITY, Q_ORDER, RANDOM_GRAPH
from .types import SituatedType, WeakOrderType
from .formulas import Language, Relation, equivalent
from .catalog import builtin_relation, is_equality_determined, lift_to_order, to_equality_base
from .canonical import Behavior, Witness, catalog_behavior, preserves, violates
from .ppalg import Derivation, pp_closure, reevaluate
from .definability import DefinabilityCaps

ORDER_CLASSES = ("Order", "Betw", "Cycl", "Sep", "Equality")
GRAPH_CLASSES = ("Graph", "Switch", "Minus", "Both", "Equality")


@dataclass
class ClassifierReport:
    classifier: str
    verdict: str
    evidence: dict = field(default_factory=dict)
    caveats: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        def clean(v):
            if isinstance(v, (Behavior, Witness)):
                return v.to_json()
            if isinstance(v, Derivation):
                return v.render()
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v
        return {"classifier": self.classifier, "verdict": self.verdict,
                "evidence": clean(self.evidence), "caveats": list(self.caveats)}


# --- type actions -------------------------------------------------------------

def reversal_closed(r: Relation) -> bool:
    return all(SituatedType(r.base, t.core.reversed()) in r.types
               for t in r.types)


def rotation_closed(r: Relation) -> bool:
    """Closed under moving any downward-closed prefix of blocks to the top."""
    for t in r.types:
        b = t.core.n_blocks
        for cut in range(1, b):
            if SituatedType(r.base, t.core.rotated(cut)) not in r.types:
                return False
    return True


def switch_closed(r: Relation) -> bool:
    """Closed under flipping edges across every subset of classes."""
    for t in r.types:
        nb = t.core.n_blocks
        for size in range(1, nb // 2 + 1):
            for classes in itertools.combinations(range(nb), size):
                switched = t.core.switched(frozenset(classes))
                if SituatedType(r.base, switched) not in r.types:
                    return False
    return True


def complement_closed(r: Relation) -> bool:
    return all(SituatedType(r.base, t.core.complemented()) in r.types
               for t in r.types)


# --- first-order classifiers ----------------------------------------------------

def cameron_class(language: Language) -> ClassifierReport:
    """Which of the five order reducts the language generates.

    Exactly one label applies: Equality when every relation is determined by
    the equality pattern alone; otherwise by which of the reversal and
    rotation actions fix every relation.
    """
    if language.base != Q_ORDER or language.constants.count:
        raise UnsupportedBase("cameron_class expects a constant-free q-order language")
    symm = all(is_equality_determined(r) for r in language.relations)
    rev = all(reversal_closed(r) for r in language.relations)
    rot = all(rotation_closed(r) for r in language.relations)
    evidence = {"reversal_closed": rev, "rotation_closed": rot,
                "equality_pattern_determined": symm}
    if symm:
        verdict = "Equality"
    elif rev and rot:
        verdict = "Sep"
    elif rev:
        verdict = "Betw"
    elif rot:
        verdict = "Cycl"
    else:
        verdict = "Order"
    return ClassifierReport("cameron", verdict, evidence)


def thomas_class(language: Language) -> ClassifierReport:
    """Which of the five graph reducts the language generates."""
    if language.base != RANDOM_GRAPH or language.constants.count:
        raise UnsupportedBase("thomas_class expects a constant-free graph language")
    symm = all(is_equality_determined(r) for r in language.relations)
    sw = all(switch_closed(r) for r in language.relations)
    comp = all(complement_closed(r) for r in language.relations)
    evidence = {"switch_closed": sw, "complement_closed": comp,
                "equality_pattern_determined": symm}
    if symm:
        verdict = "Equality"
    elif sw and comp:
        verdict = "Both"
    elif comp:
        verdict = "Minus"
    elif sw:
        verdict = "Switch"
    else:
        verdict = "Graph"
    return ClassifierReport("thomas", verdict, evidence)


def graph_monoid_case(language: Language) -> ClassifierReport:
    """Which of the minimal endomorphism cases applies to a graph language.

    Reports which of the constant, clique-range and independent-range
    behaviors preserve every relation; when none does, the remaining case
    (automorphisms dense in the endomorphisms) is inferred from the
    tetrachotomy, not computed, and flagged as such.
    """
    if language.base != RANDOM_GRAPH:
        raise UnsupportedBase("graph_monoid_case expects a graph language")
    cases = {}
    for name in ("constant", "e_E", "e_N"):
        b = catalog_behavior(name, RANDOM_GRAPH)
        cases[name] = all(violates(b, r) is None for r in language.relations)
    holding = sorted(n for n, ok in cases.items() if ok)
    if holding:
        return ClassifierReport("graph_monoid_case", ",".join(holding), cases)
    report = ClassifierReport("graph_monoid_case", "aut_dense_in_end", cases)
    report.caveats.append(
        "verdict inferred from the tetrachotomy: none of the three behaviors "
        "preserves the language, so the dense-automorphisms case must hold; "
        "density itself is not computed")
    return report


# --- CSP classifiers -------------------------------------------------------------

def equality_csp(language: Language) -> ClassifierReport:
    """Dichotomy for languages determined by equality patterns:
    P via a constant endomorphism, P via a binary injection, else NP-complete
    with every equality relation pp-definable and a one-in-three route."""
    rels = []
    for r in language.relations:
        if r.base == EQUALITY:
            rels.append(r)
        else:
            if not is_equality_determined(r):
                raise ReductLabError(
                    f"relation {r.name} is not equality-pattern-determined")
            rels.append(to_equality_base(r))
    const = catalog_behavior("constant", EQUALITY)
    if all(violates(const, r) is None for r in rels):
        return ClassifierReport("equality_csp", "P-const",
                                {"behavior": "constant"})
    inj = catalog_behavior("binary_injection_equality")
    if all(violates(inj, r) is None for r in rels):
        return ClassifierReport("equality_csp", "P-injective",
                                {"behavior": "binary_injection_equality"})
    evidence = {
        "constant_violation": next(
            (violates(const, r) for r in rels if violates(const, r)), None),
        "injection_violation": next(
            (violates(inj, r) for r in rels if violates(inj, r)), None),
        "hardness_route": "one-in-three via the six-ary equality-pattern relation",
    }
    report = ClassifierReport("equality_csp", "NPc", evidence)
    report.caveats.append(
        "NP-completeness licensed by the dichotomy: with neither tractable "
        "behavior, every equality relation is pp-definable and the "
        "one-in-three structure is pp-interpretable")
    return report


TEMPORAL_HARD = ("Betw", "Cycl", "Sep", "T3", "mT3", "E6")
TRACTABLE_TEMPORAL = ("constant", "lex", "dual_lex", "pp", "dual_pp")


def _hard_relations_q() -> list[Relation]:
    rels = [builtin_relation(n) for n in ("Betw", "Cycl", "Sep", "T3", "mT3")]
    rels.append(lift_to_order(builtin_relation("E6")))
    return rels


def temporal_csp(language: Language,
                 caps: DefinabilityCaps | None = None) -> ClassifierReport:
    """CSP complexity of a temporal language, desk-scale.

    NPc when one of the six hard relations is pp-definable from the language
    at the caps (checked first); P when one of the cataloged behaviors
    preserves every relation; Inconclusive otherwise (four of the nine
    tractable binary operations are not available here, so the tractable
    side is deliberately incomplete).
    """
    if language.base != Q_ORDER:
        raise UnsupportedBase("temporal_csp expects a q-order language")
    caps = caps or DefinabilityCaps(max_vars=4, closure_steps=6000)
    hard = _hard_relations_q()
    # already-present hard relations come with the identity derivation
    for h in hard:
        for r in language.relations:
            if r.arity == h.arity and equivalent(r, h):
                deriv = _identity_derivation(r, language)
                return ClassifierReport(
                    "temporal_csp", "NPc",
                    {"hard_relation": h.name, "derivation": deriv,
                     "found_as": r.name})
    truncated = False
    try:
        closure = pp_closure(language, (caps.max_vars, 4),
                             max_steps=caps.closure_steps,
                             node_budget=caps.node_budget)
        truncated = closure.truncated
        for h in hard:
            deriv = closure.find(h)
            if deriv is not None:
                return ClassifierReport(
                    "temporal_csp", "NPc",
                    {"hard_relation": h.name, "derivation": deriv})
    except CapExceeded:
        truncated = True
    for name in TRACTABLE_TEMPORAL:
        b = catalog_behavior(name, Q_ORDER)
        if all(violates(b, r) is None for r in language.relations):
            report = ClassifierReport("temporal_csp", "P", {"behavior": name})
            if truncated:
                report.caveats.append(
                    "the hard-relation search hit its step budget before "
                    "exhausting the caps")
            return report
    report = ClassifierReport("temporal_csp", "Inconclusive", {})
    report.caveats.append(
        "no hard relation found at the caps and no cataloged behavior "
        "preserves the language; the four uncataloged tractable operations "
        "were not checked")
    if truncated:
        report.caveats.append("the hard-relation search hit its step budget")
    return report


def _identity_derivation(r: Relation, language: Language) -> Derivation:
    from .formulas import parse_pp
    names = [f"v{i + 1}" for i in range(r.arity)]
    text = f"{r.name}({','.join(names)})"
    return Derivation((parse_pp(text, language, names),))


def recheck_npc_derivation(report: ClassifierReport,
                           language: Language) -> bool:
    """Re-evaluate a stored NPc derivation and compare with the hard relation."""
    if report.verdict != "NPc" or "derivation" not in report.evidence:
        return False
    name = report.evidence["hard_relation"]
    hard = lift_to_order(builtin_relation("E6")) if name == "E6" and \
        language.base == Q_ORDER else builtin_relation(name)
    rel = reevaluate(report.evidence["derivation"], language)
    return equivalent(rel, hard)
