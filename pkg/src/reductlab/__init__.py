"""reductlab: an exact desk-scale workbench for reducts of the dense linear
order and the random graph.

Definable relations are finite sets of quantifier-free types; canonical
functions are finite behaviors on 2-types.  On top of these the package
decides primitive-positive and existential-positive definability, classifies
reducts and their CSP complexity, verifies primitive positive
interpretations, and checks partition arrow properties.
"""

from .structures import (
    BASES,
    EQUALITY,
    ORDERED_RANDOM_GRAPH,
    Q_ORDER,
    RANDOM_GRAPH,
    BaseCatalog,
    FiniteStructure,
    chain,
    check_age,
    embeddings,
    graph_structure,
)
from .types import (
    ConstantConfig,
    GraphType,
    ProductType,
    SituatedType,
    WeakOrderType,
    enumerate_types,
    ordered_bell,
    refinements,
    restrict_type,
    type_of_tuple,
)
from .formulas import (
    Language,
    PpFormula,
    QfFormula,
    Relation,
    equivalent,
    normalize,
    parse_pp,
    parse_qf,
    render,
)
from .catalog import (
    BooleanRelation,
    BooleanStructure,
    boolean_structure,
    builtin_relation,
    language,
)
from .ppalg import (
    ClosureReport,
    CspInstance,
    CspResult,
    ep_closure,
    evaluate_pp,
    pp_closure,
    solve_csp,
)
from .canonical import (
    Behavior,
    Witness,
    apply_to_type,
    catalog_behavior,
    dual,
    enumerate_behaviors,
    is_realizable,
    preserves,
    violates,
)
from .definability import (
    DefinabilityCaps,
    DefinabilityVerdict,
    decide_ep,
    decide_pp,
    verify_verdict,
)
from .classifiers import (
    cameron_class,
    equality_csp,
    graph_monoid_case,
    temporal_csp,
    thomas_class,
)
from .interp import (
    Interpretation,
    bool_polymorphisms,
    compose,
    essentially_permutations,
    hardness_chain,
    shipped_interpretation,
    verify_allen_biinterpretation,
    verify_interpretation,
)
from .ramsey import ArrowQuery, arrows, chain_query, product_arrows

__version__ = "0.1.0"
