"""Loading languages, CSP instances and interpretations from JSON files."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ReductLabError
from .structures import get_base
from .types import ConstantConfig
from .formulas import Language, Relation, normalize, parse_qf
from .catalog import builtin_relation
from .ppalg import CspInstance
from .interp import RULES, Interpretation, shipped_interpretation
from .catalog import boolean_structure


def load_language(source: str | dict) -> Language:
    """A language from a JSON file or dict:
    {"name": ..., "base": ..., "constants"?: int | {...},
     "relations": [{"name": ..., "formula": ... | "builtin": ...}, ...]}
    """
    if isinstance(source, str):
        data = json.loads(Path(source).read_text())
    else:
        data = source
    base = get_base(data["base"]).tag
    config = ConstantConfig.from_json(base, data.get("constants"))
    rels = []
    for spec in data["relations"]:
        if "builtin" in spec or ("formula" not in spec and "types" not in spec):
            name = spec.get("builtin", spec["name"])
            rel = builtin_relation(name, base)
            rels.append(rel.renamed(spec["name"]))
            continue
        if "formula" in spec:
            arity = spec.get("arity")
            if arity is None:
                raise ReductLabError(
                    f"relation {spec['name']!r}: formula relations need an arity")
            names = [f"x{i + 1}" for i in range(arity)]
            f = parse_qf(spec["formula"], base, names)
            rels.append(normalize(f, name=spec["name"]))
            continue
        raise ReductLabError(f"relation {spec['name']!r} has no definition")
    return Language(data.get("name", "<language>"), base, tuple(rels), config)


def load_instance(source: str | dict) -> CspInstance:
    if isinstance(source, str):
        data = json.loads(Path(source).read_text())
    else:
        data = source
    lang_src = data.get("language", data.get("language_ref"))
    if isinstance(lang_src, str) and not lang_src.endswith(".json"):
        raise ReductLabError("language_ref must point to a JSON file")
    language = load_language(lang_src)
    return CspInstance.from_json(data, language)


def load_interpretation(source: str | dict) -> Interpretation:
    """Either {"shipped": name} or a full
    {"name", "dim", "language", "delta", "phi": {...}, "phi_eq",
     "coord_rule", "target": boolean-structure-name}."""
    if isinstance(source, str):
        data = json.loads(Path(source).read_text())
    else:
        data = source
    if "shipped" in data:
        return shipped_interpretation(data["shipped"])
    from .formulas import parse_pp
    lang = load_language(data["language"])
    d = data["dim"]
    rule = RULES.get(data.get("coord_rule", ""))

    def block_names(prefix: str, k: int) -> list[str]:
        return [f"{prefix}{b + 1}_{i + 1}" for b in range(k) for i in range(d)]

    delta = parse_pp(data["delta"], lang, [f"x1_{i + 1}" for i in range(d)])
    target = boolean_structure(data["target"])
    phis = []
    for rel_name, text in data["phi"].items():
        arity = target.get(rel_name).arity
        phis.append((rel_name, parse_pp(text, lang, block_names("x", arity))))
    phi_eq = parse_pp(data["phi_eq"], lang, block_names("x", 2))
    return Interpretation(data.get("name", "<interpretation>"), d, lang,
                          delta, tuple(phis), phi_eq, rule,
                          target_bool=target)
