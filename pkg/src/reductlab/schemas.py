"""JSON schemas for the CLI reports; every emitted report validates."""

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["command", "status", "result"],
    "properties": {
        "command": {"type": "string"},
        "status": {"enum": ["ok", "inconclusive", "error"]},
        "result": {"type": "object"},
    },
}

CLASSIFY_RESULT = {
    "type": "object",
    "required": ["classifier", "verdict", "evidence", "caveats"],
    "properties": {
        "classifier": {"type": "string"},
        "verdict": {"type": "string"},
        "evidence": {"type": "object"},
        "caveats": {"type": "array", "items": {"type": "string"}},
    },
}

DEFINE_RESULT = {
    "type": "object",
    "required": ["kind", "mode"],
    "properties": {
        "kind": {"enum": ["Definable", "NotDefinable", "Inconclusive"]},
        "mode": {"enum": ["pp", "ep"]},
        "formula": {"type": "string"},
        "witness_behavior": {"type": "object"},
        "violation": {"type": "object"},
    },
}

SOLVE_RESULT = {
    "type": "object",
    "required": ["satisfiable"],
    "properties": {
        "satisfiable": {"type": "boolean"},
        "witness_type": {"type": "string"},
        "witness": {"type": "object"},
    },
}

RAMSEY_RESULT = {
    "type": "object",
    "required": ["holds"],
    "properties": {
        "holds": {"type": "boolean"},
        "p_copies": {"type": "integer"},
        "colorings": {"type": "integer"},
        "bad_coloring": {"type": "array"},
    },
}

INTERP_RESULT = {
    "type": "object",
    "required": ["name", "ok", "surjective", "checked", "counterexamples"],
    "properties": {
        "name": {"type": "string"},
        "ok": {"type": "boolean"},
        "surjective": {"type": "boolean"},
        "checked": {"type": "integer"},
        "counterexamples": {"type": "array"},
        "skipped": {"type": "array"},
    },
}

CATALOG_RESULT = {
    "type": "object",
    "required": ["relations", "behaviors", "interpretations"],
    "properties": {
        "relations": {"type": "array", "items": {
            "type": "object",
            "required": ["name", "base", "arity", "defines"]}},
        "behaviors": {"type": "array", "items": {
            "type": "object", "required": ["name", "base", "arity"]}},
        "interpretations": {"type": "array",
                            "items": {"type": "object", "required": ["name"]}},
    },
}

PARSE_RESULT = {
    "type": "object",
    "required": ["normalized", "types"],
    "properties": {
        "normalized": {"type": "string"},
        "types": {"type": "array", "items": {"type": "string"}},
        "count": {"type": "integer"},
    },
}

RESULT_SCHEMAS = {
    "classify": CLASSIFY_RESULT,
    "define": DEFINE_RESULT,
    "solve": SOLVE_RESULT,
    "ramsey": RAMSEY_RESULT,
    "verify-interp": INTERP_RESULT,
    "catalog": CATALOG_RESULT,
    "parse": PARSE_RESULT,
}


def validate_report(report: dict) -> None:
    import jsonschema
    jsonschema.validate(report, VERDICT_SCHEMA)
    cmd = report["command"]
    if cmd in RESULT_SCHEMAS:
        jsonschema.validate(report["result"], RESULT_SCHEMAS[cmd])
