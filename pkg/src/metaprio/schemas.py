"""JSON schemas for every file metaprio reads or writes."""

from .mt import RELATIONS, TRANSFORMS

_INT = {"type": "integer"}
_IDS = {"type": "array", "items": {"type": "integer"}}
_PAIRS = {"type": "array", "items": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}}
_VALUE = {
    "oneOf": [
        {"type": "integer"},
        {"type": "boolean"},
        {"type": "array", "items": {"type": "integer"}},
        {"type": "null"},
    ]
}


def _transform_variant(name):
    param = TRANSFORMS[name]
    props = {"name": {"const": name}}
    required = ["name"]
    if param:
        props[param] = _INT
        required.append(param)
    return {"properties": props, "required": required, "additionalProperties": False}


def _relation_variant(kind):
    param = RELATIONS[kind]
    props = {"kind": {"const": kind}}
    required = ["kind"]
    if param == "expr":
        props["expr"] = {"type": "string", "minLength": 1}
        required.append("expr")
    elif param:
        props[param] = _INT
        required.append(param)
    if kind == "eq_offset":
        props["times_n"] = {"type": "boolean"}
    return {"properties": props, "required": required, "additionalProperties": False}


MRS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "mrs.json",
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "description": {"type": "string"},
            "transform": {
                "type": "object",
                "properties": {"name": {"enum": sorted(TRANSFORMS)}},
                "required": ["name"],
                "oneOf": [_transform_variant(t) for t in sorted(TRANSFORMS)],
            },
            "relation": {
                "type": "object",
                "properties": {"kind": {"enum": sorted(RELATIONS)}},
                "required": ["kind"],
                "oneOf": [_relation_variant(r) for r in sorted(RELATIONS)],
            },
        },
        "required": ["id", "transform", "relation"],
        "additionalProperties": False,
    },
}

TESTS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "tests.json",
    "type": "object",
    "properties": {
        "role": {
            "enum": [
                "prioritizing_source",
                "prioritizing_followup",
                "validation_source",
                "validation_followup",
            ]
        },
        "entry": {"type": "string"},
        "cases": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "entry": {"type": "string"},
                    "args": {"type": "array", "items": _VALUE},
                },
                "required": ["id", "args"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["role", "cases"],
    "additionalProperties": False,
}

CONFIG = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "pipeline config",
    "type": "object",
    "properties": {
        "subject": {"type": "string"},
        "mrs": {"type": "string"},
        "prioritizing_tests": {"type": "string"},
        "validation_tests": {"type": "string"},
        "operators": {
            "type": "array",
            "items": {"enum": ["AOR", "ROR", "LOR", "CRP", "SDL"]},
            "uniqueItems": True,
        },
        "full_aor": {"type": "boolean"},
        "seeds": {
            "type": "object",
            "properties": {"coverage": _INT, "random": _INT},
            "additionalProperties": False,
        },
        "thresholds": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "random_orderings": {"type": "integer", "minimum": 1},
        "step_limit": {"type": "integer", "minimum": 1},
    },
    "required": ["subject", "mrs", "prioritizing_tests", "validation_tests"],
    "additionalProperties": False,
}

ANALYSIS = {
    "title": "analysis.json (CFG + PDG)",
    "type": "object",
    "properties": {
        "program_digest": {"type": "string"},
        "entry_node": _INT,
        "exit_node": _INT,
        "functions": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "statements": _IDS,
                    "returns": _IDS,
                    "cfg_edges": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "prefixItems": [_INT, _INT, {"enum": ["none", "true", "false"]}],
                            "minItems": 3,
                            "maxItems": 3,
                        },
                    },
                    "data_edges": _PAIRS,
                    "ctrl_edges": _PAIRS,
                },
                "required": [
                    "name", "statements", "returns", "cfg_edges", "data_edges", "ctrl_edges"
                ],
            },
        },
        "statements": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"id": _INT, "kind": {"type": "string"}, "operators": _INT},
                "required": ["id", "kind", "operators"],
            },
        },
    },
    "required": ["program_digest", "functions", "statements"],
}

_PROFILE = {
    "type": "object",
    "properties": {
        "test_id": {"type": "string"},
        "statements": _IDS,
        "branches": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [_INT, {"enum": ["true", "false"]}],
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "steps": _INT,
        "output": _VALUE,
        "error": {"type": ["string", "null"]},
    },
    "required": ["test_id", "statements", "branches", "steps", "output", "error"],
}

PROFILES = {
    "title": "profiles.json",
    "type": "object",
    "properties": {
        "program_digest": {"type": "string"},
        "profiles": {"type": "array", "items": _PROFILE},
        "mr_runs": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "mr": {"type": "string"},
                    "verdicts": {
                        "type": "object",
                        "additionalProperties": {"enum": ["satisfied", "violated", "error"]},
                    },
                    "statements": _IDS,
                    "branches": _PROFILE["properties"]["branches"],
                    "cost_steps": _INT,
                },
                "required": ["mr", "verdicts", "statements", "branches", "cost_steps"],
            },
        },
    },
    "required": ["program_digest", "profiles"],
}

SCORES = {
    "title": "scores.json",
    "type": "object",
    "properties": {
        "program_digest": {"type": "string"},
        "scores": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "mr": {"type": "string"},
                    "ta": _INT,
                    "ti": _INT,
                    "tfp": {"type": "number"},
                    "quality": {"type": "number"},
                    "quality_exact": {"type": "string"},
                    "methods": {"type": "object"},
                },
                "required": ["mr", "ta", "ti", "tfp", "quality", "quality_exact"],
            },
        },
    },
    "required": ["scores"],
}

MUTANTS = {
    "title": "mutants.json",
    "type": "object",
    "properties": {
        "program_digest": {"type": "string"},
        "mutants": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string"},
                    "operator": {"type": "string"},
                    "statement": _INT,
                    "path": {"type": "array", "items": {"type": "string"}},
                    "description": {"type": "string"},
                    "status": {"enum": ["candidate", "viable", "screened_out"]},
                    "digest": {"type": "string"},
                },
                "required": ["id", "operator", "statement", "path", "description", "status"],
            },
        },
    },
    "required": ["mutants"],
}

KILL_MATRIX = {
    "title": "km.json",
    "type": "object",
    "properties": {
        "role": {"enum": ["prioritizing", "validation"]},
        "mrs": {"type": "array", "items": {"type": "string"}},
        "mutants": {"type": "array", "items": {"type": "string"}},
        "kills": {"type": "array", "items": {"type": "array", "items": {"type": "boolean"}}},
        "mr_cost_steps": {"type": "array", "items": _INT},
    },
    "required": ["role", "mrs", "mutants", "kills", "mr_cost_steps"],
}

_ORDERING = {
    "type": "object",
    "properties": {
        "strategy": {
            "enum": ["centrality", "fault_based", "stmt_coverage", "branch_coverage", "random"]
        },
        "sequence": {"type": "array", "items": {"type": "string"}},
        "seed": {"type": ["integer", "null"]},
        "provenance": {"type": "object"},
    },
    "required": ["strategy", "sequence"],
}

ORDERING = {
    "title": "ordering.json",
    "type": "object",
    "properties": {"orderings": {"type": "array", "items": _ORDERING, "minItems": 1}},
    "required": ["orderings"],
}

_REPORT = {
    "type": "object",
    "properties": {
        "strategy": {"type": "string"},
        "sequence": {"type": ["array", "null"], "items": {"type": "string"}},
        "orderings": {"type": "integer", "minimum": 1},
        "curve": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"set_size": _INT, "pct_killed": {"type": "number"}},
                "required": ["set_size", "pct_killed"],
            },
        },
        "effective_size": {"type": "object", "additionalProperties": _INT},
        "apfd": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "avg_time_steps": {"type": "number", "minimum": 0},
        "killable_count": _INT,
        "mr_count": _INT,
    },
    "required": [
        "strategy", "curve", "effective_size", "apfd", "avg_time_steps",
        "killable_count", "mr_count",
    ],
}

REPORT = {
    "title": "report.json",
    "type": "object",
    "properties": {"reports": {"type": "array", "items": _REPORT, "minItems": 1}},
    "required": ["reports"],
}

SCHEMAS = {
    "mrs": MRS,
    "tests": TESTS,
    "config": CONFIG,
    "analysis": ANALYSIS,
    "profiles": PROFILES,
    "scores": SCORES,
    "mutants": MUTANTS,
    "kill_matrix": KILL_MATRIX,
    "ordering": ORDERING,
    "report": REPORT,
}
