"""Reading and writing metaprio's JSON files.

Everything written goes through :func:`dumps`, which sorts keys and uses a
fixed layout so that reruns are byte-identical.
"""

import hashlib
import json
from pathlib import Path

import jsonschema

from .errors import ConfigError, SchemaError
from .execution import CoverageUnion, to_value
from .minilang import parse
from .mt import MrRunResult, MrSpec, TestCase, TestSuite
from .prioritize import Ordering
from .schemas import SCHEMAS


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def write_json(path, obj):
    text = dumps(obj)
    Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


def sha256(text) -> str:
    if isinstance(text, str):
        text = text.encode("utf-8")
    return hashlib.sha256(text).hexdigest()


def _where(err):
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return "$" + path


def validate(obj, kind, source="<input>"):
    """Check ``obj`` against the named schema; raise SchemaError with the JSON path."""
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaError(f"{source}: {_where(err)}: {err.message}")
    return obj


def read_json(path, kind=None):
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if kind:
        validate(obj, kind, str(path))
    return obj


def load_program(path, version_label="v0"):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file") from None
    return parse(text, version_label)


def mrs_from_json(obj):
    return [MrSpec.from_json(m) for m in obj]


def load_mrs(path):
    return mrs_from_json(read_json(path, "mrs"))


def suite_from_json(obj, default_entry=None):
    entry = obj.get("entry", default_entry)
    cases = []
    for c in obj["cases"]:
        e = c.get("entry", entry)
        if e is None:
            raise SchemaError(f"test {c['id']}: no entry function given")
        cases.append(TestCase(c["id"], e, tuple(to_value(a) for a in c["args"])))
    try:
        return TestSuite(obj["role"], tuple(cases))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def load_suite(path, default_entry=None):
    return suite_from_json(read_json(path, "tests"), default_entry)


# -- artifacts -------------------------------------------------------------------


def _branches(bs):
    return [[s, tag] for s, tag in sorted(bs)]


def _out(v):
    return list(v) if isinstance(v, tuple) else v


def profile_to_json(p):
    return {
        "test_id": p.test_id,
        "statements": sorted(p.statements),
        "branches": _branches(p.branches),
        "steps": p.steps,
        "output": _out(p.output),
        "error": p.error,
    }


def mr_run_to_json(r):
    return {
        "mr": r.mr,
        "verdicts": dict(r.verdicts),
        "statements": sorted(r.coverage.statements),
        "branches": _branches(r.coverage.branches),
        "cost_steps": r.cost_steps,
    }


def profiles_to_json(program_digest, profiles, mr_runs=()):
    return {
        "program_digest": program_digest,
        "profiles": [profile_to_json(p) for p in sorted(profiles, key=lambda p: p.test_id)],
        "mr_runs": [mr_run_to_json(r) for r in mr_runs],
    }


def mr_runs_from_json(obj):
    """MR run results (verdicts and coverage only) from a profiles document."""
    digest = obj.get("program_digest", "")
    if not obj.get("mr_runs"):
        raise SchemaError("profiles document has no mr_runs; run with --mrs")
    return [
        MrRunResult(
            r["mr"],
            tuple(sorted(r["verdicts"].items())),
            CoverageUnion(
                frozenset(r["statements"]),
                frozenset((s, tag) for s, tag in r["branches"]),
                digest,
            ),
            r["cost_steps"],
        )
        for r in obj["mr_runs"]
    ]


def mutants_to_json(program_digest, mutants):
    return {
        "program_digest": program_digest,
        "mutants": [
            {
                "id": m.id,
                "operator": m.operator,
                "statement": m.sid,
                "path": list(m.path),
                "description": m.description,
                "status": m.status,
                "digest": m.mutated_program.source_digest,
            }
            for m in mutants
        ],
    }


def scores_to_json(program_digest, scores):
    return {"program_digest": program_digest, "scores": [s.to_json() for s in scores]}


def orderings_to_json(orderings):
    return {"orderings": [o.to_json() for o in orderings]}


def orderings_from_json(obj):
    return [Ordering.from_json(o) for o in obj["orderings"]]
