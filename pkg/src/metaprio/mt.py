"""Metamorphic relations: transforms, relation checks and MR runs.

A transform rewrites the first array-typed argument of a test case; other
arguments pass through unchanged.  Each source case yields exactly one
follow-up case.
"""

import random
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .errors import MiniRuntimeError, MiniTypeError, ShapeMismatch, TypeMismatch
from .execution import (
    DEFAULT_STEP_LIMIT,
    coverage_union,
    evaluate_expression,
    execute,
    value_type,
)
from .minilang import nodes as n
from .minilang.parser import parse_expression
from .minilang.typecheck import expr_type

SATISFIED = "satisfied"
VIOLATED = "violated"
ERROR = "error"

# transform name -> parameter name (None: no parameter)
TRANSFORMS = {
    "permute": "seed",
    "reverse": None,
    "scale_elements": "k",
    "add_constant": "c",
    "duplicate_all": None,
    "append": "v",
    "remove_first": None,
    "negate_elements": None,
}

# relation kind -> parameter name
RELATIONS = {
    "eq": None,
    "eq_scaled": "k",
    "eq_offset": "c",
    "le": None,
    "ge": None,
    "custom": "expr",
}

SOURCE_ROLES = ("prioritizing_source", "validation_source")
FOLLOWUP_ROLES = ("prioritizing_followup", "validation_followup")


@dataclass(frozen=True)
class Transform:
    name: str
    param: int | None = None

    def __post_init__(self):
        if self.name not in TRANSFORMS:
            raise ValueError(f"unknown transform {self.name!r}")
        if (TRANSFORMS[self.name] is None) != (self.param is None):
            raise ValueError(f"transform {self.name!r} parameter mismatch")

    def to_json(self):
        out = {"name": self.name}
        if self.param is not None:
            out[TRANSFORMS[self.name]] = self.param
        return out


@dataclass(frozen=True)
class Relation:
    kind: str
    value: object = None  # k, c or the custom expression text
    times_n: bool = False

    def __post_init__(self):
        if self.kind not in RELATIONS:
            raise ValueError(f"unknown relation {self.kind!r}")

    def to_json(self):
        out = {"kind": self.kind}
        if RELATIONS[self.kind] is not None:
            out[RELATIONS[self.kind]] = self.value
        if self.kind == "eq_offset" and self.times_n:
            out["times_n"] = True
        return out


@dataclass(frozen=True)
class MrSpec:
    id: str
    transform: Transform
    relation: Relation
    description: str = field(default="", compare=False)

    @classmethod
    def from_json(cls, obj):
        t = obj["transform"]
        r = obj["relation"]
        tparam = TRANSFORMS[t["name"]]
        rparam = RELATIONS[r["kind"]]
        return cls(
            obj["id"],
            Transform(t["name"], t[tparam] if tparam else None),
            Relation(r["kind"], r[rparam] if rparam else None, bool(r.get("times_n", False))),
            obj.get("description", ""),
        )

    def to_json(self):
        out = {
            "id": self.id,
            "transform": self.transform.to_json(),
            "relation": self.relation.to_json(),
        }
        if self.description:
            out["description"] = self.description
        return out


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # not a pytest class

    test_id: str
    entry: str
    args: tuple


@dataclass(frozen=True)
class TestSuite:
    __test__ = False

    role: str
    cases: tuple

    def __post_init__(self):
        ids = [c.test_id for c in self.cases]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate test ids in {self.role} suite")

    @property
    def ids(self):
        return [c.test_id for c in self.cases]


@dataclass(frozen=True)
class MrRunResult:
    mr: str
    verdicts: tuple  # (test_id, verdict)
    coverage: object  # CoverageUnion
    cost_steps: int
    profiles: tuple = field(default=(), compare=False, repr=False)

    @property
    def violated(self):
        return any(v == VIOLATED for _, v in self.verdicts)


# -- transforms ----------------------------------------------------------------


def _first_array(args):
    for i, a in enumerate(args):
        if isinstance(a, (tuple, list)):
            return i
    raise ShapeMismatch("transform needs an array argument")


def _apply(transform, xs):
    name, p = transform.name, transform.param
    if name == "permute":
        out = list(xs)
        random.Random(p).shuffle(out)
        return out
    if name == "reverse":
        return xs[::-1]
    if name == "scale_elements":
        return [p * x for x in xs]
    if name == "add_constant":
        return [x + p for x in xs]
    if name == "duplicate_all":
        return [x for x in xs for _ in (0, 1)]
    if name == "append":
        return list(xs) + [p]
    if name == "remove_first":
        if not xs:
            raise ShapeMismatch("remove_first on an empty array")
        return xs[1:]
    if name == "negate_elements":
        return [-x for x in xs]
    raise ValueError(name)


def derive_followup(source_args, transform):
    """Follow-up arguments for one source case (pure, seeded)."""
    args = list(source_args)
    i = _first_array(args)
    args[i] = tuple(_apply(transform, list(args[i])))
    return tuple(args)


def source_size(args):
    """``n`` for relations: length of the first array argument, else 0."""
    try:
        return len(args[_first_array(args)])
    except ShapeMismatch:
        return 0


# -- relations -----------------------------------------------------------------


def _same_type(o_s, o_f, allowed):
    ts, tf = value_type(o_s), value_type(o_f)
    if ts != tf or ts not in allowed:
        raise TypeMismatch(f"relation cannot compare {ts} with {tf}")
    return ts


@lru_cache(maxsize=None)
def _compile_custom(text):
    try:
        return parse_expression(text)
    except Exception as exc:
        raise TypeMismatch(f"bad custom relation {text!r}: {exc}") from exc


def check_relation(o_s, o_f, relation, n_source=0):
    """Decide whether the relation holds between source and follow-up outputs.

    ``n_source`` is the length of the source input's array.  A custom
    relation that faults while evaluating (say, indexing past the end of a
    mutated output) counts as violated.
    """
    kind = relation.kind
    if kind == "eq":
        _same_type(o_s, o_f, n.VALUE_TYPES)
        ok = o_s == o_f
    elif kind == "eq_scaled":
        k = relation.value
        if _same_type(o_s, o_f, (n.INT, n.ARRAY)) == n.INT:
            ok = o_f == k * o_s
        else:
            ok = len(o_f) == len(o_s) and all(f == k * s for s, f in zip(o_s, o_f))
    elif kind == "eq_offset":
        off = relation.value * (n_source if relation.times_n else 1)
        if _same_type(o_s, o_f, (n.INT, n.ARRAY)) == n.INT:
            ok = o_f == o_s + off
        else:
            ok = len(o_f) == len(o_s) and all(f == s + off for s, f in zip(o_s, o_f))
    elif kind in ("le", "ge"):
        _same_type(o_s, o_f, (n.INT,))
        ok = o_f <= o_s if kind == "le" else o_f >= o_s
    elif kind == "custom":
        expr = _compile_custom(relation.value)
        env = {"o_s": o_s, "o_f": o_f, "n": n_source}
        try:
            t = expr_type(expr, {k: value_type(v) for k, v in env.items()})
        except MiniTypeError as exc:
            raise TypeMismatch(str(exc)) from exc
        if t != n.BOOL:
            raise TypeMismatch(f"custom relation must be bool, got {t}")
        try:
            ok = evaluate_expression(expr, env)
        except MiniRuntimeError:
            ok = False
    else:
        raise ValueError(kind)
    return SATISFIED if ok else VIOLATED


# -- running -------------------------------------------------------------------


class Runner:
    """Executes test cases with a shared cache keyed by program digest.

    Identical (program, entry, args) executions are reused, which is safe
    because execution is deterministic.
    """

    def __init__(self, step_limit=DEFAULT_STEP_LIMIT):
        self.step_limit = step_limit
        self._cache = {}

    def run(self, program, entry, args, test_id=""):
        key = (program.source_digest, entry, args)
        prof = self._cache.get(key)
        if prof is None:
            prof = execute(program, entry, args, self.step_limit)
            self._cache[key] = prof
        return prof if prof.test_id == test_id else replace(prof, test_id=test_id)


def run_case(program, mr, case, runner, source=None):
    """Run one source case and its follow-up; return (verdict, profiles)."""
    src = source or runner.run(program, case.entry, case.args, case.test_id)
    try:
        fargs = derive_followup(case.args, mr.transform)
    except ShapeMismatch:
        return ERROR, (src,)
    fu = runner.run(program, case.entry, fargs, f"{case.test_id}/{mr.id}")
    if not (src.ok and fu.ok):
        return ERROR, (src, fu)
    verdict = check_relation(src.output, fu.output, mr.relation, source_size(case.args))
    return verdict, (src, fu)


def run_mr(program, mr, sources, step_limit=DEFAULT_STEP_LIMIT, runner=None):
    """Execute every source case of ``sources`` and its follow-up under ``mr``."""
    if sources.role not in SOURCE_ROLES:
        raise ValueError(f"run_mr needs a source suite, got {sources.role!r}")
    runner = runner or Runner(step_limit)
    verdicts, profiles = [], []
    for case in sources.cases:
        verdict, profs = run_case(program, mr, case, runner)
        verdicts.append((case.test_id, verdict))
        profiles.extend(profs)
    return MrRunResult(
        mr.id,
        tuple(verdicts),
        coverage_union(profiles),
        sum(p.steps for p in profiles),
        tuple(profiles),
    )
