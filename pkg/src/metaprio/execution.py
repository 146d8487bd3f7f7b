"""Deterministic tree-walking evaluator that records execution profiles.

Values are Python ``int``, ``bool`` or (at API boundaries) tuples of ints
for arrays.  Arrays have value semantics: they are copied on assignment,
argument passing and return.  Integers are 64-bit signed; leaving that range
is a runtime error.  Division truncates toward zero.
"""

from dataclasses import dataclass, field

from .errors import (
    MiniRuntimeError,
    MixedProgramDigest,
    ShapeMismatch,
    StepLimitExceeded,
)
from .minilang import nodes as n

DEFAULT_STEP_LIMIT = 10**6
MAX_CALL_DEPTH = 64
INT_MIN, INT_MAX = -(2**63), 2**63 - 1

STEP_LIMIT = "step-limit"


@dataclass(frozen=True)
class ExecutionProfile:
    test_id: str
    statements: frozenset
    branches: frozenset  # (statement id, "true" | "false")
    steps: int
    output: object = None
    error: str | None = None
    program_digest: str = ""

    @property
    def ok(self):
        return self.error is None

    @property
    def timed_out(self):
        return self.error == STEP_LIMIT


@dataclass(frozen=True)
class CoverageUnion:
    statements: frozenset = frozenset()
    branches: frozenset = frozenset()
    program_digest: str = ""


def value_type(v):
    if type(v) is bool:
        return n.BOOL
    if type(v) is int:
        return n.INT
    if isinstance(v, (tuple, list)) and all(type(x) is int for x in v):
        return n.ARRAY
    raise ShapeMismatch(f"not a MiniLang value: {v!r}")


def to_value(obj):
    """Convert a JSON-decoded value to its canonical Python form."""
    if isinstance(obj, list):
        return tuple(obj)
    return obj


def _check_int(v):
    if v < INT_MIN or v > INT_MAX:
        raise MiniRuntimeError("integer overflow")
    return v


def _div(a, b):
    if b == 0:
        raise MiniRuntimeError("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _mod(a, b):
    return a - b * _div(a, b)


_ARITH = {
    "+": lambda a, b: _check_int(a + b),
    "-": lambda a, b: _check_int(a - b),
    "*": lambda a, b: _check_int(a * b),
    "/": lambda a, b: _check_int(_div(a, b)),
    "%": _mod,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}

_NO_RETURN = object()


class _Evaluator:
    def __init__(self, program, step_limit):
        self.program = program
        self.step_limit = step_limit
        self.steps = 0
        self.statements = set()
        self.branches = set()
        self.depth = 0

    # expressions

    def eval(self, e, env):
        t = type(e)
        if t is n.IntLit or t is n.BoolLit:
            return e.value
        if t is n.Var:
            try:
                v = env[e.name]
            except KeyError:
                raise MiniRuntimeError(f"read of unassigned variable {e.name!r}") from None
            return v
        if t is n.BinOp:
            op = e.op
            if op == "&&":
                return self.eval(e.left, env) and self.eval(e.right, env)
            if op == "||":
                return self.eval(e.left, env) or self.eval(e.right, env)
            left = self.eval(e.left, env)
            right = self.eval(e.right, env)
            return _ARITH[op](left, right)
        if t is n.Index:
            try:
                arr = env[e.name]
            except KeyError:
                raise MiniRuntimeError(f"read of unassigned variable {e.name!r}") from None
            i = self.eval(e.index, env)
            if not 0 <= i < len(arr):
                raise MiniRuntimeError(f"index {i} out of bounds for length {len(arr)}")
            return arr[i]
        if t is n.Unary:
            v = self.eval(e.operand, env)
            return _check_int(-v) if e.op == "-" else not v
        if t is n.Call:
            args = [self.eval(a, env) for a in e.args]
            if e.name == "len":
                return len(args[0])
            return self.call(e.name, args)
        raise TypeError(f"not an expression: {e!r}")

    # statements

    def call(self, fname, args):
        f = self.program.by_name.get(fname)
        if f is None:
            raise MiniRuntimeError(f"call to unknown function {fname!r}")
        if self.depth >= MAX_CALL_DEPTH:
            raise MiniRuntimeError("call depth exceeded")
        env = {}
        for p, a in zip(f.params, args):
            env[p.name] = list(a) if isinstance(a, (list, tuple)) else a
        self.depth += 1
        try:
            result = self.block(f.body, env)
        finally:
            self.depth -= 1
        if result is _NO_RETURN:
            raise MiniRuntimeError(f"{fname} finished without returning")
        return result

    def visit(self, sid):
        self.steps += 1
        if self.steps > self.step_limit:
            raise StepLimitExceeded(f"more than {self.step_limit} steps")
        self.statements.add(sid)

    def block(self, body, env):
        for s in body:
            t = type(s)
            self.visit(s.sid)
            if t is n.Assign:
                v = self.eval(s.value, env)
                env[s.target] = list(v) if type(v) is list else v
            elif t is n.ArrayWrite:
                try:
                    arr = env[s.target]
                except KeyError:
                    raise MiniRuntimeError(
                        f"write to unassigned array {s.target!r}"
                    ) from None
                i = self.eval(s.index, env)
                v = self.eval(s.value, env)
                if not 0 <= i < len(arr):
                    raise MiniRuntimeError(f"index {i} out of bounds for length {len(arr)}")
                arr[i] = v
            elif t is n.If:
                if self.eval(s.cond, env):
                    self.branches.add((s.sid, "true"))
                    r = self.block(s.then, env)
                else:
                    self.branches.add((s.sid, "false"))
                    r = self.block(s.orelse, env)
                if r is not _NO_RETURN:
                    return r
            elif t is n.While:
                while True:
                    if not self.eval(s.cond, env):
                        self.branches.add((s.sid, "false"))
                        break
                    self.branches.add((s.sid, "true"))
                    r = self.block(s.body, env)
                    if r is not _NO_RETURN:
                        return r
                    self.visit(s.sid)
            elif t is n.Return:
                v = self.eval(s.value, env)
                return list(v) if type(v) is list else v
            elif t is n.CallStmt:
                self.eval(s.call, env)
        return _NO_RETURN


def _freeze(v):
    return tuple(v) if isinstance(v, list) else v


def _check_args(f, args):
    if len(args) != len(f.params):
        raise ShapeMismatch(f"{f.name} expects {len(f.params)} argument(s), got {len(args)}")
    for p, a in zip(f.params, args):
        if value_type(a) != p.type:
            raise ShapeMismatch(f"argument {p.name!r} of {f.name} must be {p.type}: {a!r}")


def execute(program, entry, args, step_limit=DEFAULT_STEP_LIMIT, test_id=""):
    """Run ``entry(*args)`` and return its :class:`ExecutionProfile`.

    Runtime faults and step-limit overruns do not raise; they are recorded
    in ``profile.error`` together with the coverage reached so far.
    """
    f = program.function(entry)
    args = tuple(_freeze(a) for a in args)
    _check_args(f, args)
    ev = _Evaluator(program, step_limit)
    output, error = None, None
    try:
        output = _freeze(ev.call(entry, args))
    except StepLimitExceeded:
        error = STEP_LIMIT
    except MiniRuntimeError as exc:
        error = f"runtime: {exc}"
    except RecursionError:
        error = "runtime: call depth exceeded"
    return ExecutionProfile(
        test_id,
        frozenset(ev.statements),
        frozenset(ev.branches),
        ev.steps,
        output,
        error,
        program.source_digest,
    )


def evaluate_expression(expr, bindings, program=None):
    """Evaluate a standalone expression under ``bindings`` (name -> value)."""
    ev = _Evaluator(program or n.Program(()), DEFAULT_STEP_LIMIT)
    env = {k: list(v) if isinstance(v, tuple) else v for k, v in bindings.items()}
    return _freeze(ev.eval(expr, env))


def coverage_union(profiles) -> CoverageUnion:
    profiles = list(profiles)
    digests = {p.program_digest for p in profiles}
    if len(digests) > 1:
        raise MixedProgramDigest(f"profiles from {len(digests)} different programs")
    stmts, branches = set(), set()
    for p in profiles:
        stmts |= p.statements
        branches |= p.branches
    return CoverageUnion(frozenset(stmts), frozenset(branches), digests.pop() if digests else "")
