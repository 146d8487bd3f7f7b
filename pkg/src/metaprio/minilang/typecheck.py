"""Static checks: types, call arity, definite return, unreachable code."""

from ..errors import MiniTypeError
from . import nodes as n

INTRINSICS = {"len": ((n.ARRAY,), n.INT)}


def _signature(program, name, node):
    if name in INTRINSICS:
        return INTRINSICS[name]
    if program is None or name not in program.by_name:
        raise MiniTypeError(f"call to unknown function {name!r}", node.line, node.col)
    f = program.by_name[name]
    return tuple(p.type for p in f.params), f.returns


def expr_type(expr, env, program=None, lenient=False):
    """Type of ``expr`` under ``env`` (name -> type).

    With ``lenient`` an unknown variable yields ``None`` instead of raising;
    this is used while inferring local variable types.
    """

    def fail(msg, node):
        raise MiniTypeError(msg, node.line, node.col)

    def rec(e):
        if isinstance(e, n.IntLit):
            return n.INT
        if isinstance(e, n.BoolLit):
            return n.BOOL
        if isinstance(e, n.Var):
            if e.name not in env:
                if lenient:
                    return None
                fail(f"undefined variable {e.name!r}", e)
            return env[e.name]
        if isinstance(e, n.Index):
            t = env.get(e.name)
            if t is None:
                if lenient:
                    return None
                fail(f"undefined variable {e.name!r}", e)
            if t != n.ARRAY:
                fail(f"cannot index {t} variable {e.name!r}", e)
            it = rec(e.index)
            if it is None:
                return None
            if it != n.INT:
                fail("array index must be int", e)
            return n.INT
        if isinstance(e, n.Unary):
            t = rec(e.operand)
            if t is None:
                return None
            want = n.INT if e.op == "-" else n.BOOL
            if t != want:
                fail(f"operand of {e.op!r} must be {want}", e)
            return want
        if isinstance(e, n.BinOp):
            lt, rt = rec(e.left), rec(e.right)
            if lt is None or rt is None:
                return None
            if e.op in n.ARITH_OPS:
                if lt != n.INT or rt != n.INT:
                    fail(f"operands of {e.op!r} must be int", e)
                return n.INT
            if e.op in ("==", "!="):
                if lt != rt:
                    fail(f"cannot compare {lt} with {rt}", e)
                return n.BOOL
            if e.op in n.REL_OPS:
                if lt != n.INT or rt != n.INT:
                    fail(f"operands of {e.op!r} must be int", e)
                return n.BOOL
            if lt != n.BOOL or rt != n.BOOL:
                fail(f"operands of {e.op!r} must be bool", e)
            return n.BOOL
        if isinstance(e, n.Call):
            params, ret = _signature(program, e.name, e)
            if len(params) != len(e.args):
                fail(f"{e.name} expects {len(params)} argument(s), got {len(e.args)}", e)
            for want, arg in zip(params, e.args):
                got = rec(arg)
                if got is None:
                    return None
                if got != want:
                    fail(f"argument of {e.name} must be {want}, got {got}", arg)
            return ret
        raise TypeError(f"not an expression: {e!r}")

    return rec(expr)


def _infer_locals(program, function):
    env = {p.name: p.type for p in function.params}
    pending = [s for s in function.statements if isinstance(s, n.Assign)]
    changed = True
    while changed:
        changed = False
        for s in pending:
            if s.target in env:
                continue
            t = expr_type(s.value, env, program, lenient=True)
            if t is not None:
                env[s.target] = t
                changed = True
    return env


def _always_returns(body, fname):
    """True if every path through ``body`` ends in a return.

    Raises on statements that follow a definite return.
    """
    for i, stmt in enumerate(body):
        done = isinstance(stmt, n.Return) or (
            isinstance(stmt, n.If)
            and _always_returns(stmt.then, fname)
            and _always_returns(stmt.orelse, fname)
        )
        if isinstance(stmt, n.While):
            _always_returns(stmt.body, fname)
        if done:
            if i + 1 < len(body):
                nxt = body[i + 1]
                raise MiniTypeError(f"unreachable statement in {fname}", nxt.line, nxt.col)
            return True
    return False


def check_function(program, f):
    seen = set()
    for p in f.params:
        if p.name in seen:
            raise MiniTypeError(f"duplicate parameter {p.name!r}", f.line, f.col)
        seen.add(p.name)
    env = _infer_locals(program, f)
    for s in f.statements:
        if isinstance(s, n.Assign):
            if s.target not in env:
                # RHS never typeable: report the real cause
                expr_type(s.value, env, program)
            t = expr_type(s.value, env, program)
            if t != env[s.target]:
                raise MiniTypeError(
                    f"{s.target!r} assigned {t}, previously {env[s.target]}", s.line, s.col
                )
        elif isinstance(s, n.ArrayWrite):
            if env.get(s.target) != n.ARRAY:
                raise MiniTypeError(f"{s.target!r} is not an array", s.line, s.col)
            if expr_type(s.index, env, program) != n.INT:
                raise MiniTypeError("array index must be int", s.line, s.col)
            if expr_type(s.value, env, program) != n.INT:
                raise MiniTypeError("array element must be int", s.line, s.col)
        elif isinstance(s, (n.If, n.While)):
            if expr_type(s.cond, env, program) != n.BOOL:
                raise MiniTypeError("condition must be bool", s.line, s.col)
        elif isinstance(s, n.Return):
            t = expr_type(s.value, env, program)
            if t != f.returns:
                raise MiniTypeError(
                    f"{f.name} returns {f.returns}, got {t}", s.line, s.col
                )
        elif isinstance(s, n.CallStmt):
            expr_type(s.call, env, program)
    if not _always_returns(f.body, f.name):
        raise MiniTypeError(f"missing return in {f.name}", f.line, f.col)
    return env


def check_program(program):
    for f in program.functions:
        if f.name in INTRINSICS:
            raise MiniTypeError(f"{f.name!r} is reserved", f.line, f.col)
        check_function(program, f)
