"""AST node types for MiniLang.

All nodes are frozen dataclasses.  Source positions are excluded from
equality so that structurally identical trees compare equal regardless of
formatting.  Statement ids take part in equality.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Union

from ..errors import UnknownFunction, UnknownStatement

INT = "int"
BOOL = "bool"
ARRAY = "[int]"
VALUE_TYPES = (INT, BOOL, ARRAY)

ARITH_OPS = ("+", "-", "*", "/", "%")
REL_OPS = ("<", "<=", ">", ">=", "==", "!=")
LOGIC_OPS = ("&&", "||")


# -- expressions -------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BoolLit:
    value: bool
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Index:
    name: str
    index: "Expr"
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "!"
    operand: "Expr"
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Expr = Union[IntLit, BoolLit, Var, Index, BinOp, Unary, Call]


def children(expr) -> Iterator[tuple[str, object]]:
    """Yield ``(key, child)`` pairs of an expression in evaluation order."""
    if isinstance(expr, BinOp):
        yield "left", expr.left
        yield "right", expr.right
    elif isinstance(expr, Unary):
        yield "operand", expr.operand
    elif isinstance(expr, Index):
        yield "index", expr.index
    elif isinstance(expr, Call):
        for i, arg in enumerate(expr.args):
            yield f"arg{i}", arg


def replace_child(expr, key, new):
    if key.startswith("arg"):
        args = list(expr.args)
        args[int(key[3:])] = new
        return dataclasses.replace(expr, args=tuple(args))
    return dataclasses.replace(expr, **{key: new})


def walk(expr, path=()) -> Iterator[tuple[tuple, object]]:
    """Pre-order traversal yielding ``(path, node)``."""
    yield path, expr
    for key, child in children(expr):
        yield from walk(child, path + (key,))


def expr_vars(expr) -> set[str]:
    out = set()
    for _, node in walk(expr):
        if isinstance(node, (Var, Index)):
            out.add(node.name)
    return out


# -- statements --------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    sid: int
    target: str
    value: Expr
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    kind = "assign"
    roots = ("value",)


@dataclass(frozen=True)
class ArrayWrite:
    sid: int
    target: str
    index: Expr
    value: Expr
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    kind = "array-write"
    roots = ("index", "value")


@dataclass(frozen=True)
class If:
    sid: int
    cond: Expr
    then: tuple
    orelse: tuple = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    kind = "if"
    roots = ("cond",)


@dataclass(frozen=True)
class While:
    sid: int
    cond: Expr
    body: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    kind = "while"
    roots = ("cond",)


@dataclass(frozen=True)
class Return:
    sid: int
    value: Expr
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    kind = "return"
    roots = ("value",)


@dataclass(frozen=True)
class CallStmt:
    sid: int
    call: Call
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    kind = "call"
    roots = ("call",)


Statement = Union[Assign, ArrayWrite, If, While, Return, CallStmt]
STATEMENT_KINDS = ("assign", "if", "while", "return", "call", "array-write")


def stmt_walk(stmt) -> Iterator[tuple[tuple, object]]:
    """Walk the expressions owned by one statement (not nested bodies)."""
    for root in stmt.roots:
        yield from walk(getattr(stmt, root), (root,))


def stmt_defs(stmt) -> frozenset:
    if isinstance(stmt, (Assign, ArrayWrite)):
        return frozenset((stmt.target,))
    return frozenset()


def stmt_uses(stmt) -> frozenset:
    out = set()
    for root in stmt.roots:
        out |= expr_vars(getattr(stmt, root))
    return frozenset(out)


def nested_bodies(stmt) -> tuple:
    if isinstance(stmt, If):
        return (stmt.then, stmt.orelse)
    if isinstance(stmt, While):
        return (stmt.body,)
    return ()


def iter_statements(body) -> Iterator:
    """Yield every statement of a body in source order, recursing into blocks."""
    for stmt in body:
        yield stmt
        for inner in nested_bodies(stmt):
            yield from iter_statements(inner)


def get_at(stmt, path):
    node = getattr(stmt, path[0])
    for key in path[1:]:
        node = dict(children(node))[key]
    return node


def replace_at(stmt, path, new):
    """Return a copy of ``stmt`` with the expression at ``path`` replaced."""

    def rec(node, rest):
        if not rest:
            return new
        child = dict(children(node))[rest[0]]
        return replace_child(node, rest[0], rec(child, rest[1:]))

    root = path[0]
    return dataclasses.replace(stmt, **{root: rec(getattr(stmt, root), path[1:])})


# -- program -----------------------------------------------------------------


@dataclass(frozen=True)
class Param:
    name: str
    type: str


@dataclass(frozen=True)
class Function:
    name: str
    params: tuple
    body: tuple
    returns: str = INT
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @cached_property
    def statements(self) -> tuple:
        return tuple(iter_statements(self.body))

    @cached_property
    def statement_ids(self) -> frozenset:
        return frozenset(s.sid for s in self.statements)

    @cached_property
    def return_ids(self) -> frozenset:
        return frozenset(s.sid for s in self.statements if isinstance(s, Return))


@dataclass(frozen=True)
class Program:
    functions: tuple
    version_label: str = field(default="v0", compare=False)
    source_digest: str = field(default="", compare=False)

    @cached_property
    def by_name(self) -> dict:
        return {f.name: f for f in self.functions}

    @cached_property
    def statements(self) -> dict:
        """Statement id -> statement, over every function."""
        return {s.sid: s for f in self.functions for s in f.statements}

    @cached_property
    def function_of(self) -> dict:
        return {s.sid: f.name for f in self.functions for s in f.statements}

    def function(self, name) -> Function:
        try:
            return self.by_name[name]
        except KeyError:
            raise UnknownFunction(name) from None

    def statement(self, sid):
        try:
            return self.statements[sid]
        except KeyError:
            raise UnknownStatement(sid) from None
