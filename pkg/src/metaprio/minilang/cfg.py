"""Statement-level control-flow graphs."""

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from ..errors import UnknownStatement
from . import nodes as n

ENTRY = 0
EXIT = -1

NONE, TRUE, FALSE = "none", "true", "false"


@dataclass(frozen=True)
class Cfg:
    function: str
    nodes: frozenset
    edges: frozenset  # (from, to, tag)
    returns: frozenset

    @cached_property
    def succ(self) -> dict:
        out = defaultdict(list)
        for a, b, _ in sorted(self.edges):
            out[a].append(b)
        return {v: out.get(v, []) for v in self.nodes}

    @cached_property
    def pred(self) -> dict:
        out = {v: [] for v in self.nodes}
        for a, b, _ in sorted(self.edges):
            out[b].append(a)
        return out

    @property
    def statements(self) -> frozenset:
        return self.nodes - {ENTRY, EXIT}

    def check(self, s):
        if s not in self.nodes or s in (ENTRY, EXIT):
            raise UnknownStatement(s)


def build_cfg(f: n.Function) -> Cfg:
    edges = set()

    def block(body, follow):
        # returns the first node of the block, wiring edges back to front
        nxt = follow
        for stmt in reversed(body):
            nxt = node(stmt, nxt)
        return nxt

    def node(stmt, follow):
        sid = stmt.sid
        if isinstance(stmt, n.Return):
            edges.add((sid, EXIT, NONE))
        elif isinstance(stmt, n.If):
            edges.add((sid, block(stmt.then, follow), TRUE))
            edges.add((sid, block(stmt.orelse, follow), FALSE))
        elif isinstance(stmt, n.While):
            edges.add((sid, block(stmt.body, sid), TRUE))
            edges.add((sid, follow, FALSE))
        else:
            edges.add((sid, follow, NONE))
        return sid

    edges.add((ENTRY, block(f.body, EXIT), NONE))
    nodes = frozenset({ENTRY, EXIT} | f.statement_ids)
    return Cfg(f.name, nodes, frozenset(edges), f.return_ids)


def count_operators(program, sid) -> int:
    """Arithmetic, relational and logical operator nodes in one statement.

    Assignment, indexing, ``len`` and calls are not counted; unary ``-`` and
    ``!`` are.
    """
    stmt = program.statement(sid)
    return sum(1 for _, node in n.stmt_walk(stmt) if isinstance(node, (n.BinOp, n.Unary)))


def operator_counts(program) -> dict:
    return {sid: count_operators(program, sid) for sid in program.statements}
