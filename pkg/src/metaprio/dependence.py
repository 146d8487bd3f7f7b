"""Data/control dependence, slicing and CFG hop distances.

Analysis is intraprocedural.  Data edges come from iterative reaching
definitions (array element writes are weak updates: they define the array
but do not kill earlier definitions of it).  Control edges come from
post-dominance on the CFG augmented with an entry->exit edge; a loop header
is not recorded as control dependent on itself.
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import UnknownStatement
from .minilang import nodes as n
from .minilang.cfg import ENTRY, EXIT, Cfg, build_cfg, count_operators

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class Pdg:
    function: str
    statements: frozenset
    data_edges: frozenset  # (def, use)
    ctrl_edges: frozenset  # (controller, controlled)

    @property
    def edges(self) -> frozenset:
        return self.data_edges | self.ctrl_edges

    @cached_property
    def succ(self) -> dict:
        out = {s: set() for s in self.statements}
        for a, b in self.edges:
            out[a].add(b)
        return out

    @cached_property
    def pred(self) -> dict:
        out = {s: set() for s in self.statements}
        for a, b in self.edges:
            out[b].add(a)
        return out

    def check(self, s):
        if s not in self.statements:
            raise UnknownStatement(s)


@dataclass(frozen=True)
class SliceSet:
    seed: frozenset
    direction: str
    members: frozenset

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, s):
        return s in self.members


def reaching_definitions(f, cfg):
    """Return ``IN`` sets: node -> frozenset of (def statement, variable)."""
    stmts = {s.sid: s for s in f.statements}
    defs_of = {}
    for s in f.statements:
        for v in n.stmt_defs(s):
            defs_of.setdefault(v, set()).add(s.sid)
    gen, kill = {}, {}
    for sid, s in stmts.items():
        gen[sid] = {(sid, v) for v in n.stmt_defs(s)}
        if isinstance(s, n.Assign):
            kill[sid] = {(d, s.target) for d in defs_of[s.target] if d != sid}
        else:
            kill[sid] = set()

    order = sorted(cfg.statements)
    in_ = {v: set() for v in cfg.nodes}
    out = {v: set() for v in cfg.nodes}
    work = deque(order)
    queued = set(order)
    while work:
        v = work.popleft()
        queued.discard(v)
        new_in = set()
        for p in cfg.pred[v]:
            new_in |= out[p]
        in_[v] = new_in
        new_out = gen[v] | (new_in - kill[v])
        if new_out != out[v]:
            out[v] = new_out
            for s in cfg.succ[v]:
                if s in stmts and s not in queued:
                    work.append(s)
                    queued.add(s)
    return {v: frozenset(in_[v]) for v in order}


def post_dominators(cfg):
    """Node -> set of nodes post-dominating it (reflexive)."""
    succ = {v: list(cfg.succ[v]) for v in cfg.nodes}
    succ[ENTRY] = succ[ENTRY] + [EXIT]
    everything = set(cfg.nodes)
    pdom = {v: set(everything) for v in cfg.nodes}
    pdom[EXIT] = {EXIT}
    changed = True
    while changed:
        changed = False
        for v in sorted(cfg.nodes, reverse=True):
            if v == EXIT:
                continue
            new = set(everything)
            for s in succ[v]:
                new &= pdom[s]
            new.add(v)
            if new != pdom[v]:
                pdom[v] = new
                changed = True
    return pdom


def control_dependences(cfg):
    pdom = post_dominators(cfg)
    ctrl = set()
    for a, b, _ in cfg.edges:
        if a == ENTRY:
            continue
        for x in pdom[b]:
            if x in (EXIT, a):
                continue
            if x not in pdom[a]:
                ctrl.add((a, x))
    return ctrl


def compute_pdg(program, fname) -> Pdg:
    f = program.function(fname)
    cfg = build_cfg(f)
    rd = reaching_definitions(f, cfg)
    data = set()
    for s in f.statements:
        uses = n.stmt_uses(s)
        for d, v in rd[s.sid]:
            if v in uses:
                data.add((d, s.sid))
    return Pdg(f.name, f.statement_ids, frozenset(data), frozenset(control_dependences(cfg)))


def _reach(adj, starts):
    """Nodes reachable from ``starts`` by paths of length >= 1."""
    seen = set()
    work = deque()
    for s in starts:
        for t in adj[s]:
            if t not in seen:
                seen.add(t)
                work.append(t)
    while work:
        v = work.popleft()
        for t in adj[v]:
            if t not in seen:
                seen.add(t)
                work.append(t)
    return seen


def backward_slice(pdg, seeds) -> SliceSet:
    """Statements with a dependence path into any seed.

    A seed is a member only when it is itself reachable from a seed (through
    another seed or a cycle).  Downstream, B_r is ``members | seed``.
    """
    seeds = frozenset(seeds)
    for s in seeds:
        pdg.check(s)
    return SliceSet(seeds, BACKWARD, frozenset(_reach(pdg.pred, seeds)))


def forward_slice(pdg, s) -> SliceSet:
    """Statements reachable from ``s``; ``s`` itself only if on a cycle."""
    pdg.check(s)
    return SliceSet(frozenset((s,)), FORWARD, frozenset(_reach(pdg.succ, (s,))))


def distance_to_output(cfg, s) -> int:
    """Fewest CFG edges from ``s`` to any return statement of its function."""
    cfg.check(s)
    dist = {s: 0}
    work = deque([s])
    while work:
        v = work.popleft()
        if v in cfg.returns:
            return dist[v]
        for t in cfg.succ[v]:
            if t not in dist:
                dist[t] = dist[v] + 1
                work.append(t)
    raise ValueError(f"statement {s} cannot reach a return in {cfg.function}")


def covered_statements(u):
    return u.statements if hasattr(u, "statements") else frozenset(u)


def restrict_to_covered(slice_set, u) -> SliceSet:
    """Keep only the members executed by the coverage union ``u``."""
    return SliceSet(
        slice_set.seed, slice_set.direction, slice_set.members & covered_statements(u)
    )


@dataclass(frozen=True)
class ProgramAnalysis:
    """Per-function CFGs and PDGs plus per-statement operator counts.

    This is everything the centrality metrics need; it round-trips through
    the ``analyze`` JSON document so scoring can run without the source.
    """

    program_digest: str
    cfgs: dict
    pdgs: dict
    operators: dict  # statement id -> operator count
    kinds: dict  # statement id -> statement kind

    @property
    def functions(self):
        return sorted(self.cfgs)

    def to_json(self):
        funcs = []
        for name in self.functions:
            cfg, pdg = self.cfgs[name], self.pdgs[name]
            funcs.append(
                {
                    "name": name,
                    "statements": sorted(pdg.statements),
                    "returns": sorted(cfg.returns),
                    "cfg_edges": [list(e) for e in sorted(cfg.edges)],
                    "data_edges": [list(e) for e in sorted(pdg.data_edges)],
                    "ctrl_edges": [list(e) for e in sorted(pdg.ctrl_edges)],
                }
            )
        stmts = [
            {"id": sid, "kind": self.kinds[sid], "operators": self.operators[sid]}
            for sid in sorted(self.operators)
        ]
        return {
            "program_digest": self.program_digest,
            "entry_node": ENTRY,
            "exit_node": EXIT,
            "functions": funcs,
            "statements": stmts,
        }

    @classmethod
    def from_json(cls, obj):
        cfgs, pdgs = {}, {}
        for f in obj["functions"]:
            stmts = frozenset(f["statements"])
            cfgs[f["name"]] = Cfg(
                f["name"],
                stmts | {ENTRY, EXIT},
                frozenset(tuple(e) for e in f["cfg_edges"]),
                frozenset(f["returns"]),
            )
            pdgs[f["name"]] = Pdg(
                f["name"],
                stmts,
                frozenset(tuple(e) for e in f["data_edges"]),
                frozenset(tuple(e) for e in f["ctrl_edges"]),
            )
        operators = {s["id"]: s["operators"] for s in obj["statements"]}
        kinds = {s["id"]: s["kind"] for s in obj["statements"]}
        return cls(obj["program_digest"], cfgs, pdgs, operators, kinds)


def analyze_program(program) -> ProgramAnalysis:
    cfgs = {f.name: build_cfg(f) for f in program.functions}
    pdgs = {f.name: compute_pdg(program, f.name) for f in program.functions}
    operators = {sid: count_operators(program, sid) for sid in program.statements}
    kinds = {sid: s.kind for sid, s in program.statements.items()}
    return ProgramAnalysis(program.source_digest, cfgs, pdgs, operators, kinds)
