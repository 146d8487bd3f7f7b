"""First-order mutant generation, screening and kill matrices.

Operators:

* AOR -- arithmetic operator replacement (``+``/``-`` and ``*``/``/`` swapped
  pairwise; ``full_aor`` replaces each arithmetic operator by every other)
* ROR -- relational operator replaced by each of the other five
* LOR -- ``&&``/``||`` swapped
* CRP -- integer literal ``c`` replaced by ``c + 1`` and by ``0``
* SDL -- one non-return assignment (scalar or array element) deleted
"""

import dataclasses
from dataclasses import dataclass, field

from .minilang import nodes as n
from .minilang.parser import digest
from .minilang.printer import format_expr, pretty_print
from .mt import SATISFIED, Runner, run_case

OPERATORS = ("AOR", "ROR", "LOR", "CRP", "SDL")

CANDIDATE = "candidate"
VIABLE = "viable"
SCREENED_OUT = "screened_out"

PRIORITIZING = "prioritizing"
VALIDATION = "validation"

_AOR_PAIRS = {"+": ("-",), "-": ("+",), "*": ("/",), "/": ("*",)}
_ARITH = ("+", "-", "*", "/", "%")


@dataclass(frozen=True)
class Mutant:
    id: str
    operator: str
    sid: int
    path: tuple
    description: str
    mutated_program: n.Program = field(repr=False, compare=False)
    status: str = CANDIDATE

    @property
    def location(self):
        return (self.sid, self.path)


def replace_statement(program, sid, new):
    """Copy of ``program`` with statement ``sid`` replaced (``None`` deletes it)."""

    def rebuild(body):
        out = []
        for s in body:
            if s.sid == sid:
                if new is not None:
                    out.append(new)
                continue
            if isinstance(s, n.If):
                s = dataclasses.replace(s, then=rebuild(s.then), orelse=rebuild(s.orelse))
            elif isinstance(s, n.While):
                s = dataclasses.replace(s, body=rebuild(s.body))
            out.append(s)
        return tuple(out)

    owner = program.function_of[sid]
    functions = tuple(
        dataclasses.replace(f, body=rebuild(f.body)) if f.name == owner else f
        for f in program.functions
    )
    return n.Program(functions, program.version_label, program.source_digest)


def _variants(node, operator, full_aor):
    """Replacement nodes for one AST node under one operator."""
    if operator == "AOR" and isinstance(node, n.BinOp) and node.op in _ARITH:
        if full_aor:
            ops = [o for o in _ARITH if o != node.op]
        else:
            ops = _AOR_PAIRS.get(node.op, ())
        return [dataclasses.replace(node, op=o) for o in ops]
    if operator == "ROR" and isinstance(node, n.BinOp) and node.op in n.REL_OPS:
        return [dataclasses.replace(node, op=o) for o in n.REL_OPS if o != node.op]
    if operator == "LOR" and isinstance(node, n.BinOp) and node.op in n.LOGIC_OPS:
        other = "||" if node.op == "&&" else "&&"
        return [dataclasses.replace(node, op=other)]
    if operator == "CRP" and isinstance(node, n.IntLit):
        values = []
        for v in (node.value + 1, 0):
            if v != node.value and v not in values:
                values.append(v)
        return [dataclasses.replace(node, value=v) for v in values]
    return []


def _finish(program, sid, new_stmt, label):
    mutated = replace_statement(program, sid, new_stmt)
    text = pretty_print(mutated)
    return dataclasses.replace(
        mutated,
        version_label=f"{program.version_label}+{label}",
        source_digest=digest(text),
    )


def generate_mutants(program, operators=OPERATORS, full_aor=False):
    """Every first-order mutant of ``program`` for the enabled operators.

    Mutants are ordered by (statement id, node path, operator, variant).
    """
    operators = set(operators)
    unknown = operators - set(OPERATORS)
    if unknown:
        raise ValueError(f"unknown mutation operators: {sorted(unknown)}")
    found = []
    for sid in sorted(program.statements):
        stmt = program.statements[sid]
        for path, node in n.stmt_walk(stmt):
            for op in sorted(operators - {"SDL"}):
                for k, new in enumerate(_variants(node, op, full_aor)):
                    desc = f"{format_expr(node)} -> {format_expr(new)}"
                    found.append((sid, path, op, k, n.replace_at(stmt, path, new), desc))
        if "SDL" in operators and isinstance(stmt, (n.Assign, n.ArrayWrite)):
            found.append((sid, (), "SDL", 0, None, "delete statement"))
    found.sort(key=lambda t: t[:4])
    mutants = []
    for i, (sid, path, op, _, new_stmt, desc) in enumerate(found, 1):
        mid = f"m{i:04d}"
        mutants.append(
            Mutant(mid, op, sid, path, desc, _finish(program, sid, new_stmt, mid))
        )
    return mutants


def identity_mutant(program, mid="original"):
    """The unmodified program wrapped as a pseudo-mutant (equivalent shape)."""
    return Mutant(mid, "NONE", 0, (), "no change", program)


def screen_mutants(mutants, validation_sources, mrs=(), runner=None):
    """Split mutants into (viable, screened_out).

    A mutant is screened out when every source case of the suite raises or
    exceeds the step limit on it: every MR verdict is then an error caused
    by the mutant's own source runs.  ``mrs`` does not change the outcome
    because source runs are shared by all MRs.
    """
    runner = runner or Runner()
    viable, screened = [], []
    for m in mutants:
        profiles = [
            runner.run(m.mutated_program, c.entry, c.args, c.test_id)
            for c in validation_sources.cases
        ]
        if profiles and all(not p.ok for p in profiles):
            screened.append(dataclasses.replace(m, status=SCREENED_OUT))
        else:
            viable.append(dataclasses.replace(m, status=VIABLE))
    return viable, screened


@dataclass(frozen=True)
class KillMatrix:
    role: str
    mrs: tuple
    mutants: tuple
    kills: tuple  # kills[i][j]: MR i kills mutant j
    mr_cost_steps: tuple

    def __post_init__(self):
        if len(self.kills) != len(self.mrs) or len(self.mr_cost_steps) != len(self.mrs):
            raise ValueError("kill matrix rows do not match the MR list")
        if any(len(row) != len(self.mutants) for row in self.kills):
            raise ValueError("kill matrix columns do not match the mutant list")

    def kill_sets(self) -> dict:
        return {
            mr: frozenset(m for m, k in zip(self.mutants, row) if k)
            for mr, row in zip(self.mrs, self.kills)
        }

    def cost(self) -> dict:
        return dict(zip(self.mrs, self.mr_cost_steps))

    @property
    def killable(self) -> tuple:
        return tuple(
            m for j, m in enumerate(self.mutants) if any(row[j] for row in self.kills)
        )

    def to_json(self):
        return {
            "role": self.role,
            "mrs": list(self.mrs),
            "mutants": list(self.mutants),
            "kills": [[bool(k) for k in row] for row in self.kills],
            "mr_cost_steps": list(self.mr_cost_steps),
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            obj["role"],
            tuple(obj["mrs"]),
            tuple(obj["mutants"]),
            tuple(tuple(bool(k) for k in row) for row in obj["kills"]),
            tuple(obj["mr_cost_steps"]),
        )

    @classmethod
    def from_kill_sets(cls, kill_sets, costs=None, mutants=None, role=VALIDATION):
        """Build a matrix from ``{mr: set of mutant ids}`` (mainly for tests)."""
        mrs = tuple(kill_sets)
        if mutants is None:
            mutants = tuple(sorted(set().union(*kill_sets.values()))) if kill_sets else ()
        costs = costs or {mr: 1 for mr in mrs}
        kills = tuple(tuple(m in kill_sets[mr] for m in mutants) for mr in mrs)
        return cls(role, mrs, tuple(mutants), kills, tuple(costs[mr] for mr in mrs))


def _kills(mutant, mr, cases, runner):
    prog = mutant.mutated_program
    for case, reached in cases:
        if mutant.sid not in reached:
            # the mutated statement never runs: both runs match the original
            continue
        src = runner.run(prog, case.entry, case.args, case.test_id)
        if not src.ok:
            return True
        verdict, _ = run_case(prog, mr, case, runner, source=src)
        if verdict != SATISFIED:
            return True
    return False


def build_kill_matrix(program, mutants, mrs, sources, role=VALIDATION, runner=None):
    """Kill records of every MR against every mutant.

    Only source cases whose MR run is satisfied on the original program take
    part; a case that errs on the original is a configuration problem, not a
    detection.  On such a valid case, a mutant is killed by a violated
    relation or by an error/timeout in its source or follow-up run.  Costs
    are the steps of each MR's full suite on the original program.
    """
    runner = runner or Runner()
    rows, costs = [], []
    for mr in mrs:
        cases, cost = [], 0
        for case in sources.cases:
            verdict, profiles = run_case(program, mr, case, runner)
            cost += sum(p.steps for p in profiles)
            if verdict == SATISFIED:
                reached = frozenset().union(*(p.statements for p in profiles))
                cases.append((case, reached))
        rows.append(tuple(_kills(m, mr, cases, runner) for m in mutants))
        costs.append(cost)
    return KillMatrix(
        role,
        tuple(mr.id for mr in mrs),
        tuple(m.id for m in mutants),
        tuple(rows),
        tuple(costs),
    )
