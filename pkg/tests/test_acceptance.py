"""Acceptance criteria C1-C8.

Each check returns ``(ok, detail)``.  Under pytest every check is recorded in
``conftest.ACCEPTANCE`` and printed as one PASS/FAIL line at the end of the
session; run this file directly to print the same lines without pytest.
Tolerances are fixed here and nowhere else.
"""

import filecmp
import itertools
import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from conftest import ACCEPTANCE, P0_SOURCE, check_golden, fixture_programs, load_subject  # noqa: E402
from metaprio import corpus  # noqa: E402
from metaprio.centrality import StatementCentrality  # noqa: E402
from metaprio.dependence import backward_slice, compute_pdg, forward_slice  # noqa: E402
from metaprio.evaluate import apfd  # noqa: E402
from metaprio.execution import CoverageUnion  # noqa: E402
from metaprio.minilang import build_cfg, parse  # noqa: E402
from metaprio.mt import SATISFIED, Runner, run_mr  # noqa: E402
from metaprio.mutation import (  # noqa: E402
    VIABLE,
    KillMatrix,
    Mutant,
    build_kill_matrix,
    identity_mutant,
    screen_mutants,
)
from metaprio.pipeline import PipelineConfig, run_pipeline  # noqa: E402
from metaprio.prioritize import coverage_order, fault_based_order  # noqa: E402

SLICING_BUDGET_S = 5.0
APFD_BUDGET_S = 60.0
PIPELINE_BUDGET_S = 120.0
TOP_QUARTILE_SHARE = 0.95
MIN_VIABLE = 40
MIN_CENTRALITY_WINS = 3
STEP_LIMIT = 10_000


# -- C1 --------------------------------------------------------------------------------------


def check_slicing():
    start = time.perf_counter()
    checked, wrong = 0, []
    for name, program in fixture_programs().items():
        for f in program.functions:
            cfg = build_cfg(f)
            stmts = f.statement_ids
            edges = oracles.data_edges(f, cfg.edges) | oracles.control_edges(cfg.edges, stmts)
            reach = oracles.closure(stmts, edges)
            pdg = compute_pdg(program, f.name)
            for s in stmts:
                checked += 1
                if (forward_slice(pdg, s).members != oracles.forward(reach, s)
                        or backward_slice(pdg, {s}).members != oracles.backward(reach, {s})):
                    wrong.append(f"{name}:{f.name}:{s}")
    elapsed = time.perf_counter() - start
    ok = not wrong and elapsed < SLICING_BUDGET_S
    return ok, f"{checked} statements, {len(wrong)} mismatches {wrong[:3]}, {elapsed:.2f}s"


# -- C2 --------------------------------------------------------------------------------------


def check_p0_metrics():
    p0 = parse(P0_SOURCE)
    cov = CoverageUnion(frozenset(range(1, 7)), frozenset(), p0.source_digest)
    run = type("Run", (), {"mr": "MR", "coverage": cov})()
    s = StatementCentrality().fit(p0).transform([run])[0]
    pf = s.per_method["sum"].pf
    want = {4: Fraction(1, 4), 3: Fraction(1, 2), 6: Fraction(1)}
    exact = all(pf[k] == v for k, v in want.items())
    identity = s.quality == s.ta_total + s.ti_total + s.tfp_total and isinstance(s.quality, Fraction)
    return exact and identity, f"PF(4,3,6)=({pf[4]}, {pf[3]}, {pf[6]}), quality={s.quality}"


# -- C3 --------------------------------------------------------------------------------------


def _random_sets(rng, n, m, density=0.3):
    while True:
        sets = {f"MR{i}": frozenset(f"f{j}" for j in range(m) if rng.random() < density)
                for i in range(1, n + 1)}
        if any(sets.values()):
            return sets


def check_apfd():
    km = KillMatrix.from_kill_sets
    anchors = [apfd(["A"], km({"A": {"f"}})) == Fraction(1, 2)]
    for n in (2, 5, 8):
        sets = {f"M{i}": set() for i in range(n)}
        sets["M0"] = {"f1", "f2"}
        anchors.append(apfd(sorted(sets), km(sets)) == 1 - Fraction(1, 2 * n))
    anchors.append(apfd(["A", "B", "C"], km({"A": {"f1"}, "B": set(), "C": {"f2"}})) == Fraction(1, 2))

    start = time.perf_counter()
    in_quartile = 0
    for seed in range(200):
        sets = _random_sets(random.Random(seed), 5, 8)
        greedy = fault_based_order(km(sets)).sequence
        g = oracles.apfd(greedy, sets)
        perms = list(itertools.permutations(sets))
        better = sum(oracles.apfd(p, sets) > g for p in perms)
        in_quartile += better <= len(perms) // 4
    elapsed = time.perf_counter() - start
    share = in_quartile / 200
    ok = all(anchors) and share >= TOP_QUARTILE_SHARE and elapsed < APFD_BUDGET_S
    return ok, f"anchors {sum(anchors)}/{len(anchors)}, top quartile {share:.1%}, {elapsed:.2f}s"


# -- C4 --------------------------------------------------------------------------------------


def _replay(order, sets, lowest_id):
    """Check each pick against an independent recomputation of marginal gains."""
    if sorted(order) != sorted(sets):
        return "not a permutation"
    universe = set().union(*sets.values())
    uncovered, remaining = set(universe), set(sets)
    for step, pick in enumerate(order):
        gains = {mr: len(sets[mr] & uncovered) for mr in remaining}
        if max(gains.values()) == 0 and uncovered != universe:
            uncovered = set(universe)
            gains = {mr: len(sets[mr] & uncovered) for mr in remaining}
        best = max(gains.values())
        if gains[pick] != best:
            return f"step {step}: gain {gains[pick]} < {best}"
        if lowest_id and pick != min(mr for mr in remaining if gains[mr] == best):
            return f"step {step}: tie not broken by id"
        uncovered -= sets[pick]
        remaining.remove(pick)
    return None


def check_greedy():
    rng = random.Random(2024)
    failures = []
    for i in range(1000):
        n, m = rng.randint(1, 8), rng.randint(1, 10)
        sets = {f"MR{j}": frozenset(k for k in range(m) if rng.random() < 0.35) for j in range(n)}
        fault_sets = {mr: frozenset(f"f{k}" for k in s) for mr, s in sets.items()}
        mutants = tuple(f"f{k}" for k in range(m))
        err = _replay(fault_based_order(KillMatrix.from_kill_sets(fault_sets, mutants=mutants)).sequence,
                      fault_sets, True)
        if err:
            failures.append(f"fault #{i}: {err}")
        cov = {mr: CoverageUnion(s, frozenset((k, "true") for k in s)) for mr, s in sets.items()}
        for unit in ("statement", "branch"):
            order = coverage_order(cov, unit, seed=i).sequence
            units = {mr: (c.statements if unit == "statement" else c.branches) for mr, c in cov.items()}
            err = _replay(order, units, False)
            if err:
                failures.append(f"{unit} #{i}: {err}")
    return not failures, f"1000 matrices x 3 greedies, {len(failures)} violations {failures[:2]}"


# -- C5 --------------------------------------------------------------------------------------


def check_determinism():
    differing = []
    with tempfile.TemporaryDirectory() as tmp:
        for subject in corpus.SUBJECTS:
            cfg = PipelineConfig.from_file(corpus.config_path(subject))
            a, b = Path(tmp, subject, "a"), Path(tmp, subject, "b")
            run_pipeline(cfg, a)
            run_pipeline(cfg, b)
            files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
            if files != sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file()):
                differing.append(f"{subject}: file lists differ")
                continue
            differing += [f"{subject}/{f}" for f in files if not filecmp.cmp(a / f, b / f, shallow=False)]
    return not differing, f"{len(corpus.SUBJECTS)} subjects x 2 runs, differing files: {differing or 'none'}"


# -- C6 --------------------------------------------------------------------------------------


def check_corpus():
    start = time.perf_counter()
    rows, wins, problems = [], 0, []
    with tempfile.TemporaryDirectory() as tmp:
        for subject in corpus.SUBJECTS:
            out = Path(tmp, subject)
            result = run_pipeline(PipelineConfig.from_file(corpus.config_path(subject)), out)
            viable = len(result.viable)
            c = result.report("centrality").apfd
            r = result.report("random").apfd
            wins += c >= r
            if viable < MIN_VIABLE:
                problems.append(f"{subject}: {viable} viable")
            problems += [f"{subject}/{f} golden mismatch" for f in check_golden(subject, out)]
            rows.append(f"{subject} viable={viable} centrality={float(c):.4f} random={float(r):.4f}")
    elapsed = time.perf_counter() - start
    if wins < MIN_CENTRALITY_WINS:
        problems.append(f"centrality >= random on {wins}/4 only")
    ok = not problems and elapsed < PIPELINE_BUDGET_S
    return ok, f"{'; '.join(rows)}; wins {wins}/4; {elapsed:.1f}s; {problems or 'goldens match'}"


# -- C7 --------------------------------------------------------------------------------------

# a loop that never exits, seeded ahead of the real work
LOOP = "    n = len(a)\n    while (n >= 0) {\n        n = n + 0\n    }\n"


def check_screening():
    program, mrs, pri, val = load_subject("sum")
    source = corpus.program_path("sum").read_text()
    seeded = Mutant("seeded-loop", "HAND", 0, (), "infinite loop",
                    parse(source.replace("    n = len(a)\n", LOOP), "seeded"))
    runner = Runner(STEP_LIMIT)
    timeouts = all(runner.run(seeded.mutated_program, c.entry, c.args, c.test_id).timed_out
                   for c in val.cases)
    viable, screened = screen_mutants([seeded, identity_mutant(program)], val, runner=runner)
    original = [m for m in viable if m.id == "original"]
    kills = 0
    for suite in (pri, val):
        km = build_kill_matrix(program, original, mrs, suite, runner=runner)
        kills += sum(map(sum, km.kills))
    ok = (timeouts and [m.id for m in screened] == ["seeded-loop"]
          and len(original) == 1 and original[0].status == VIABLE and kills == 0)
    return ok, (f"seeded loop timed out on all {len(val.cases)} inputs and screened out={bool(screened)}; "
                f"original viable={bool(original)} with {kills} kills")


# -- C8 --------------------------------------------------------------------------------------


def check_soundness():
    bad, total = [], 0
    for subject in corpus.SUBJECTS:
        program, mrs, pri, val = load_subject(subject)
        runner = Runner(STEP_LIMIT)
        for suite in (pri, val):
            for mr in mrs:
                for case, verdict in run_mr(program, mr, suite, runner=runner).verdicts:
                    total += 1
                    if verdict != SATISFIED:
                        bad.append(f"{subject}:{mr.id}:{case}={verdict}")
    return not bad, f"{total} source/follow-up pairs, {len(bad)} not satisfied {bad[:3]}"


CHECKS = {
    "C1": ("slicing matches the closure oracle on every fixture", check_slicing),
    "C2": ("P0 metrics are exact and quality = TA + TI + TFP", check_p0_metrics),
    "C3": ("APFD anchors and greedy APFD in the top quartile", check_apfd),
    "C4": ("greedy per-step contracts", check_greedy),
    "C5": ("pipeline runs are byte-identical", check_determinism),
    "C6": ("corpus size, centrality vs random, goldens", check_corpus),
    "C7": ("screening of a non-terminating mutant and the original", check_screening),
    "C8": ("every MR holds on the unmutated subjects", check_soundness),
}


@pytest.mark.parametrize("key", sorted(CHECKS))
def test_acceptance(key):
    title, check = CHECKS[key]
    ok, detail = check()
    ACCEPTANCE[key] = (ok, title, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for key, (title, check) in CHECKS.items():
        ok, detail = check()
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] {key} {title}: {detail}")
    sys.exit(1 if failed else 0)
