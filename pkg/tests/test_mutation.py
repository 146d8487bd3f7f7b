import dataclasses

import pytest

import oracles
from conftest import P0_SOURCE
from metaprio.execution import execute
from metaprio.minilang import parse, pretty_print
from metaprio.mt import MrSpec, Relation, Runner, TestCase, TestSuite, Transform, run_case
from metaprio.mutation import (
    SCREENED_OUT,
    VIABLE,
    KillMatrix,
    Mutant,
    build_kill_matrix,
    generate_mutants,
    identity_mutant,
    screen_mutants,
)

REVERSE = MrSpec("MR1", Transform("reverse"), Relation("eq"))
APPEND5 = MrSpec("MR2", Transform("append", 5), Relation("custom", "o_f == o_s + 5"))


def cases(*arrays, role="validation_source"):
    return TestSuite(role, tuple(TestCase(f"v{i}", "sum", (tuple(a),)) for i, a in enumerate(arrays, 1)))


def hand_mutant(mid, source, sid=4):
    return Mutant(mid, "HAND", sid, (), "hand-written", parse(source, mid))


def small_runner():
    return Runner(10_000)


def test_aor_single_site():
    p = parse("fn f(a: int, b: int) -> int { x = a + b\n return x }")
    ms = generate_mutants(p, ["AOR"])
    assert [m.description for m in ms] == ["a + b -> a - b"]


def test_ror_on_p0_loop_condition(p0):
    ms = [m for m in generate_mutants(p0, ["ROR"]) if m.sid == 3]
    ops = sorted(m.mutated_program.statement(3).cond.op for m in ms)
    assert ops == sorted(["<=", ">", ">=", "==", "!="])


def test_no_sites_no_mutants():
    p = parse("fn f(x: int) -> int { return x }")
    assert generate_mutants(p, ["AOR", "ROR", "LOR"]) == []


def test_full_aor_and_lor_and_crp():
    p = parse("fn f(x: int, b: bool) -> bool { y = x % 3\n return y > 1 && b }")
    assert len(generate_mutants(p, ["AOR"])) == 0
    assert len(generate_mutants(p, ["AOR"], full_aor=True)) == 4
    assert [m.description for m in generate_mutants(p, ["LOR"])] == ["y > 1 && b -> y > 1 || b"]
    crp = sorted(m.description for m in generate_mutants(p, ["CRP"]))
    assert crp == ["1 -> 0", "1 -> 2", "3 -> 0", "3 -> 4"]


def test_sdl_deletes_assignments_only(p0):
    ms = generate_mutants(p0, ["SDL"])
    assert [m.sid for m in ms] == [1, 2, 4, 5]
    assert 5 not in ms[-1].mutated_program.statements


def test_mutants_are_single_edits_with_distinct_digests(p0):
    ms = generate_mutants(p0)
    assert [m.id for m in ms] == [f"m{i:04d}" for i in range(1, len(ms) + 1)]
    digests = {m.mutated_program.source_digest for m in ms}
    assert len(digests) == len(ms)
    assert p0.source_digest not in digests
    for m in ms:
        mp = m.mutated_program
        changed = [
            s for s in p0.statements
            if s not in mp.statements or _own(mp.statement(s)) != _own(p0.statement(s))
        ]
        assert changed == [m.sid]


def _own(stmt):
    # a statement's own expressions, ignoring nested bodies
    return type(stmt), list(oracles.statement_exprs(stmt))


def test_generation_is_deterministic(p0):
    a = [(m.id, m.description) for m in generate_mutants(p0)]
    b = [(m.id, m.description) for m in generate_mutants(parse(P0_SOURCE))]
    assert a == b


def test_mutants_are_printable(p0):
    for m in generate_mutants(p0):
        assert "fn sum" in pretty_print(m.mutated_program)


# -- screening ------------------------------------------------------------------------


NON_TERMINATING = P0_SOURCE.replace("i < len(a)", "i >= 0").replace("        i = i + 1\n", "")


def test_non_terminating_mutant_screened_out(p0):
    looping = hand_mutant("loop", NON_TERMINATING, sid=3)
    for xs in ([1], [2, 3]):
        assert execute(looping.mutated_program, "sum", [xs], step_limit=500).timed_out
    viable, screened = screen_mutants(
        [looping, identity_mutant(p0)], cases([1], [2, 3]), runner=Runner(500)
    )
    assert [m.id for m in screened] == ["loop"] and screened[0].status == SCREENED_OUT
    assert [m.id for m in viable] == ["original"] and viable[0].status == VIABLE


def test_partial_error_is_viable():
    m = hand_mutant("m", P0_SOURCE.replace("total = total + a[i]", "total = total + a[i + 1]"))
    viable, _ = screen_mutants([m], cases([], [1, 2]), runner=small_runner())
    assert [x.id for x in viable] == ["m"]
    assert execute(m.mutated_program, "sum", [[1, 2]]).error is not None


# -- kill matrices ------------------------------------------------------------------------


def test_kill_examples(p0):
    neg = hand_mutant("neg", P0_SOURCE.replace("total = total + a[i]", "total = total - a[i]"))
    km = build_kill_matrix(p0, [neg, identity_mutant(p0)], [REVERSE, APPEND5], cases([1, 2]), runner=small_runner())
    assert km.kill_sets() == {"MR1": frozenset(), "MR2": frozenset({"neg"})}
    assert km.killable == ("neg",)


def test_error_on_mutant_is_a_kill(p0):
    crash = hand_mutant("crash", P0_SOURCE.replace("total = total + a[i]", "total = total + a[i] / 0"))
    km = build_kill_matrix(p0, [crash], [REVERSE], cases([1, 2]), runner=small_runner())
    assert km.kill_sets()["MR1"] == {"crash"}


def test_cases_invalid_on_original_are_ignored(p0):
    bad = MrSpec("MR3", Transform("remove_first"), Relation("eq"))
    neg = hand_mutant("neg", P0_SOURCE.replace("total = total + a[i]", "total = total - a[i]"))
    # remove_first breaks eq on the original, so no case of MR3 is valid
    km = build_kill_matrix(p0, [neg], [bad], cases([1, 2], [3]))
    assert km.kill_sets()["MR3"] == frozenset()


def test_empty_and_duplicate(p0):
    km = build_kill_matrix(p0, [], [REVERSE], cases([1]))
    assert km.mutants == () and km.kills == ((),)
    dup = dataclasses.replace(APPEND5, id="MR9")
    ms = generate_mutants(p0)
    km = build_kill_matrix(p0, ms, [APPEND5, dup], cases([1, 2], [5]), runner=small_runner())
    assert km.kills[0] == km.kills[1]
    assert km.mr_cost_steps[0] == km.mr_cost_steps[1] > 0


def test_skip_of_unreached_mutants_matches_full_run(p0):
    # the reached-statement shortcut must not change any verdict
    ms = generate_mutants(p0)
    suite = cases([], [4], [1, 2, 3])
    runner = small_runner()
    km = build_kill_matrix(p0, ms, [REVERSE, APPEND5], suite, runner=runner)
    for mr, row in zip((REVERSE, APPEND5), km.kills):
        for m, killed in zip(ms, row):
            full = False
            for c in suite.cases:
                orig, _ = run_case(p0, mr, c, runner)
                if orig != "satisfied":
                    continue
                v, _ = run_case(m.mutated_program, mr, c, runner)
                full |= v != "satisfied"
            assert killed == full, (mr.id, m.id)


def test_kill_matrix_json_round_trip(p0):
    km = build_kill_matrix(
        p0, generate_mutants(p0), [REVERSE, APPEND5], cases([1, 2]), runner=small_runner()
    )
    assert KillMatrix.from_json(km.to_json()) == km


def test_kill_matrix_shape_checked():
    with pytest.raises(ValueError):
        KillMatrix("validation", ("A",), ("m1",), ((True, False),), (1,))
