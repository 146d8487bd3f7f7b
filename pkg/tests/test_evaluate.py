import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from metaprio.errors import MixedMrSets, NoKillableMutants
from metaprio.evaluate import (
    apfd,
    avg_time_to_detect,
    baseline_average,
    curve_csv,
    effective_set_size,
    effectiveness_curve,
    evaluate_ordering,
    first_detection_ranks,
    format_table,
)
from metaprio.mutation import KillMatrix
from metaprio.prioritize import Ordering


def km(sets, costs=None, mutants=None):
    return KillMatrix.from_kill_sets(sets, costs, mutants)


def test_curve_example():
    m = km({"A": {"f1"}, "B": {"f1", "f2"}, "C": {"f3"}})
    curve = effectiveness_curve(["B", "C", "A"], m)
    assert curve == [Fraction(200, 3), 100, 100]
    assert effectiveness_curve(["A", "B", "C"], m)[-1] == 100


def test_curve_saturation():
    m = km({"A": {"f1", "f2"}, "B": {"f1"}})
    assert effectiveness_curve(["A", "B"], m) == [100, 100]


def test_effective_set_size():
    assert effective_set_size([Fraction(200, 3), 100, 100], 5) == 2
    assert effective_set_size([66.7, 100, 100], 5.0) == 2
    assert effective_set_size([100, 100, 100], 5) == 1
    assert effective_set_size([10 * i for i in range(1, 11)], 5) == 10


def test_threshold_comparison_is_exact():
    # a 5-point gap is not below a 5% threshold
    assert effective_set_size([Fraction(50), Fraction(55), Fraction(55)], 5.0) == 2
    assert effective_set_size([Fraction(50), Fraction(52.5), Fraction(60)], 2.5) == 3


def test_avg_time_to_detect():
    m = km({"MR1": {"f2"}, "MR2": {"f1"}}, {"MR1": 10, "MR2": 20})
    assert avg_time_to_detect(["MR1", "MR2"], m) == 20
    assert avg_time_to_detect(["X"], km({"X": {"f"}}, {"X": 7})) == 7


def test_high_kill_mr_first_never_slower():
    m = km({"A": {"f1", "f2"}, "B": {"f2"}, "C": {"f3"}}, {"A": 5, "B": 5, "C": 5})
    best = None
    for perm in itertools.permutations("ABC"):
        t = avg_time_to_detect(perm, m)
        best = t if best is None else min(best, t)
        if perm[0] != "A":
            moved = ("A",) + tuple(x for x in perm if x != "A")
            assert avg_time_to_detect(moved, m) <= t
    assert avg_time_to_detect(("A", "C", "B"), m) == best


def test_apfd_anchors():
    assert apfd(["A"], km({"A": {"f"}})) == Fraction(1, 2)
    for n in range(1, 7):
        ids = [f"M{i}" for i in range(n)]
        sets = {mr: set() for mr in ids}
        sets[ids[0]] = {"f1", "f2", "f3"}
        assert apfd(ids, km(sets)) == 1 - Fraction(1, 2 * n)
    m = km({"A": {"f1"}, "B": set(), "C": {"f2"}}, mutants=("f1", "f2"))
    assert apfd(["A", "B", "C"], m) == Fraction(1, 2)


def test_unkillable_faults_excluded():
    m = km({"A": {"f1"}, "B": set()}, mutants=("f1", "f2"))
    assert first_detection_ranks(["A", "B"], m) == {"f1": 1}
    with pytest.raises(NoKillableMutants):
        apfd(["A"], km({"A": set()}, mutants=("f1",)))


def test_mixed_mr_sets_rejected():
    m = km({"A": {"f"}, "B": {"f"}})
    with pytest.raises(MixedMrSets):
        apfd(["A"], m)
    with pytest.raises(MixedMrSets):
        baseline_average([["A", "B"], ["A", "C"]], m)


def test_baseline_average():
    m = km({"A": {"f1", "f2"}, "B": {"f1"}})
    avg = baseline_average([["B", "A"], ["A", "B"]], m)
    assert list(avg.curve) == [75, 100]
    assert avg.apfd == (apfd(["B", "A"], m) + apfd(["A", "B"], m)) / 2
    assert avg.orderings == 2
    same = baseline_average([["A", "B"]] * 3, m)
    assert same.curve == evaluate_ordering(["A", "B"], m).curve


def _random_matrix(rng, n, m):
    while True:
        sets = {f"MR{i}": {f"f{j}" for j in range(m) if rng.random() < 0.3} for i in range(n)}
        if any(sets.values()):
            return sets


def test_apfd_matches_oracle_and_bounds():
    rng = random.Random(11)
    for _ in range(200):
        sets = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 8))
        order = list(sets)
        rng.shuffle(order)
        m = km(sets, mutants=tuple(f"f{j}" for j in range(8)))
        value = apfd(order, m)
        assert value == oracles.apfd(order, sets)
        assert 0 < value < 1
        assert effectiveness_curve(order, m)[-1] == 100


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.data())
def test_apfd_decreases_when_first_detection_moves_later(n, data):
    # a fault found only by the MR at position p: moving that MR later lowers APFD
    ids = [f"M{i}" for i in range(n)]
    p = data.draw(st.integers(0, n - 2))
    sets = {mr: {"common"} for mr in ids}
    sets[ids[p]] = {"common", "solo"}
    m = km(sets)
    later = ids[:p] + ids[p + 1 : p + 2] + [ids[p]] + ids[p + 2 :]
    assert apfd(later, m) < apfd(ids, m)


def test_best_ordering_matches_exhaustive_search():
    rng = random.Random(5)
    for _ in range(30):
        sets = _random_matrix(rng, rng.randint(2, 5), 6)
        m = km(sets)
        scores = {p: apfd(p, m) for p in itertools.permutations(sets)}
        best = max(scores.values())
        oracle_best = max(oracles.apfd(p, sets) for p in itertools.permutations(sets))
        assert best == oracle_best


# -- rendering ------------------------------------------------------------------------------


def test_report_rendering():
    m = km({"A": {"f1", "f2"}, "B": {"f3"}}, {"A": 3, "B": 4})
    r = evaluate_ordering(Ordering("centrality", ("A", "B")), m)
    doc = r.to_json()
    assert doc["curve"] == [{"set_size": 1, "pct_killed": 66.7}, {"set_size": 2, "pct_killed": 100.0}]
    assert doc["effective_size"] == {"2.5": 2, "5": 2}
    table = format_table([r])
    assert len(table.strip().splitlines()) == 3
    assert table.splitlines()[0].split() == [
        "strategy", "apfd", "avg_time_steps", "effective_size@5%",
        "effective_size@2.5%", "final_pct_killed",
    ]
    assert curve_csv(r) == "set_size,pct_killed\n1,66.7\n2,100.0\n"
