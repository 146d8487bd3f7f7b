"""MR ordering strategies.

Each strategy is a small estimator: ``fit`` consumes the evidence gathered
on one program version and stores ``ordering_``; ``transform`` re-applies the
learned order to a list of MR ids (for example, when testing the next
version).  The module-level functions are thin wrappers for one-shot use.
"""

from dataclasses import dataclass, field

from sklearn.base import BaseEstimator
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_is_fitted

from .validation import check_coverages, check_kill_matrix, check_mr_ids, check_scores

CENTRALITY = "centrality"
FAULT_BASED = "fault_based"
STMT_COVERAGE = "stmt_coverage"
BRANCH_COVERAGE = "branch_coverage"
RANDOM = "random"
STRATEGIES = (CENTRALITY, FAULT_BASED, STMT_COVERAGE, BRANCH_COVERAGE, RANDOM)


@dataclass(frozen=True)
class Ordering:
    strategy: str
    sequence: tuple
    seed: int | None = None
    provenance: dict = field(default_factory=dict, compare=False)

    def top(self, n):
        return self.sequence[:n]

    def to_json(self):
        return {
            "strategy": self.strategy,
            "sequence": list(self.sequence),
            "seed": self.seed,
            "provenance": dict(sorted(self.provenance.items())),
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            obj["strategy"], tuple(obj["sequence"]), obj.get("seed"), obj.get("provenance", {})
        )


@dataclass(frozen=True)
class GreedyStep:
    mr: str
    gain: int
    reset: bool  # uncovered set was refilled before this pick


def additional_greedy(sets, choose):
    """Order keys of ``sets`` by marginal gain over not-yet-covered items.

    When no remaining key adds anything new, the uncovered set is refilled
    with every item and selection continues, so the result is always a full
    permutation.  ``choose`` picks one key from the sorted list of tied keys.
    Returns the list of :class:`GreedyStep`.
    """
    universe = frozenset().union(*sets.values()) if sets else frozenset()
    uncovered = set(universe)
    remaining = sorted(sets)
    steps = []
    while remaining:
        gains = {mr: len(sets[mr] & uncovered) for mr in remaining}
        reset = False
        if max(gains.values()) == 0 and uncovered != universe:
            uncovered = set(universe)
            gains = {mr: len(sets[mr] & uncovered) for mr in remaining}
            reset = True
        best = max(gains.values())
        pick = choose([mr for mr in remaining if gains[mr] == best])
        steps.append(GreedyStep(pick, best, reset))
        uncovered -= sets[pick]
        remaining.remove(pick)
    return steps


class _Prioritizer(BaseEstimator):
    strategy = None

    def transform(self, X):
        """Reorder MR ids ``X`` by the learned priority."""
        check_is_fitted(self, "ordering_")
        rank = {mr: i for i, mr in enumerate(self.ordering_.sequence)}
        missing = [mr for mr in X if mr not in rank]
        if missing:
            raise KeyError(f"MRs not seen during fit: {missing}")
        return sorted(X, key=rank.__getitem__)

    def top_n(self, n):
        check_is_fitted(self, "ordering_")
        return self.ordering_.top(n)


class CentralityPrioritizer(_Prioritizer):
    """Rank MRs by quality score, highest first; ties by MR id."""

    strategy = CENTRALITY

    def fit(self, X, y=None):
        quality = check_scores(X)
        seq = sorted(quality, key=lambda mr: (-quality[mr], mr))
        self.quality_ = quality
        self.ordering_ = Ordering(self.strategy, tuple(seq))
        return self


class FaultBasedPrioritizer(_Prioritizer):
    """Greedy additional fault coverage over a prioritizing kill matrix.

    Ties go to the lowest MR id.
    """

    strategy = FAULT_BASED

    def fit(self, X, y=None):
        km = check_kill_matrix(X)
        self.steps_ = additional_greedy(km.kill_sets(), lambda tied: tied[0])
        self.ordering_ = Ordering(self.strategy, tuple(s.mr for s in self.steps_))
        return self


class CoveragePrioritizer(_Prioritizer):
    """Greedy additional statement or branch coverage.

    Parameters
    ----------
    unit : {"statement", "branch"}
    random_state : int, RandomState instance or None, default=0
        Breaks ties between equally good MRs.
    """

    def __init__(self, unit="statement", random_state=0):
        self.unit = unit
        self.random_state = random_state

    def fit(self, X, y=None):
        if self.unit not in ("statement", "branch"):
            raise ValueError(f"unit must be 'statement' or 'branch', got {self.unit!r}")
        sets = check_coverages(X, self.unit)
        rng = check_random_state(self.random_state)

        def choose(tied):
            return tied[0] if len(tied) == 1 else tied[rng.randint(len(tied))]

        self.steps_ = additional_greedy(sets, choose)
        strategy = STMT_COVERAGE if self.unit == "statement" else BRANCH_COVERAGE
        seed = self.random_state if isinstance(self.random_state, int) else None
        self.ordering_ = Ordering(strategy, tuple(s.mr for s in self.steps_), seed)
        return self


class RandomPrioritizer(BaseEstimator):
    """``n_orderings`` independent uniform permutations of the MR ids."""

    def __init__(self, n_orderings=100, random_state=0):
        self.n_orderings = n_orderings
        self.random_state = random_state

    def fit(self, X, y=None):
        ids = check_mr_ids(X)
        if self.n_orderings < 1:
            raise ValueError("n_orderings must be at least 1")
        rng = check_random_state(self.random_state)
        seed = self.random_state if isinstance(self.random_state, int) else None
        self.orderings_ = [
            Ordering(RANDOM, tuple(ids[i] for i in rng.permutation(len(ids))), seed)
            for _ in range(self.n_orderings)
        ]
        return self


def centrality_order(scores) -> Ordering:
    return CentralityPrioritizer().fit(scores).ordering_


def fault_based_order(km) -> Ordering:
    return FaultBasedPrioritizer().fit(km).ordering_


def coverage_order(coverages, unit="statement", seed=0) -> Ordering:
    return CoveragePrioritizer(unit, seed).fit(coverages).ordering_


def random_orders(mr_ids, count=100, seed=0) -> list:
    return RandomPrioritizer(count, seed).fit(mr_ids).orderings_
