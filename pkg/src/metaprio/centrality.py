"""Statement-centrality metrics and the MR quality score.

For one MR with coverage union ``U`` and each method of the program:

* ``B_r``: backward slice from the method's return statements, plus the
  returns themselves, restricted to ``U``;
* statements affected: ``SA_s = |F_s ∩ U|`` and ``TA = Σ_{s∈B_r} SA_s``;
* projected impact: ``TI = Σ_{s∈B_r} Σ_{s'∈F_s∩U} |F_s' ∩ U|`` (a statement
  reached from several ``s`` counts once per occurrence);
* fault propagation: ``PF_s = 1 / (operators(s) + hops(s, return))`` with
  ``PF_s = 1`` when the denominator is zero, ``TFP = Σ_{s∈B_r} PF_s``.

The quality score is ``TA + TI + TFP`` summed over methods, kept as an exact
:class:`~fractions.Fraction`.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .dependence import (
    BACKWARD,
    ProgramAnalysis,
    SliceSet,
    analyze_program,
    backward_slice,
    covered_statements,
    distance_to_output,
    forward_slice,
    restrict_to_covered,
)
from .errors import EmptyCoverage, MixedProgramDigest
from .minilang.cfg import count_operators


@dataclass(frozen=True)
class MethodScore:
    method: str
    br: frozenset
    sa: dict  # s -> SA_s
    ti: dict  # s -> Σ_{s'} SI_s'
    pf: dict  # s -> PF_s
    ta_total: int
    ti_total: int
    tfp_total: Fraction


@dataclass(frozen=True)
class ScoreBreakdown:
    mr: str
    per_method: dict = field(compare=True)
    ta_total: int = 0
    ti_total: int = 0
    tfp_total: Fraction = Fraction(0)

    @property
    def quality(self) -> Fraction:
        return self.ta_total + self.ti_total + self.tfp_total

    def to_json(self):
        return {
            "mr": self.mr,
            "ta": self.ta_total,
            "ti": self.ti_total,
            "tfp": _decimal(self.tfp_total),
            "quality": _decimal(self.quality),
            "quality_exact": str(self.quality),
            "methods": {
                name: {
                    "b_r": sorted(m.br),
                    "ta": m.ta_total,
                    "ti": m.ti_total,
                    "tfp": _decimal(m.tfp_total),
                    "sa": {str(s): v for s, v in sorted(m.sa.items())},
                    "pf": {str(s): str(v) for s, v in sorted(m.pf.items())},
                }
                for name, m in sorted(self.per_method.items())
            },
        }


def _decimal(q):
    return float(round(Fraction(q), 6))


def compute_br(pdg, cfg, u) -> SliceSet:
    """Covered backward slice from the function's returns (returns included)."""
    covered = covered_statements(u)
    if not covered & pdg.statements:
        return SliceSet(frozenset(cfg.returns), BACKWARD, frozenset())
    sl = backward_slice(pdg, cfg.returns)
    return restrict_to_covered(
        SliceSet(sl.seed, BACKWARD, sl.members | sl.seed), covered
    )


def _members(br):
    return br.members if isinstance(br, SliceSet) else frozenset(br)


def _covered_forward(pdg, s, u, memo):
    if s not in memo:
        memo[s] = restrict_to_covered(forward_slice(pdg, s), u).members
    return memo[s]


def statements_affected(pdg, br, u, _memo=None):
    """Per-statement ``SA_s`` over ``B_r`` and their total ``TA``."""
    memo = {} if _memo is None else _memo
    sa = {s: len(_covered_forward(pdg, s, u, memo)) for s in sorted(_members(br))}
    return sa, sum(sa.values())


def projected_impact(pdg, br, u, _memo=None):
    """Per-statement projected impact over ``B_r`` and the total ``TI``."""
    memo = {} if _memo is None else _memo
    ti = {}
    for s in sorted(_members(br)):
        ti[s] = sum(
            len(_covered_forward(pdg, t, u, memo)) for t in _covered_forward(pdg, s, u, memo)
        )
    return ti, sum(ti.values())


def _operators(source, s):
    if isinstance(source, ProgramAnalysis):
        return source.operators[s]
    if isinstance(source, dict):
        return source[s]
    return count_operators(source, s)


def propagation_weight(operators, hops) -> Fraction:
    denom = operators + hops
    return Fraction(1) if denom == 0 else Fraction(1, denom)


def fault_propagation(program, cfg, br):
    """Per-statement ``PF_s`` over ``B_r`` and the total ``TFP``.

    ``program`` may be a Program, a ProgramAnalysis or a mapping of
    statement id to operator count.
    """
    pf = {
        s: propagation_weight(_operators(program, s), distance_to_output(cfg, s))
        for s in sorted(_members(br))
    }
    return pf, sum(pf.values(), Fraction(0))


def method_score(program, pdg, cfg, u) -> MethodScore:
    br = compute_br(pdg, cfg, u)
    memo = {}
    sa, ta = statements_affected(pdg, br, u, memo)
    ti, ti_total = projected_impact(pdg, br, u, memo)
    pf, tfp = fault_propagation(program, cfg, br)
    return MethodScore(pdg.function, br.members, sa, ti, pf, ta, ti_total, tfp)


def mr_quality_score(program, pdgs, cfgs, result) -> ScoreBreakdown:
    """Score one MR from its run result (anything with ``.mr`` and ``.coverage``).

    Methods whose statements were never executed by the MR are skipped.
    """
    u = result.coverage
    if not covered_statements(u):
        raise EmptyCoverage(f"MR {result.mr} executed no statements")
    per_method = {}
    for name in sorted(pdgs):
        pdg = pdgs[name]
        if not covered_statements(u) & pdg.statements:
            continue
        per_method[name] = method_score(program, pdg, cfgs[name], u)
    return ScoreBreakdown(
        result.mr,
        per_method,
        sum(m.ta_total for m in per_method.values()),
        sum(m.ti_total for m in per_method.values()),
        sum((m.tfp_total for m in per_method.values()), Fraction(0)),
    )


class StatementCentrality(BaseEstimator):
    """Scores MR run results by statement centrality.

    ``fit`` analyses a program (or accepts a ready :class:`ProgramAnalysis`);
    ``transform`` maps a list of MR run results to :class:`ScoreBreakdown`
    objects in the same order.

    Parameters
    ----------
    check_digest : bool, default=True
        Reject run results whose coverage was recorded on another program.
    """

    def __init__(self, check_digest=True):
        self.check_digest = check_digest

    def fit(self, X, y=None):
        self.analysis_ = X if isinstance(X, ProgramAnalysis) else analyze_program(X)
        self.program_digest_ = self.analysis_.program_digest
        return self

    def transform(self, X):
        check_is_fitted(self, "analysis_")
        out = []
        for result in X:
            digest = getattr(result.coverage, "program_digest", "")
            if self.check_digest and digest and digest != self.program_digest_:
                raise MixedProgramDigest(
                    f"coverage for MR {result.mr} was recorded on another program"
                )
            out.append(
                mr_quality_score(
                    self.analysis_, self.analysis_.pdgs, self.analysis_.cfgs, result
                )
            )
        return out
