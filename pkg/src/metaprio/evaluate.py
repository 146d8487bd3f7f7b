"""Measures of how quickly an MR ordering detects the validation faults.

Only killable mutants (killed by at least one MR) count as faults.  All
quantities are exact fractions; rendering rounds them.
"""

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import MixedMrSets, NoKillableMutants

DEFAULT_THRESHOLDS = (5.0, 2.5)


@dataclass(frozen=True)
class EvaluationReport:
    strategy: str
    sequence: tuple | None
    curve: tuple
    effective_size: dict
    apfd: Fraction
    avg_time_steps: Fraction
    killable_count: int
    mr_count: int
    orderings: int = 1
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def final_pct(self):
        return self.curve[-1]

    def to_json(self):
        return {
            "strategy": self.strategy,
            "sequence": list(self.sequence) if self.sequence is not None else None,
            "orderings": self.orderings,
            "curve": [
                {"set_size": i, "pct_killed": _pct(v)} for i, v in enumerate(self.curve, 1)
            ],
            "effective_size": {_thr(t): m for t, m in sorted(self.effective_size.items())},
            "apfd": float(round(self.apfd, 6)),
            "avg_time_steps": float(round(self.avg_time_steps, 6)),
            "killable_count": self.killable_count,
            "mr_count": self.mr_count,
        }


def _pct(v):
    return float(round(Fraction(v), 1))


def _thr(t):
    return f"{float(t):g}"


def _sequence(o):
    return tuple(o.sequence) if hasattr(o, "sequence") else tuple(o)


def _check(o, km):
    seq = _sequence(o)
    if sorted(seq) != sorted(km.mrs):
        raise MixedMrSets("ordering and kill matrix cover different MR sets")
    killable = km.killable
    if not killable:
        raise NoKillableMutants("no mutant is killed by any MR")
    return seq, killable


def first_detection_ranks(o, km) -> dict:
    """Killable mutant -> 1-based position of the first MR killing it."""
    seq, killable = _check(o, km)
    sets = km.kill_sets()
    ranks = {}
    for pos, mr in enumerate(seq, 1):
        for m in sets[mr]:
            ranks.setdefault(m, pos)
    return {m: ranks[m] for m in killable}


def effectiveness_curve(o, km) -> list:
    """Percent of killable mutants killed by the first m MRs, m = 1..n."""
    seq, killable = _check(o, km)
    sets = km.kill_sets()
    seen, curve = set(), []
    for mr in seq:
        seen |= sets[mr]
        curve.append(Fraction(100 * len(seen), len(killable)))
    return curve


def effective_set_size(curve, threshold_pct=5.0) -> int:
    """Smallest m whose next MR adds less than ``threshold_pct`` points."""
    if not curve:
        raise ValueError("empty effectiveness curve")
    thr = Fraction(str(threshold_pct))
    for m in range(1, len(curve)):
        if Fraction(curve[m]) - Fraction(curve[m - 1]) < thr:
            return m
    return len(curve)


def avg_time_to_detect(o, km) -> Fraction:
    """Mean cost (in steps) of running MRs in order until each fault is killed."""
    seq = _sequence(o)
    ranks = first_detection_ranks(o, km)
    cost = km.cost()
    elapsed, acc = [], 0
    for mr in seq:
        acc += cost[mr]
        elapsed.append(acc)
    return Fraction(sum(elapsed[r - 1] for r in ranks.values()), len(ranks))


def apfd(o, km) -> Fraction:
    """APFD = 1 - (Σ first-detection ranks) / (n·m) + 1 / (2n)."""
    ranks = first_detection_ranks(o, km)
    n, m = len(km.mrs), len(ranks)
    return 1 - Fraction(sum(ranks.values()), n * m) + Fraction(1, 2 * n)


def evaluate_ordering(o, km, thresholds=DEFAULT_THRESHOLDS, strategy=None) -> EvaluationReport:
    curve = effectiveness_curve(o, km)
    return EvaluationReport(
        strategy or getattr(o, "strategy", "custom"),
        _sequence(o),
        tuple(curve),
        {t: effective_set_size(curve, t) for t in thresholds},
        apfd(o, km),
        avg_time_to_detect(o, km),
        len(km.killable),
        len(km.mrs),
    )


def baseline_average(orders, km, thresholds=DEFAULT_THRESHOLDS) -> EvaluationReport:
    """Average several orderings: pointwise mean curve, mean APFD and time.

    Effective set sizes are read off the averaged curve.
    """
    orders = list(orders)
    if not orders:
        raise ValueError("no orderings to average")
    mrset = sorted(_sequence(orders[0]))
    if any(sorted(_sequence(o)) != mrset for o in orders):
        raise MixedMrSets("orderings cover different MR sets")
    reports = [evaluate_ordering(o, km, thresholds) for o in orders]
    k = len(reports)
    curve = tuple(sum(col, Fraction(0)) / k for col in zip(*(r.curve for r in reports)))
    return EvaluationReport(
        getattr(orders[0], "strategy", "random"),
        None,
        curve,
        {t: effective_set_size(curve, t) for t in thresholds},
        sum((r.apfd for r in reports), Fraction(0)) / k,
        sum((r.avg_time_steps for r in reports), Fraction(0)) / k,
        reports[0].killable_count,
        reports[0].mr_count,
        orderings=k,
    )


def summary_rows(reports):
    """One row per report: strategy, APFD, time, effective sizes, final kill %."""
    thresholds = sorted({t for r in reports for t in r.effective_size}, reverse=True)
    header = ["strategy", "apfd", "avg_time_steps"]
    header += [f"effective_size@{_thr(t)}%" for t in thresholds]
    header.append("final_pct_killed")
    rows = []
    for r in reports:
        row = [r.strategy, f"{float(r.apfd):.4f}", f"{float(r.avg_time_steps):.1f}"]
        row += [str(r.effective_size.get(t, "")) for t in thresholds]
        row.append(f"{_pct(r.final_pct):.1f}")
        rows.append(row)
    return header, rows


def format_table(reports) -> str:
    """Plain-text comparison table (strategy x measure)."""
    if not reports:
        raise ValueError("no reports to format")
    header, rows = summary_rows(reports)
    widths = [max(len(x) for x in col) for col in zip(header, *rows)]

    def line(cells):
        first = cells[0].ljust(widths[0])
        rest = (c.rjust(w) for c, w in zip(cells[1:], widths[1:]))
        return "  ".join([first, *rest]).rstrip()

    out = [line(header), line(["-" * w for w in widths])]
    out += [line(r) for r in rows]
    return "\n".join(out) + "\n"


def curve_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["set_size", "pct_killed"])
    for i, v in enumerate(report.curve, 1):
        w.writerow([i, f"{_pct(v):.1f}"])
    return buf.getvalue()


def reports_to_json(reports, extra=None):
    doc = {"reports": [r.to_json() for r in reports]}
    if extra:
        doc.update(extra)
    return doc
