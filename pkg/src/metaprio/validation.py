"""Input validation helpers shared by the prioritizers and the evaluator."""

from .errors import DuplicateMr, EmptyMatrix, MixedProgramDigest


def check_mr_ids(ids):
    ids = list(ids)
    seen = set()
    for mr in ids:
        if not isinstance(mr, str) or not mr:
            raise TypeError(f"MR ids must be non-empty strings, got {mr!r}")
        if mr in seen:
            raise DuplicateMr(f"MR {mr!r} appears more than once")
        seen.add(mr)
    return ids


def check_scores(scores):
    """Normalise scores to ``{mr: quality}``.

    Accepts a mapping or an iterable of objects with ``mr`` and ``quality``.
    """
    if hasattr(scores, "items"):
        pairs = list(scores.items())
    else:
        pairs = [(s.mr, s.quality) for s in scores]
    check_mr_ids(mr for mr, _ in pairs)
    if not pairs:
        raise ValueError("no scores to order")
    return dict(pairs)


def check_kill_matrix(km, role=None):
    if not km.mrs:
        raise EmptyMatrix("kill matrix has no MRs")
    check_mr_ids(km.mrs)
    if role is not None and km.role != role:
        raise ValueError(f"expected a {role} kill matrix, got {km.role}")
    return km


def check_coverages(coverages, unit):
    """Normalise to ``{mr: frozenset of covered units}``.

    Accepts ``{mr: CoverageUnion}`` or an iterable of MR run results.
    """
    if hasattr(coverages, "items"):
        pairs = list(coverages.items())
    else:
        pairs = [(r.mr, r.coverage) for r in coverages]
    check_mr_ids(mr for mr, _ in pairs)
    digests = {getattr(c, "program_digest", "") for _, c in pairs} - {""}
    if len(digests) > 1:
        raise MixedProgramDigest("coverage unions come from different programs")
    attr = {"statement": "statements", "branch": "branches"}[unit]
    return {mr: frozenset(getattr(c, attr)) for mr, c in pairs}
