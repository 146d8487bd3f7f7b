"""End-to-end validation run for one subject.

Stages: analyze, run the MRs on the prioritizing suite, score, mutate and
screen, build both kill matrices, order the MRs with every strategy, and
evaluate each ordering on the validation kill matrix.  Every artifact is
written as sorted-key JSON, so two runs with the same config produce the
same bytes.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import jsonio
from .centrality import StatementCentrality
from .dependence import analyze_program
from .errors import ConfigError, DisjointnessError, MetaprioError
from .evaluate import (
    DEFAULT_THRESHOLDS,
    baseline_average,
    curve_csv,
    evaluate_ordering,
    format_table,
    reports_to_json,
)
from .mt import ERROR, Runner, run_mr
from .mutation import (
    OPERATORS,
    PRIORITIZING,
    VALIDATION,
    build_kill_matrix,
    generate_mutants,
    screen_mutants,
)
from .prioritize import (
    CentralityPrioritizer,
    CoveragePrioritizer,
    FaultBasedPrioritizer,
    RandomPrioritizer,
)
from .validation import check_mr_ids

log = logging.getLogger(__name__)

STAGES = ("config", "analyze", "run", "score", "mutate", "kill-matrix", "prioritize", "evaluate")


class StageError(MetaprioError):
    """A pipeline stage failed; ``cause`` is the underlying error."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class PipelineConfig:
    subject: Path
    mrs: Path
    prioritizing_tests: Path
    validation_tests: Path
    operators: tuple = OPERATORS
    full_aor: bool = False
    coverage_seed: int = 0
    random_seed: int = 0
    thresholds: tuple = DEFAULT_THRESHOLDS
    random_orderings: int = 100
    step_limit: int = 10**6

    @classmethod
    def from_json(cls, obj, base_dir="."):
        jsonio.validate(obj, "config", "config")
        base = Path(base_dir)
        seeds = obj.get("seeds", {})
        return cls(
            base / obj["subject"],
            base / obj["mrs"],
            base / obj["prioritizing_tests"],
            base / obj["validation_tests"],
            tuple(obj.get("operators", OPERATORS)),
            obj.get("full_aor", False),
            seeds.get("coverage", 0),
            seeds.get("random", 0),
            tuple(obj.get("thresholds", DEFAULT_THRESHOLDS)),
            obj.get("random_orderings", 100),
            obj.get("step_limit", 10**6),
        )

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        return cls.from_json(jsonio.read_json(path, "config"), path.parent)

    def to_json(self):
        # file names only, so the echo does not depend on where the run happens
        return {
            "subject": self.subject.name,
            "mrs": self.mrs.name,
            "prioritizing_tests": self.prioritizing_tests.name,
            "validation_tests": self.validation_tests.name,
            "operators": list(self.operators),
            "full_aor": self.full_aor,
            "seeds": {"coverage": self.coverage_seed, "random": self.random_seed},
            "thresholds": list(self.thresholds),
            "random_orderings": self.random_orderings,
            "step_limit": self.step_limit,
        }


@dataclass
class PipelineResult:
    program: object
    analysis: object
    mrs: list
    mr_runs: list
    scores: list
    mutants: list
    viable: list
    km_prioritizing: object
    km_validation: object
    orderings: dict
    random_orderings: list
    reports: list
    random_apfds: list
    files: dict = field(default_factory=dict)

    def report(self, strategy):
        return next(r for r in self.reports if r.strategy == strategy)


class _Stage:
    def __init__(self, name):
        self.name = name

    def __enter__(self):
        log.info("stage %s", self.name)

    def __exit__(self, kind, exc, tb):
        if exc is not None and isinstance(exc, MetaprioError) and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


def load_inputs(cfg):
    """Parse the subject and load MRs and suites; enforce config invariants."""
    with _Stage("config"):
        mrs = jsonio.load_mrs(cfg.mrs)
        if not mrs:
            raise ConfigError("MR list is empty")
        check_mr_ids(m.id for m in mrs)
        pri = jsonio.load_suite(cfg.prioritizing_tests)
        val = jsonio.load_suite(cfg.validation_tests)
        if not pri.role.startswith("prioritizing") or not val.role.startswith("validation"):
            raise ConfigError(
                f"suite roles are {pri.role!r} and {val.role!r}; "
                "expected a prioritizing and a validation source suite"
            )
        overlap = sorted(set(pri.ids) & set(val.ids))
        if overlap:
            raise DisjointnessError(f"test ids used in both suites: {overlap}")
    with _Stage("analyze"):
        program = jsonio.load_program(cfg.subject)
    return program, mrs, pri, val


def _check_sources(program, suite, runner):
    for case in suite.cases:
        prof = runner.run(program, case.entry, case.args, case.test_id)
        if not prof.ok:
            raise ConfigError(
                f"{suite.role} test {case.test_id} fails on the original program: {prof.error}"
            )


def run_pipeline(cfg, out_dir=None) -> PipelineResult:
    program, mrs, pri, val = load_inputs(cfg)
    runner = Runner(cfg.step_limit)

    with _Stage("analyze"):
        analysis = analyze_program(program)

    with _Stage("run"):
        _check_sources(program, pri, runner)
        _check_sources(program, val, runner)
        mr_runs = [run_mr(program, mr, pri, runner=runner) for mr in mrs]
        for r in mr_runs:
            if any(v == ERROR for _, v in r.verdicts):
                raise ConfigError(f"MR {r.mr} errs on the original program")
            if r.violated:
                log.warning("MR %s is violated by the original program", r.mr)

    with _Stage("score"):
        scores = StatementCentrality().fit(analysis).transform(mr_runs)

    with _Stage("mutate"):
        mutants = generate_mutants(program, cfg.operators, cfg.full_aor)
        viable, screened = screen_mutants(mutants, val, runner=runner)
        by_id = {m.id: m for m in viable + screened}
        mutants = [by_id[m.id] for m in mutants]

    with _Stage("kill-matrix"):
        km_p = build_kill_matrix(program, viable, mrs, pri, PRIORITIZING, runner)
        km_v = build_kill_matrix(program, viable, mrs, val, VALIDATION, runner)

    with _Stage("prioritize"):
        mr_ids = [m.id for m in mrs]
        orderings = {
            "centrality": CentralityPrioritizer().fit(scores).ordering_,
            "fault_based": FaultBasedPrioritizer().fit(km_p).ordering_,
            "stmt_coverage": CoveragePrioritizer("statement", cfg.coverage_seed)
            .fit(mr_runs)
            .ordering_,
            "branch_coverage": CoveragePrioritizer("branch", cfg.coverage_seed)
            .fit(mr_runs)
            .ordering_,
        }
        randoms = RandomPrioritizer(cfg.random_orderings, cfg.random_seed).fit(mr_ids).orderings_

    with _Stage("evaluate"):
        reports = [evaluate_ordering(o, km_v, cfg.thresholds) for o in orderings.values()]
        reports.append(baseline_average(randoms, km_v, cfg.thresholds))
        random_apfds = [evaluate_ordering(o, km_v, cfg.thresholds).apfd for o in randoms]

    result = PipelineResult(
        program, analysis, mrs, mr_runs, scores, mutants, viable, km_p, km_v,
        orderings, randoms, reports, random_apfds,
    )
    if out_dir is not None:
        result.files = write_artifacts(result, cfg, out_dir)
    return result


def write_artifacts(result, cfg, out_dir):
    """Write every artifact plus a manifest of SHA-256 digests; return {name: digest}."""
    out = Path(out_dir)
    (out / "curves").mkdir(parents=True, exist_ok=True)
    digest = result.program.source_digest
    profiles = [p for r in result.mr_runs for p in r.profiles]
    unique = {p.test_id: p for p in profiles}
    docs = {
        "analysis.json": result.analysis.to_json(),
        "profiles.json": jsonio.profiles_to_json(digest, unique.values(), result.mr_runs),
        "scores.json": jsonio.scores_to_json(digest, result.scores),
        "mutants.json": jsonio.mutants_to_json(digest, result.mutants),
        "km_prioritizing.json": result.km_prioritizing.to_json(),
        "km_validation.json": result.km_validation.to_json(),
        "orderings.json": jsonio.orderings_to_json(
            list(result.orderings.values()) + result.random_orderings
        ),
        "reports.json": reports_to_json(
            result.reports,
            {"random_baseline": {"apfd": [float(round(a, 6)) for a in result.random_apfds]}},
        ),
    }
    texts = {name: jsonio.dumps(doc) for name, doc in docs.items()}
    texts["summary.txt"] = format_table(result.reports)
    for r in result.reports:
        texts[f"curves/{r.strategy}.csv"] = curve_csv(r)
    files = {}
    for name in sorted(texts):
        (out / name).write_text(texts[name], encoding="utf-8", newline="\n")
        files[name] = jsonio.sha256(texts[name])
    manifest = {
        "program_digest": digest,
        "config": cfg.to_json(),
        "counts": {
            "mrs": len(result.mrs),
            "mutants": len(result.mutants),
            "viable": len(result.viable),
            "killable_validation": len(result.km_validation.killable),
            "killable_prioritizing": len(result.km_prioritizing.killable),
        },
        "files": files,
    }
    jsonio.write_json(out / "manifest.json", manifest)
    return files
