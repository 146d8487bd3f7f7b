"""``metaprio`` command line.

Exit codes: 0 success, 2 configuration error, 3 analysis error,
4 execution error.
"""

import argparse
import logging
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from . import corpus, jsonio
from .centrality import StatementCentrality
from .dependence import ProgramAnalysis, analyze_program
from .errors import (
    ConfigError,
    DuplicateFunction,
    DuplicateMr,
    MetaprioError,
    MiniSyntaxError,
    MiniTypeError,
    MixedProgramDigest,
    UnknownFunction,
    UnknownStatement,
)
from .evaluate import (
    DEFAULT_THRESHOLDS,
    baseline_average,
    curve_csv,
    evaluate_ordering,
    format_table,
    reports_to_json,
)
from .mt import Runner, run_mr
from .mutation import (
    OPERATORS,
    PRIORITIZING,
    VALIDATION,
    KillMatrix,
    build_kill_matrix,
    generate_mutants,
    screen_mutants,
)
from .pipeline import PipelineConfig, StageError, run_pipeline
from .prioritize import (
    RANDOM,
    CentralityPrioritizer,
    CoveragePrioritizer,
    FaultBasedPrioritizer,
    RandomPrioritizer,
)

EXIT_OK, EXIT_CONFIG, EXIT_ANALYSIS, EXIT_EXECUTION = 0, 2, 3, 4

_ANALYSIS_ERRORS = (
    MiniSyntaxError,
    MiniTypeError,
    DuplicateFunction,
    UnknownFunction,
    UnknownStatement,
    MixedProgramDigest,
)

STRATEGY_NAMES = {
    "centrality": "centrality",
    "fault": "fault_based",
    "stmt-cov": "stmt_coverage",
    "branch-cov": "branch_coverage",
    "random": "random",
}


def exit_code(exc) -> int:
    if isinstance(exc, StageError):
        exc = exc.cause
    if isinstance(exc, (ConfigError, DuplicateMr)):
        return EXIT_CONFIG
    if isinstance(exc, _ANALYSIS_ERRORS):
        return EXIT_ANALYSIS
    return EXIT_EXECUTION


def _emit(text, path):
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _emit_json(obj, path):
    _emit(jsonio.dumps(obj), path)


def _operators(text):
    ops = tuple(o.strip().upper() for o in text.split(",") if o.strip())
    bad = sorted(set(ops) - set(OPERATORS))
    if bad:
        raise ConfigError(f"unknown mutation operators: {', '.join(bad)}")
    return ops


def _load_mutants(program, args):
    """Regenerate mutants and keep those listed as viable in --mutants, if given."""
    mutants = generate_mutants(program, _operators(args.ops), args.full_aor)
    if not args.mutants:
        return mutants
    doc = jsonio.read_json(args.mutants, "mutants")
    if doc.get("program_digest") not in (None, program.source_digest):
        raise ConfigError(f"{args.mutants} was generated from another program")
    wanted = {m["id"]: m for m in doc["mutants"] if m["status"] != "screened_out"}
    by_id = {m.id: m for m in mutants}
    missing = sorted(set(wanted) - set(by_id))
    if missing:
        raise ConfigError(f"mutants not reproducible with these operators: {missing[:5]}")
    return [by_id[mid] for mid in sorted(wanted)]


# -- subcommands -----------------------------------------------------------------


def cmd_analyze(args):
    program = jsonio.load_program(args.file)
    _emit_json(analyze_program(program).to_json(), args.emit)


def cmd_run(args):
    program = jsonio.load_program(args.file)
    suite = jsonio.load_suite(args.tests)
    runner = Runner(args.step_limit)
    profiles = [runner.run(program, c.entry, c.args, c.test_id) for c in suite.cases]
    runs = []
    if args.mrs:
        runs = [run_mr(program, mr, suite, runner=runner) for mr in jsonio.load_mrs(args.mrs)]
        seen = {p.test_id for p in profiles}
        profiles += [p for r in runs for p in r.profiles if p.test_id not in seen]
    _emit_json(jsonio.profiles_to_json(program.source_digest, profiles, runs), args.emit)


def cmd_score(args):
    analysis = ProgramAnalysis.from_json(jsonio.read_json(args.pdg, "analysis"))
    runs = jsonio.mr_runs_from_json(jsonio.read_json(args.profiles, "profiles"))
    if args.mrs:
        order = [m.id for m in jsonio.load_mrs(args.mrs)]
        by_id = {r.mr: r for r in runs}
        missing = [mr for mr in order if mr not in by_id]
        if missing:
            raise ConfigError(f"profiles have no runs for MRs {missing}")
        runs = [by_id[mr] for mr in order]
    scores = StatementCentrality().fit(analysis).transform(runs)
    _emit_json(jsonio.scores_to_json(analysis.program_digest, scores), args.emit)


def cmd_mutate(args):
    program = jsonio.load_program(args.file)
    mutants = generate_mutants(program, _operators(args.ops), args.full_aor)
    if args.screen_tests:
        suite = jsonio.load_suite(args.screen_tests)
        viable, screened = screen_mutants(mutants, suite, runner=Runner(args.step_limit))
        status = {m.id: m for m in viable + screened}
        mutants = [status[m.id] for m in mutants]
    _emit_json(jsonio.mutants_to_json(program.source_digest, mutants), args.emit)


def cmd_kill_matrix(args):
    program = jsonio.load_program(args.file)
    mrs = jsonio.load_mrs(args.mrs)
    suite = jsonio.load_suite(args.tests)
    role = args.role or (PRIORITIZING if suite.role.startswith("prioritizing") else VALIDATION)
    mutants = _load_mutants(program, args)
    km = build_kill_matrix(program, mutants, mrs, suite, role, Runner(args.step_limit))
    _emit_json(km.to_json(), args.emit)


def cmd_prioritize(args):
    strategy = STRATEGY_NAMES[args.strategy]

    def need(flag, value):
        if not value:
            raise ConfigError(f"--strategy {args.strategy} needs {flag}")
        return value

    if strategy == "centrality":
        doc = jsonio.read_json(need("--scores", args.scores), "scores")
        quality = {s["mr"]: Fraction(s["quality_exact"]) for s in doc["scores"]}
        orderings = [CentralityPrioritizer().fit(quality).ordering_]
    elif strategy == "fault_based":
        km = KillMatrix.from_json(jsonio.read_json(need("--kill-matrix", args.kill_matrix), "kill_matrix"))
        orderings = [FaultBasedPrioritizer().fit(km).ordering_]
    elif strategy == RANDOM:
        ids = [m.id for m in jsonio.load_mrs(need("--mrs", args.mrs))]
        orderings = RandomPrioritizer(args.count, args.seed).fit(ids).orderings_
    else:
        doc = jsonio.read_json(need("--profiles", args.profiles), "profiles")
        unit = "statement" if strategy == "stmt_coverage" else "branch"
        runs = jsonio.mr_runs_from_json(doc)
        orderings = [CoveragePrioritizer(unit, args.seed).fit(runs).ordering_]
    _emit_json(jsonio.orderings_to_json(orderings), args.emit)


def cmd_evaluate(args):
    orderings = jsonio.orderings_from_json(jsonio.read_json(args.ordering, "ordering"))
    km = KillMatrix.from_json(jsonio.read_json(args.kill_matrix, "kill_matrix"))
    thresholds = tuple(args.threshold or DEFAULT_THRESHOLDS)
    randoms = [o for o in orderings if o.strategy == RANDOM]
    reports = [evaluate_ordering(o, km, thresholds) for o in orderings if o.strategy != RANDOM]
    if randoms:
        reports.append(baseline_average(randoms, km, thresholds))
    if args.emit or args.format == "json":
        _emit_json(reports_to_json(reports), args.emit)
    if args.emit_csv:
        Path(args.emit_csv).write_text(curve_csv(reports[0]), encoding="utf-8", newline="\n")
    if args.format == "text":
        sys.stdout.write(format_table(reports))


def cmd_pipeline(args):
    if args.config:
        cfg = PipelineConfig.from_file(args.config)
    elif args.subject:
        try:
            cfg = PipelineConfig.from_file(corpus.config_path(args.subject))
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
    else:
        raise ConfigError("pipeline needs --config or --subject")
    changes = {}
    if args.seed is not None:
        changes.update(coverage_seed=args.seed, random_seed=args.seed)
    if args.threshold:
        changes["thresholds"] = tuple(args.threshold)
    if args.step_limit is not None:
        changes["step_limit"] = args.step_limit
    if changes:
        cfg = replace(cfg, **changes)
    result = run_pipeline(cfg, args.out)
    if args.format == "json":
        sys.stdout.write(jsonio.dumps(reports_to_json(result.reports)))
    else:
        sys.stdout.write(format_table(result.reports))


# -- argument parsing ------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(
        prog="metaprio", description="Metamorphic relation prioritization lab."
    )
    p.add_argument("-v", "--verbose", action="store_true", help="log stage progress")
    sub = p.add_subparsers(dest="command", required=True)

    def step_limit(sp, default=10**6):
        sp.add_argument("--step-limit", type=int, default=default, metavar="N")

    def mutant_ops(sp):
        sp.add_argument("--ops", default=",".join(OPERATORS), help="comma-separated operators")
        sp.add_argument("--full-aor", action="store_true", help="all arithmetic replacements")

    sp = sub.add_parser("analyze", help="emit CFG and PDG of a program")
    sp.add_argument("file")
    sp.add_argument("--emit", metavar="PATH")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("run", help="execute a test suite and emit profiles")
    sp.add_argument("file")
    sp.add_argument("--tests", required=True)
    sp.add_argument("--mrs", help="also run every MR and record its coverage")
    step_limit(sp)
    sp.add_argument("--emit", metavar="PATH")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("score", help="statement-centrality scores of MRs")
    sp.add_argument("--pdg", required=True, help="analysis JSON from 'analyze'")
    sp.add_argument("--profiles", required=True, help="profiles JSON from 'run --mrs'")
    sp.add_argument("--mrs")
    sp.add_argument("--emit", metavar="PATH")
    sp.set_defaults(func=cmd_score)

    sp = sub.add_parser("mutate", help="generate (and optionally screen) mutants")
    sp.add_argument("file")
    mutant_ops(sp)
    sp.add_argument("--screen-tests", metavar="TESTS", help="screen against this suite")
    step_limit(sp)
    sp.add_argument("--emit", metavar="PATH")
    sp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("kill-matrix", help="MR x mutant kill records")
    sp.add_argument("file")
    sp.add_argument("--mrs", required=True)
    sp.add_argument("--tests", required=True)
    sp.add_argument("--mutants", help="mutants JSON; screened-out entries are skipped")
    sp.add_argument("--role", choices=[PRIORITIZING, VALIDATION])
    mutant_ops(sp)
    step_limit(sp)
    sp.add_argument("--emit", metavar="PATH")
    sp.set_defaults(func=cmd_kill_matrix)

    sp = sub.add_parser("prioritize", help="order MRs with one strategy")
    sp.add_argument("--strategy", required=True, choices=sorted(STRATEGY_NAMES))
    sp.add_argument("--scores")
    sp.add_argument("--kill-matrix")
    sp.add_argument("--profiles")
    sp.add_argument("--mrs")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=100, help="random orderings")
    sp.add_argument("--emit", metavar="PATH")
    sp.set_defaults(func=cmd_prioritize)

    sp = sub.add_parser("evaluate", help="effectiveness, APFD and time to detect")
    sp.add_argument("--ordering", required=True)
    sp.add_argument("--kill-matrix", required=True)
    sp.add_argument("--threshold", type=float, action="append", metavar="PCT")
    sp.add_argument("--emit", metavar="PATH")
    sp.add_argument("--emit-csv", metavar="PATH")
    sp.add_argument("--format", choices=["json", "text"], default="json")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("pipeline", help="full validation run on one subject")
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--config")
    src.add_argument("--subject", help=f"bundled subject: {', '.join(corpus.SUBJECTS)}")
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--seed", type=int, help="override both tie-break and random seeds")
    sp.add_argument("--threshold", type=float, action="append", metavar="PCT")
    sp.add_argument("--step-limit", type=int, metavar="N")
    sp.add_argument("--format", choices=["json", "text"], default="text")
    sp.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except MetaprioError as exc:
        print(f"metaprio: error: {exc}", file=sys.stderr)
        return exit_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
