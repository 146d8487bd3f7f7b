"""Metamorphic-relation prioritization by statement centrality.

Typical use::

    from metaprio import parse, run_mr, StatementCentrality, CentralityPrioritizer

    program = parse(source)
    runs = [run_mr(program, mr, suite) for mr in mrs]
    scores = StatementCentrality().fit(program).transform(runs)
    order = CentralityPrioritizer().fit(scores).ordering_
"""

from .centrality import ScoreBreakdown, StatementCentrality, mr_quality_score
from .dependence import ProgramAnalysis, analyze_program, backward_slice, forward_slice
from .evaluate import (
    EvaluationReport,
    apfd,
    avg_time_to_detect,
    baseline_average,
    effective_set_size,
    effectiveness_curve,
    evaluate_ordering,
)
from .execution import ExecutionProfile, execute
from .minilang import parse, pretty_print
from .mt import MrRunResult, MrSpec, Runner, TestCase, TestSuite, run_mr
from .mutation import KillMatrix, Mutant, build_kill_matrix, generate_mutants, screen_mutants
from .pipeline import PipelineConfig, run_pipeline
from .prioritize import (
    CentralityPrioritizer,
    CoveragePrioritizer,
    FaultBasedPrioritizer,
    Ordering,
    RandomPrioritizer,
)

__version__ = "0.1.0"

__all__ = [
    "CentralityPrioritizer",
    "CoveragePrioritizer",
    "EvaluationReport",
    "ExecutionProfile",
    "FaultBasedPrioritizer",
    "KillMatrix",
    "MrRunResult",
    "MrSpec",
    "Mutant",
    "Ordering",
    "PipelineConfig",
    "ProgramAnalysis",
    "RandomPrioritizer",
    "Runner",
    "ScoreBreakdown",
    "StatementCentrality",
    "TestCase",
    "TestSuite",
    "analyze_program",
    "apfd",
    "avg_time_to_detect",
    "backward_slice",
    "baseline_average",
    "build_kill_matrix",
    "effective_set_size",
    "effectiveness_curve",
    "evaluate_ordering",
    "execute",
    "forward_slice",
    "generate_mutants",
    "mr_quality_score",
    "parse",
    "pretty_print",
    "run_mr",
    "run_pipeline",
    "screen_mutants",
]
