import json
import shutil
from dataclasses import replace

import pytest

from conftest import check_golden
from metaprio import corpus, jsonio
from metaprio.errors import ConfigError, DisjointnessError
from metaprio.pipeline import PipelineConfig, StageError, run_pipeline

KINDS = {
    "analysis.json": "analysis",
    "profiles.json": "profiles",
    "scores.json": "scores",
    "mutants.json": "mutants",
    "km_prioritizing.json": "kill_matrix",
    "km_validation.json": "kill_matrix",
    "orderings.json": "ordering",
    "reports.json": "report",
}


def copy_subject(name, tmp_path):
    for f in corpus.subject_dir(name).iterdir():
        shutil.copy(f, tmp_path)
    return tmp_path / "config.json"


def edit_json(path, fn):
    doc = json.loads(path.read_text())
    fn(doc)
    path.write_text(json.dumps(doc))


@pytest.mark.parametrize("subject", corpus.SUBJECTS)
def test_subject_artifacts_and_goldens(subject, tmp_path):
    result = run_pipeline(PipelineConfig.from_file(corpus.config_path(subject)), tmp_path)
    for name, kind in KINDS.items():
        jsonio.validate(json.loads((tmp_path / name).read_text()), kind, name)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    for name, digest in manifest["files"].items():
        assert jsonio.sha256((tmp_path / name).read_bytes()) == digest
    assert sorted(p.name for p in (tmp_path / "curves").iterdir()) == sorted(
        f"{r.strategy}.csv" for r in result.reports
    )
    assert check_golden(subject, tmp_path) == []


def test_sum_summary_shape(tmp_path):
    run_pipeline(PipelineConfig.from_file(corpus.config_path("sum")), tmp_path)
    rows = (tmp_path / "summary.txt").read_text().splitlines()[2:]
    assert [r.split()[0] for r in rows] == [
        "centrality", "fault_based", "stmt_coverage", "branch_coverage", "random",
    ]
    assert all(float(r.split()[-1]) == 100.0 for r in rows)


def test_overlapping_suites_rejected(tmp_path):
    cfg = copy_subject("sum", tmp_path)
    pri = json.loads((tmp_path / "tests_prioritizing.json").read_text())
    edit_json(tmp_path / "tests_validation.json",
              lambda d: d["cases"][0].update(id=pri["cases"][0]["id"]))
    with pytest.raises(StageError) as exc:
        run_pipeline(PipelineConfig.from_file(cfg))
    assert exc.value.stage == "config" and isinstance(exc.value.cause, DisjointnessError)


def test_empty_mr_list_rejected(tmp_path):
    cfg = copy_subject("sum", tmp_path)
    (tmp_path / "mrs.json").write_text("[]")
    with pytest.raises(StageError) as exc:
        run_pipeline(PipelineConfig.from_file(cfg))
    assert isinstance(exc.value.cause, ConfigError)


def test_swapped_suite_roles_rejected(tmp_path):
    cfg = copy_subject("sum", tmp_path)
    edit_json(tmp_path / "config.json", lambda d: d.update(
        prioritizing_tests="tests_validation.json", validation_tests="tests_prioritizing.json"))
    with pytest.raises(StageError):
        run_pipeline(PipelineConfig.from_file(cfg))


def test_unknown_config_key_rejected(tmp_path):
    cfg = copy_subject("sum", tmp_path)
    edit_json(cfg, lambda d: d.update(colour="blue"))
    with pytest.raises(ConfigError):
        PipelineConfig.from_file(cfg)


def test_seed_changes_only_seeded_strategies():
    cfg = PipelineConfig.from_file(corpus.config_path("sum"))
    a = run_pipeline(cfg)
    b = run_pipeline(replace(cfg, random_seed=99))
    assert a.report("centrality") == b.report("centrality")
    assert a.report("fault_based") == b.report("fault_based")
    assert [o.sequence for o in a.random_orderings] != [o.sequence for o in b.random_orderings]


def test_config_echo_is_location_free():
    cfg = PipelineConfig.from_file(corpus.config_path("sum"))
    doc = cfg.to_json()
    jsonio.validate(doc, "config", "echo")
    assert doc["subject"] == "sum.mini"
