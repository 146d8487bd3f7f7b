import os
import sys
from pathlib import Path

import pytest

from metaprio import corpus
from metaprio.jsonio import load_mrs, load_suite
from metaprio.minilang import parse

TESTS = Path(__file__).resolve().parent
FIXTURES = TESTS / "fixtures"
GOLDENS = TESTS / "goldens"
UPDATE_GOLDENS = os.environ.get("METAPRIO_UPDATE_GOLDENS") == "1"

sys.path.insert(0, str(TESTS))

P0_SOURCE = (FIXTURES / "p0.mini").read_text()

# filled by test_acceptance, printed once at the end of the session
ACCEPTANCE = {}


def fixture_programs():
    """Every bundled program: test fixtures plus corpus subjects."""
    out = {p.stem: parse(p.read_text()) for p in sorted(FIXTURES.glob("*.mini"))}
    for name in corpus.SUBJECTS:
        out[f"corpus/{name}"] = parse(corpus.program_path(name).read_text())
    return out


def load_subject(name):
    d = corpus.subject_dir(name)
    return (
        parse(corpus.program_path(name).read_text()),
        load_mrs(d / "mrs.json"),
        load_suite(d / "tests_prioritizing.json"),
        load_suite(d / "tests_validation.json"),
    )


def check_golden(subject, out_dir):
    """Compare summary.txt and reports.json with the frozen copies; rewrite them on request."""
    golden = GOLDENS / subject
    if UPDATE_GOLDENS:
        golden.mkdir(parents=True, exist_ok=True)
    mismatched = []
    for name in ("summary.txt", "reports.json"):
        got = (out_dir / name).read_text()
        if UPDATE_GOLDENS:
            (golden / name).write_text(got, newline="\n")
        elif (golden / name).read_text() != got:
            mismatched.append(name)
    return mismatched


@pytest.fixture
def p0():
    return parse(P0_SOURCE)


@pytest.fixture
def straight():
    return parse((FIXTURES / "straight.mini").read_text())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key} {title}: {detail}")
