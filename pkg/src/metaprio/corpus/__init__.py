"""Bundled subject programs, each with an MR catalog and two test suites."""

from pathlib import Path

ROOT = Path(__file__).resolve().parent
SUBJECTS = ("sum", "range", "interp", "sort")


def subject_dir(name) -> Path:
    if name not in SUBJECTS:
        raise KeyError(f"no bundled subject {name!r}; choose from {', '.join(SUBJECTS)}")
    return ROOT / name


def config_path(name) -> Path:
    return subject_dir(name) / "config.json"


def program_path(name) -> Path:
    return subject_dir(name) / f"{name}.mini"
