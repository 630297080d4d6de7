"""Shared fixtures and the acceptance-criteria reporting hook."""

from __future__ import annotations

import contextlib
import shutil
from pathlib import Path

import pytest

from aspkit import encodings
from aspkit.refeval import answer_sets, ground_program
from aspkit.syntax import parse_program

FIXTURE_DIR = Path(__file__).parent / "fixtures"

# One "criterion: PASS/FAIL" line per acceptance criterion, printed in the
# terminal summary of every run that touched test_acceptance.py.
ACCEPTANCE_LINES: list[str] = []


@contextlib.contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except BaseException:
        ACCEPTANCE_LINES.append(f"criterion {number:2d}: FAIL - {description}")
        raise
    ACCEPTANCE_LINES.append(f"criterion {number:2d}: PASS - {description}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def external_clingo() -> str | None:
    return shutil.which("clingo")


@pytest.fixture(scope="session")
def solved_corpus():
    """Answer sets of every desk-scale bundled example, solved once."""
    texts = {
        "3col-k3": encodings.THREE_COL_K3,
        "3col-k3-isolated": encodings.THREE_COL_K3_ISOLATED,
        "3col-k4": encodings.THREE_COL_K4,
        "ramsey-n3": encodings.RAMSEY_N3,
        "sudoku-toy": encodings.SUDOKU_TOY,
        "sudoku-toy-given": encodings.SUDOKU_TOY_GIVEN,
        "dlvfit": encodings.DLVFIT_FRAGMENT,
    }
    out = {}
    for name, text in texts.items():
        program = parse_program(text)
        out[name] = (program, ground_program(program), answer_sets(program))
    return out
