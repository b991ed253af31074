"""Shared fixtures.  The two expensive runs (the graded bump demonstration and
the witness verification) are session-scoped so the acceptance tests and the
unit tests share one execution each."""

import pytest

from fowlerlab.experiments import instability_demo, make_witness, verify_witness

# acceptance criterion verdicts, filled by tests/test_acceptance.py and
# rendered as one line per criterion at the end of the run
CRITERIA = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in CRITERIA:
        tag = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{tag}] {name}: {detail}")


@pytest.fixture(scope="session")
def witness():
    return make_witness()


@pytest.fixture(scope="session")
def witness_report(witness):
    return verify_witness(witness)


@pytest.fixture(scope="session")
def demo_report():
    # ~20 s: the full default demonstration (main run + spectral twin +
    # refinement + zero control + cross-scheme gaps)
    return instability_demo()
