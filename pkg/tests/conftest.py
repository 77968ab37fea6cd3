from pathlib import Path

import pytest

from sketchlet import build_index, parse_vertical

ROOT = Path(__file__).resolve().parent.parent
TOY_PATH = ROOT / "corpora" / "toy.vert"

# two-branch pattern for noun uses of "amount": noun-noun compounds and
# "amount(s) of <noun>" partitives
AMOUNT_PATTERN = ('([tag="N.*"] [lemma="amount" & tag="N.*"])'
                  ' | ([lemma="amount" & tag="N.*"] [word="of"] [tag="N.*"])')


@pytest.fixture(scope="session")
def toy_text() -> str:
    return TOY_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def toy_corpus(toy_text):
    return parse_vertical(toy_text)


@pytest.fixture(scope="session")
def toy_cc(toy_corpus):
    # session-scoped: tests must not mutate it (no subcorpus creation)
    return build_index(toy_corpus)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    reports = []
    for key in ("passed", "failed"):
        reports.extend(r for r in terminalreporter.stats.get(key, [])
                       if r.when == "call")
    acceptance = [r for r in reports if "test_acceptance" in r.nodeid]
    if not acceptance:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for r in sorted(acceptance, key=lambda r: r.nodeid):
        status = "PASS" if r.passed else "FAIL"
        terminalreporter.write_line(
            "%s %s" % (status, r.nodeid.split("::")[-1]))
