from pathlib import Path

import pytest

from khtl.compile import BraidWord

DATA = Path(__file__).parent / "data"


def load_corpus():
    out = []
    for line in (DATA / "braids.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        strands, word, name = (x.strip() for x in line.split("|"))
        out.append((name, BraidWord.parse(word, int(strands))))
    return out


CORPUS = load_corpus()


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
