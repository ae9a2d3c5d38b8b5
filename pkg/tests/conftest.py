import hypothesis.strategies as st
import pytest

from braidbrick.braid import BraidWord


@st.composite
def braid_words(draw, min_n=2, max_n=5, max_len=12, min_len=0):
    n = draw(st.integers(min_n, max_n))
    letters = draw(st.lists(st.integers(1, n - 1), min_size=min_len, max_size=max_len))
    return BraidWord(n, tuple(letters))


@pytest.fixture
def word():
    def make(letters, n=None):
        letters = tuple(letters)
        return BraidWord(n if n is not None else max(2, max(letters, default=0) + 1), letters)

    return make


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
