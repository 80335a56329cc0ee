import math

import pytest
from hypothesis import settings, strategies as st

from shiftlab.cover import ChargeVector, FunctorWord, GeneratorLetter, LiftedRay
from shiftlab.model import DObject, atom

settings.register_profile("repro", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repro")

_CRITERIA: dict[int, list] = {}
_NOTES: dict[int, list[str]] = {}


def primitive(a, b):
    return (a, b) != (0, 0) and math.gcd(a, b) == 1


letters = st.sampled_from(list(GeneratorLetter))
words = st.lists(letters, max_size=12).map(FunctorWord)
rays = st.builds(
    lambda ab, m: LiftedRay(ab[0], ab[1], m),
    st.tuples(st.integers(-40, 40), st.integers(-40, 40)).filter(lambda t: primitive(*t)),
    st.integers(-6, 6),
)
sheaf_classes = st.tuples(st.integers(0, 12), st.integers(-25, 25)).filter(
    lambda t: primitive(*t) and ChargeVector(*t).in_sheaf_cone
)
atoms = st.builds(
    lambda c, k, tag, mult: atom(c[0], c[1], tag, k, mult),
    sheaf_classes,
    st.integers(-4, 4),
    st.sampled_from(["p", "q", "r"]),
    st.integers(1, 3),
)
objects = st.lists(atoms, min_size=1, max_size=5).map(DObject)


@pytest.fixture
def note():
    """``note(n, text)`` attaches an empirical value to criterion ``n``'s summary line."""
    def add(num, text):
        _NOTES.setdefault(num, []).append(text)
    return add


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and rep.when == "call":
        num, text = marker.args
        _CRITERIA.setdefault(num, [text, True])
        _CRITERIA[num][1] &= rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_CRITERIA):
        text, ok = _CRITERIA[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num}. {text}")
        for extra in _NOTES.get(num, []):
            terminalreporter.write_line(f"       {extra}")
