import os

from hypothesis import HealthCheck, settings, strategies as st

from homlaws.structures import Digraph

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def digraphs(draw, min_n=0, max_n=5, loops=True, oriented=False):
    n = draw(st.integers(min_n, max_n))
    if oriented:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        states = draw(st.lists(st.integers(0, 2), min_size=len(pairs), max_size=len(pairs)))
        edges = [(u, v) if s == 1 else (v, u) for (u, v), s in zip(pairs, states) if s]
        return Digraph(n, frozenset(edges))
    pairs = [(u, v) for u in range(n) for v in range(n) if loops or u != v]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Digraph(n, frozenset(p for p, c in zip(pairs, chosen) if c))


# ---------------------------------------------------- acceptance summary

_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _criteria[value] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for title in sorted(_criteria, key=lambda t: int(t.split(".")[0])):
        verdict = "PASS" if _criteria[title] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {title}")
