import pytest

from almostlocal import gff as G
from almostlocal import perm as P

_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def pairs():
    """Group pairs shared across test modules, built once."""
    specs = {
        "d4": ("dihedral(4)", "sym(4)"),
        "c4": ("cyclic(4)", "sym(4)"),
        "a4": ("alt(4)", "sym(4)"),
        "c5a": ("cyclic(5)", "agl(1,5)"),
        "c5alt": ("cyclic(5)", "alt(5)"),
        "d5": ("agl_sq(1,5)", "agl(1,5)"),
        "a5": ("alt(5)", "sym(5)"),
    }
    return {k: G.GroupPair.from_specs(*v) for k, v in specs.items()}


@pytest.fixture(scope="session")
def alt4():
    return P.construct_group("alt(4)")


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _ACCEPTANCE[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  {name}")
