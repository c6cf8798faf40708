import pytest

from crunchfx import MarketParams, OptionSpec

# reference contract used throughout: 0.75y, K=2.3, S=2.2
REF = dict(spot=2.2, sigma=0.25, rd=0.015, rf=0.01)
REF_STRIKE = 2.3
REF_MATURITY = 0.75

# trajectory inputs: S=7, sigma=5%, rate differential 2%, dt=0.001
TRAJ = dict(spot=7.0, sigma=0.05, rd=0.02, rf=0.0)


@pytest.fixture
def ref_params():
    def make(beta=0.5, **kw):
        return MarketParams(**{**REF, "beta": beta, **kw})

    return make


@pytest.fixture
def ref_spec():
    def make(side="call", **kw):
        return OptionSpec(**{"strike": REF_STRIKE, "maturity": REF_MATURITY, "side": side, **kw})

    return make


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))
    elif report.when == "setup" and report.outcome != "passed" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
