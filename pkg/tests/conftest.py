import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from plgroups import GroupSpec, Interval, PLMap, Rat, as_rat
from plgroups.wreath import bump_on

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

A_NODES = [(0, 0), ("1/2", "1/4"), ("3/4", "1/2"), (1, 1)]
X1_NODES = [(0, 0), ("1/2", "1/2"), ("3/4", "5/8"), ("7/8", "3/4"), (1, 1)]


q = as_rat


def bump(a, b):
    return bump_on(Interval(q(a), q(b)))


def iv(a, b):
    return Interval(q(a), q(b))


@pytest.fixture
def A():
    return PLMap(A_NODES)


@pytest.fixture
def x1():
    return PLMap(X1_NODES)


@pytest.fixture
def F(A, x1):
    return GroupSpec([("x0", A), ("x1", x1)])


def _strict_points(draw, k, den):
    pts = draw(st.lists(st.integers(1, den - 1), min_size=k, max_size=k, unique=True))
    return sorted(Rat(p, den) for p in pts)


@st.composite
def dyadic_maps(draw, max_nodes=12, den_exp=6):
    """Random PL maps with at most ``max_nodes`` nodes, all coordinates k/2^den_exp."""
    den = 2 ** den_exp
    k = draw(st.integers(0, max_nodes - 2))
    xs = _strict_points(draw, k, den)
    ys = _strict_points(draw, k, den)
    return PLMap([(0, 0)] + list(zip(xs, ys)) + [(1, 1)])


@st.composite
def dyadic_points(draw, den_exp=8):
    return Rat(draw(st.integers(0, 2 ** den_exp)), 2 ** den_exp)


def random_map(rng, max_nodes=12, den_exp=6):
    den = 2 ** den_exp
    k = rng.randint(0, max_nodes - 2)
    xs = sorted(Rat(p, den) for p in rng.sample(range(1, den), k))
    ys = sorted(Rat(p, den) for p in rng.sample(range(1, den), k))
    return PLMap([(0, 0)] + list(zip(xs, ys)) + [(1, 1)])


def random_bump(rng, lo=0, hi=1, den_exp=5):
    den = 2 ** den_exp
    a, b = sorted(rng.sample(range(int(lo * den), int(hi * den) + 1), 2))
    f = bump_on(Interval(Rat(a, den), Rat(b, den)))
    return f if rng.random() < 0.5 else f.inverse()


# -- acceptance summary ------------------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[name] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        outcome, secs = _ACCEPTANCE[name]
        num = int(name.split("_")[2])
        label = " ".join(name.split("_")[3:])
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {verdict}  {label}  ({secs:.1f}s)")
