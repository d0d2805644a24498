import random

import pytest

from sbdet.fields import tower_make
from sbdet.severi import context_make


@pytest.fixture(scope="session")
def qw():
    """Q(omega) with no variables and no layers."""
    return tower_make([], [])


@pytest.fixture(scope="session")
def t_tower():
    return tower_make(["u", "v"], [("t", "u")])


@pytest.fixture(scope="session")
def ts_tower():
    return tower_make(["u", "w"], [("t", "u"), ("s", "w")])


@pytest.fixture(scope="session")
def ctx_v(t_tower):
    return context_make(t_tower, "v")


@pytest.fixture(scope="session")
def ctx_uw(ts_tower):
    return context_make(ts_tower, "u*w^2")


@pytest.fixture
def rng():
    return random.Random(12345)


def nonzero_vector(rng, lo=-3, hi=3):
    while True:
        v = [rng.randint(lo, hi) for _ in range(3)]
        if all(v):
            return v


def small_element(T, rng, coeff=3, density=0.35):
    """Integer combination of the monomials t^i s^j, not fixed by g."""
    from sbdet.fields import G

    while True:
        x = T.zero()
        for i in range(T.nt):
            for j in range(T.ns):
                if (i, j) == (0, 0) or rng.random() < density:
                    x = x + rng.randint(-coeff, coeff) * T.monomial(i, j)
        if not x.is_zero() and not x.is_fixed_by(G):
            return x


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
