import numpy as np
import pytest

from minsurf.autodiff import Jet
from minsurf.surfaces import Linear, LogSinh, NutkuArctan, Zero, time_shift


def random_jet(rng, order=3, scale=1.0, base=None):
    n = (order + 1) * (order + 2) // 2
    c = rng.uniform(-scale, scale, n)
    if base is not None:
        c[0] = base
    return Jet(c, order)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def all_families():
    return [Zero(), Linear(0.3, -0.7), NutkuArctan(1.0), NutkuArctan(-2.5), LogSinh(1.0), LogSinh(0.4),
            time_shift(NutkuArctan(1.0), 3.0), time_shift(LogSinh(1.0), 3.0)]


def in_domain_points(rng, n, t=(0.5, 2.0), x=(-2.0, 2.0)):
    return list(zip(rng.uniform(*t, n), rng.uniform(*x, n)))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
