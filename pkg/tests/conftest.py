import time

import numpy as np
import pytest

from intreg import Coefficients, Interval, IntervalSample, Qp, simulate

SESSION_T0 = time.monotonic()


def pytest_collection_modifyitems(session, config, items):
    # the acceptance module measures whole-suite wall clock, so it runs last
    acceptance = [it for it in items if "test_acceptance" in it.nodeid]
    rest = [it for it in items if "test_acceptance" not in it.nodeid]
    items[:] = rest + acceptance


def exact_fit_sample(n=6, slope=2.0):
    """k=1 sample with y exactly slope * x (midpoints and spreads alike)."""
    endpoints = [(0, 2), (1, 4), (2, 3), (3, 7), (5, 6), (0, 9), (2, 8), (1, 9)][:n]
    x = [[Interval.from_endpoints(a, b)] for a, b in endpoints]
    y = [Interval(slope * row[0].mid, slope * row[0].spr) for row in x]
    return IntervalSample.from_intervals(y, x)


def random_coefficients(rng, k, delta=None):
    if delta is None:
        delta = Interval(rng.uniform(-1, 1), rng.uniform(0, 1))
    return Coefficients(
        b1=rng.uniform(-2, 2, k),
        b2=rng.uniform(0, 2, k),
        b3=rng.uniform(0, 2, k),
        b4=rng.uniform(-2, 2, k),
        delta=delta,
    )


def random_sample(seed, n=30, k=2, noise=0.4):
    rng = np.random.default_rng(seed)
    b_true = random_coefficients(rng, k)
    return simulate(n, k, b_true, noise=noise, seed=seed + 1000)


def random_feasible_qp(rng, m, p):
    """SPD quadratic with a feasible inequality system."""
    A = rng.normal(size=(m + 2, m))
    Q = A.T @ A + 0.5 * np.eye(m)
    c = rng.normal(size=m)
    R = rng.normal(size=(p, m))
    z0 = rng.normal(size=m)
    r = R @ z0 - rng.uniform(0.1, 1.0, p)
    return Qp(Q, c, R, r)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
