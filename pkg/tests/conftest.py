import numpy as np
import pytest

from healthinvest.params import Stage1Params, Stage2Params, Stage3Params


@pytest.fixture
def p1():
    return Stage1Params(phi=1.0, alpha=0.5, gamma=0.4, p=0.2, c_hat=0.5, mu=0.05, kappa=0.5)


@pytest.fixture
def p2():
    return Stage2Params(phi=1.0, alpha=0.5, beta=0.5, gamma=0.4, p=0.2, lambda_fixed=1.0,
                        delta0=0.3, delta1=0.4, delta_min=0.05, delta_max=0.95)


@pytest.fixture
def p3():
    return Stage3Params(A=7.389, alpha=0.5, gamma=0.5, p=0.25)


def draw_stage1(rng, with_threshold=False):
    """Random admissible stage-1 parameters plus (lam, a)."""
    gamma = rng.uniform(0.2, 0.8)
    p_hi = 0.9 * gamma if with_threshold else 0.9
    p = Stage1Params(
        phi=rng.uniform(0.5, 2.0),
        alpha=rng.uniform(0.1, 0.9),
        gamma=gamma,
        p=rng.uniform(0.05, p_hi),
        c_hat=rng.uniform(0.1, 1.0),
        mu=0.05,
        kappa=0.5,
    )
    lam = rng.uniform(0.5, 3.0)
    a = rng.uniform(0.0, 0.95) * p.phi * lam
    return p, lam, a


def draw_stage2(rng):
    return Stage2Params(
        phi=rng.uniform(0.5, 2.0),
        alpha=rng.uniform(0.2, 0.8),
        beta=rng.uniform(0.2, 0.8),
        gamma=rng.uniform(0.2, 0.8),
        p=rng.uniform(0.1, 0.5),
        lambda_fixed=rng.uniform(0.5, 2.0),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one verdict line per acceptance criterion, printed after the run
VERDICTS = []


@pytest.fixture
def verdict():
    def record(number, status, detail):
        line = f"criterion {number}: {status} - {detail}"
        VERDICTS.append(line)
        print(line)
        return status

    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
