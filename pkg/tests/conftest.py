import numpy as np
import pytest

from ltvcommute import LtvSystem
from ltvcommute.coeffexpr import Tabulated


def example1_a(y0=2.0):
    return LtvSystem.first_order("exp(k)", "(k+1)^2", y0, "A")


def example1_b(y0=2.0):
    return LtvSystem.first_order("2*exp(k)", "2*k^2 + 4*k + 1", y0, "B")


def example1_b_prime(y0=2.0):
    return LtvSystem.first_order("2*exp(k)", "2*k^2 + 4*k + 3", y0, "B")


def example2_a():
    return LtvSystem.first_order("10", "9 + 3*sin(0.1*pi*k)", 0.0, "A")


def example2_b():
    return LtvSystem.first_order("30", "8 + 9*sin(0.1*pi*k)", 0.0, "B")


def random_poly(rng, lead_min=0.5):
    deg = int(rng.integers(0, 3))
    c = rng.uniform(-2, 2, deg + 1)
    while abs(c[0]) < lead_min:
        c[0] = rng.uniform(-2, 2)
    return c


def random_table(rng, H, nonzero=False):
    k = np.arange(H + 1)
    while True:
        v = np.polyval(random_poly(rng), k)
        if not nonzero or np.min(np.abs(v)) >= 0.1:
            return v


def random_system(rng, order, H, label="S", state=None):
    """Order-``order`` system with polynomial coefficients tabulated on [0, H]."""
    coeffs = [random_table(rng, H) for _ in range(order)]
    coeffs.append(random_table(rng, H, nonzero=True))
    if state is None:
        state = rng.uniform(-2, 2, order)
    return LtvSystem(tuple(Tabulated(c) for c in coeffs), tuple(state), label)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
