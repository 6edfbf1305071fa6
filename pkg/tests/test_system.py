import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ltvcommute import LtvSystem, convolve, impulse_response, simulate, unit_sample, validate
from ltvcommute.system import (
    LeadingCoefficientZero, NonFiniteCoefficient, allclose, impulse_response_matrix,
    read_signal_csv, write_signal_csv, zero_input_response, zero_state_response,
)

from conftest import example1_a, example1_b_prime, random_system


def test_validate_example1_ok():
    table = validate(example1_a(), 50)
    assert table.shape == (2, 51)
    assert np.all(table[1] > 0)


def test_validate_leading_zero():
    with pytest.raises(LeadingCoefficientZero) as info:
        validate(LtvSystem.first_order("k", "1"), 1)
    assert info.value.k == 0


def test_validate_division_by_zero():
    with pytest.raises(NonFiniteCoefficient) as info:
        validate(LtvSystem.first_order("1/(k-3)", "1"), 5)
    assert (info.value.index, info.value.k) == (1, 3)


def test_initial_state_length_checked():
    with pytest.raises(ValueError):
        LtvSystem(("1", "1"), (1.0, 2.0))


def test_simulate_example1_first_step():
    # y(1) = (x(0) - a0(0) y(0)) / a1(0) = (1 - 1*2) / 1
    y = simulate(example1_a(2.0), unit_sample(0, 5), 5)
    assert y[0] == 2.0
    assert y[1] == -1.0
    # y(2) = (0 - a0(1) y(1)) / a1(1) = 4/e
    assert y[2] == pytest.approx(4 / math.e, rel=1e-15)


def test_simulate_zero():
    y = simulate(example1_a(0.0), np.zeros(20), 19)
    assert np.all(y == 0)


def test_simulate_static():
    y = simulate(LtvSystem.static("2"), np.full(6, 4.0), 5)
    assert y.tolist() == [2.0] * 6


def test_simulate_second_order_by_hand():
    # y(k+2) - y(k+1) - y(k) = 0 from (0, 1): Fibonacci
    fib = LtvSystem(("-1", "-1", "1"), (0.0, 1.0))
    y = simulate(fib, np.zeros(10), 9)
    assert y.tolist() == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]


def test_simulate_horizon_shorter_than_order():
    with pytest.raises(ValueError):
        simulate(LtvSystem(("1", "1", "1")), np.zeros(3), 1)


def test_simulate_only_uses_needed_coefficients():
    # a1 vanishes at k=5 but y(0..5) only needs a1(0..4)
    sys = LtvSystem.first_order("5-k", "1", 1.0)
    simulate(sys, np.zeros(6), 5)
    with pytest.raises(LeadingCoefficientZero):
        simulate(sys, np.zeros(7), 6)


def test_unit_sample():
    assert unit_sample(0, 2).tolist() == [1, 0, 0]
    assert unit_sample(2, 2).tolist() == [0, 0, 1]
    with pytest.raises(ValueError):
        unit_sample(3, 2)


def test_impulse_response_example1():
    A = example1_a(2.0)  # stored initial value is ignored
    h = impulse_response(A, 0, 2)
    assert h[0] == 0.0 and h[1] == 1.0
    assert h[2] == pytest.approx(-4 / math.e, rel=1e-15)
    hb = impulse_response(LtvSystem.first_order("2*exp(k)", "2*k^2+4*k+1", 2.0), 0, 1)
    assert hb[1] == 0.5


def test_convolve_sifting_and_zero():
    H = impulse_response_matrix(example1_b_prime(0.0), 10)
    assert convolve(H, unit_sample(4, 10), 10).tolist() == H[:, 4].tolist()
    assert np.all(convolve(H, np.zeros(11), 10) == 0)
    f = lambda k, l: H[k, l]  # noqa: E731
    assert convolve(f, unit_sample(2, 10), 10).tolist() == H[:, 2].tolist()


def test_convolution_equals_recursion(rng):
    B = example1_b_prime(0.0)
    K = 30
    x = rng.uniform(-1, 1, K + 1)
    H = impulse_response_matrix(B, K)
    assert allclose(convolve(H, x, K), simulate(B, x, K))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(seed, alpha, beta):
    rng = np.random.default_rng(seed)
    K = 30
    S = random_system(rng, 1, K).relaxed()
    x1, x2 = rng.uniform(-1, 1, (2, K + 1))
    lhs = simulate(S, alpha * x1 + beta * x2, K)
    rhs = alpha * simulate(S, x1, K) + beta * simulate(S, x2, K)
    assert allclose(lhs, rhs, rtol=1e-9, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3]))
def test_zero_state_plus_zero_input(seed, order):
    rng = np.random.default_rng(seed)
    K = 25
    S = random_system(rng, order, K)
    x = rng.uniform(-1, 1, K + 1)
    full = simulate(S, x, K)
    parts = zero_state_response(S, x, K) + zero_input_response(S, K)
    assert allclose(full, parts, rtol=1e-9, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0, 1, 2]), st.integers(0, 15))
def test_causality(seed, order, m):
    rng = np.random.default_rng(seed)
    K = 20
    S = random_system(rng, order, K)
    x = rng.uniform(-1, 1, K + 1)
    x2 = x.copy()
    x2[m + 1:] = rng.uniform(-5, 5, K - m)
    y, y2 = simulate(S, x, K), simulate(S, x2, K)
    upto = min(K, m + order)
    assert y[: upto + 1].tolist() == y2[: upto + 1].tolist()


def test_free_response_control(rng):
    S = random_system(rng, 2, 10)
    table = validate(S, 10)
    x = rng.uniform(-1, 1, 11)
    y = simulate(S, x, 10)
    k, target = 3, 7.25
    # choose x(k) so that y(k+2) hits the target
    x[k] = target * table[2, k] + table[0, k] * y[k] + table[1, k] * y[k + 1]
    assert simulate(S, x, 10)[k + 2] == pytest.approx(target, rel=1e-12)


def test_csv_round_trip(tmp_path):
    y = simulate(example1_a(2.0), unit_sample(0, 30), 30)
    path = tmp_path / "y.csv"
    write_signal_csv(path, y)
    lines = path.read_text().splitlines()
    assert lines[0] == "k,value"
    assert lines[1] == "0,2"
    assert read_signal_csv(path).tolist() == y.tolist()


def test_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,y\n0,1\n")
    with pytest.raises(ValueError):
        read_signal_csv(path)
