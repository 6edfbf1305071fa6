import numpy as np
import pytest

from ltvcommute import LtvSystem
from ltvcommute.coeffexpr import Tabulated
from ltvcommute.system import zero_input_response
from ltvcommute.equivalence import (
    coefficients_close, equivalent, simulated_equivalent, zero_input_scalar_multiple,
    zero_state_equivalent,
)

from conftest import example1_a, random_system


def tables_of(S, K):
    return [np.array(c.tabulate(K)) for c in S.coeffs]


def perturbed(S, K, i, k, delta=1.0, state=None):
    tabs = tables_of(S, K)
    tabs[i][k] += delta
    return LtvSystem(tuple(Tabulated(t) for t in tabs), S.initial_state if state is None else state)


def tabulated(S, K):
    return LtvSystem(tuple(Tabulated(t) for t in tables_of(S, K)), S.initial_state)


def counterexample_pair():
    # a0(0) = a0bar(0) = 0 kills the free response after one step in both systems
    S1 = LtvSystem.first_order("exp(k)", "k", 1.5)
    S2 = LtvSystem.first_order("2 + k", "k^2 - 3*k", 1.5)
    return S1, S2


def test_coefficients_close_policy():
    assert coefficients_close(1.0, 1.0 + 5e-10)
    assert not coefficients_close(1.0, 1.0 + 2e-9)
    assert coefficients_close(1e6, 1e6 * (1 + 5e-10))
    assert coefficients_close(0.0, 5e-10)  # floor of 1 in the scale


def test_zero_state_identity_and_exemption():
    S1 = tabulated(example1_a(), 10)
    assert zero_state_equivalent(S1, S1, 10)
    S2 = perturbed(S1, 10, 0, 0, 7.0)
    assert zero_state_equivalent(S1, S2, 10).verdict
    rep = equivalent(S1, S2, 10)
    assert not rep and (rep.first_violation.index, rep.first_violation.k) == (0, 0)


def test_zero_state_injected_defect():
    S1 = tabulated(example1_a(), 10)
    rep = zero_state_equivalent(S1, perturbed(S1, 10, 1, 3), 10)
    assert not rep.verdict
    v = rep.first_violation
    assert (v.index, v.k) == (1, 3)
    assert v.lhs == pytest.approx(np.exp(3) + 1.0)


def test_first_violation_tie_break():
    S1 = tabulated(example1_a(), 10)
    S2 = perturbed(perturbed(S1, 10, 1, 4), 10, 0, 4)
    v = equivalent(S1, S2, 10).first_violation
    assert (v.index, v.k) == (0, 4)


def test_order_mismatch():
    with pytest.raises(ValueError):
        equivalent(example1_a(), LtvSystem.static("1"), 5)


def test_uniform_scaling():
    S1 = example1_a()
    S3 = LtvSystem.first_order("3*exp(k)", "3*(k+1)^2", 2.0)
    rep = zero_input_scalar_multiple(S1, S3, 20)
    assert rep.verdict and rep.mode == "zero-input-scaling"
    assert np.allclose(rep.alphas, 3.0, rtol=1e-15)
    same = zero_input_scalar_multiple(S1, S1, 20)
    assert same.verdict and set(same.alphas) == {1.0}


def test_counterexample_pinned():
    S1, S2 = counterexample_pair()
    rep = zero_input_scalar_multiple(S1, S2, 30)
    assert not rep.verdict
    assert "not decided" in rep.note
    assert simulated_equivalent(S1, S2, 20, 30, mode="zero-input").verdict
    # both free responses are (y0, 0, 0, ...)
    y = zero_input_response(S1, 10)
    assert y[0] == 1.5 and np.all(y[1:] == 0)
    assert zero_input_response(S2, 10).tolist() == y.tolist()


def test_equivalent_initial_states():
    S = example1_a(2.0)
    assert equivalent(S, S, 10)
    rep = equivalent(S, example1_a(1.0), 10)
    assert not rep and rep.first_violation.index == -1


def test_simulated_identical_and_defect():
    S = example1_a()
    assert simulated_equivalent(S, S, 50, 20).verdict
    bad = perturbed(tabulated(S, 22), 22, 0, 5, 0.5)
    rep = simulated_equivalent(S, bad, 10, 20)
    assert not rep.verdict
    # a0(5) first enters y(6)
    assert rep.first_violation.k == 6


def test_simulated_is_deterministic():
    S1, S2 = random_system(np.random.default_rng(1), 1, 22), random_system(np.random.default_rng(2), 1, 22)
    a = simulated_equivalent(S1, S2, 5, 20, seed=3)
    b = simulated_equivalent(S1, S2, 5, 20, seed=3)
    assert a == b


def test_simulated_rejects_bad_mode():
    with pytest.raises(ValueError):
        simulated_equivalent(example1_a(), example1_a(), 1, 5, mode="other")
    with pytest.raises(ValueError):
        simulated_equivalent(example1_a(), example1_a(), 0, 5)


def random_pair(seed, K):
    """Random S1 and a copy that is equal, perturbed in a coefficient (possibly in
    the exemption zone), or given a different initial state."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 3))
    S1 = random_system(rng, n, K + n)
    kind = rng.integers(0, 4)
    if kind == 0:
        return S1, tabulated(S1, K + n)
    if kind == 1:
        i = int(rng.integers(0, n))
        return S1, perturbed(S1, K + n, i, int(rng.integers(0, n - i)), rng.uniform(0.5, 2))
    if kind == 2:
        i = int(rng.integers(0, n + 1))
        k = int(rng.integers(n - i, K + 1))
        return S1, perturbed(S1, K + n, i, k, rng.uniform(0.5, 2))
    return S1, LtvSystem(S1.coeffs, tuple(rng.uniform(-2, 2, n)))


@pytest.mark.parametrize("seed", range(100))
def test_lemma_soundness(seed):
    K = 40
    S1, S2 = random_pair(seed, K)
    zs = zero_state_equivalent(S1, S2, K).verdict
    assert zs == simulated_equivalent(S1, S2, 50, K, seed=seed, mode="zero-state").verdict
    full = equivalent(S1, S2, K).verdict
    assert full == simulated_equivalent(S1, S2, 50, K, seed=seed).verdict
    # equivalence implies zero-state equivalence
    assert not full or zs
    if zero_input_scalar_multiple(S1, S2, K).verdict:
        assert simulated_equivalent(S1, S2, 20, K, seed=seed, mode="zero-input").verdict
