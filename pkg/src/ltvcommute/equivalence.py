"""Zero-state, zero-input and full equivalence of same-order systems.

The analytic checks compare coefficient tables; ``simulated_equivalent``
is the independent oracle that just runs both systems on random inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .system import ATOL, RTOL, LtvSystem, first_mismatch, simulate, validate

__all__ = [
    "Violation", "EquivalenceReport", "coefficients_close",
    "zero_state_equivalent", "zero_input_scalar_multiple", "equivalent",
    "simulated_equivalent",
]

STRICT = (0.0, 0.0)


@dataclass(frozen=True)
class Violation:
    index: int  # coefficient index, or -1 for an initial sample / simulated output
    k: int
    lhs: float
    rhs: float


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: bool
    mode: str
    first_violation: Optional[Violation] = None
    alphas: Optional[tuple] = None
    note: str = ""

    def __bool__(self):
        return self.verdict


def coefficients_close(a, b, rtol=RTOL, atol=ATOL):
    """Elementwise ``|a-b| <= max(atol, rtol*max(1, |a|, |b|))``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return np.abs(a - b) <= np.maximum(atol, rtol * scale)


def _same_order(S1, S2):
    if S1.order != S2.order:
        raise ValueError(f"order mismatch: {S1.order} vs {S2.order}")
    return S1.order


def _first_violation(lhs, rhs, start, rtol, atol):
    """Smallest k (ties: smallest i) where rows of ``lhs``/``rhs`` disagree.

    ``start[i]`` is the first k compared for row ``i``.
    """
    best = None
    for i in range(lhs.shape[0]):
        ok = coefficients_close(lhs[i], rhs[i], rtol, atol)
        ok[: start[i]] = True
        bad = np.flatnonzero(~ok)
        if bad.size and (best is None or bad[0] < best.k):
            best = Violation(i, int(bad[0]), float(lhs[i, bad[0]]), float(rhs[i, bad[0]]))
    return best


def zero_state_equivalent(S1: LtvSystem, S2: LtvSystem, K: int, rtol=RTOL, atol=ATOL) -> EquivalenceReport:
    """Coefficient ``i`` must agree for ``k >= n - i``; earlier ones only couple
    to the (zero) initial samples and are not compared."""
    n = _same_order(S1, S2)
    t1, t2 = validate(S1, K), validate(S2, K)
    start = [max(0, n - i) for i in range(n + 1)]
    v = _first_violation(t2, t1, start, rtol, atol)
    return EquivalenceReport(v is None, "zero-state", v)


def zero_input_scalar_multiple(S1: LtvSystem, S2: LtvSystem, K: int, rtol=RTOL, atol=ATOL) -> EquivalenceReport:
    """Sufficient test for zero-input equivalence: S2's coefficients are a
    per-k multiple of S1's, the multiplier being the ratio of leading terms.

    A false verdict does not rule out zero-input equivalence.
    """
    n = _same_order(S1, S2)
    t1, t2 = validate(S1, K), validate(S2, K)
    alphas = t2[n] / t1[n]
    v = _first_violation(t2, alphas * t1, [0] * (n + 1), rtol, atol)
    note = "" if v is None else "scalar-multiple relation fails; zero-input equivalence not decided"
    return EquivalenceReport(v is None, "zero-input-scaling", v, tuple(alphas.tolist()), note)


def equivalent(S1: LtvSystem, S2: LtvSystem, K: int, rtol=RTOL, atol=ATOL) -> EquivalenceReport:
    """Identical coefficients on ``[0, K]`` and identical initial samples."""
    n = _same_order(S1, S2)
    t1, t2 = validate(S1, K), validate(S2, K)
    v = _first_violation(t2, t1, [0] * (n + 1), rtol, atol)
    if v is None:
        s1 = np.array(S1.initial_state)
        s2 = np.array(S2.initial_state)
        bad = np.flatnonzero(~coefficients_close(s2, s1, rtol, atol))
        if bad.size:
            j = int(bad[0])
            v = Violation(-1, j, float(s2[j]), float(s1[j]))
    return EquivalenceReport(v is None, "general", v)


def simulated_equivalent(
    S1: LtvSystem,
    S2: LtvSystem,
    trials: int,
    K: int,
    seed: int = 0,
    mode: str = "general",
    rtol=RTOL,
    atol=ATOL,
) -> EquivalenceReport:
    """Run both systems on ``trials`` random inputs, uniform in [-1, 1].

    ``mode`` selects the experiment: ``"general"`` uses the stored initial
    states, ``"zero-state"`` zeroes them, ``"zero-input"`` drives both with
    zero input from a shared random initial state per trial (the stored one
    for the first trial). Outputs span ``[0, K + n]`` so every coefficient on
    ``[0, K]`` influences some compared sample.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    n = _same_order(S1, S2)
    if mode not in ("general", "zero-state", "zero-input"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    H = K + n
    if mode == "zero-state":
        S1, S2 = S1.relaxed(), S2.relaxed()
    worst = None
    for t in range(trials):
        if mode == "zero-input":
            x = np.zeros(H + 1)
            state = S1.initial_state if t == 0 else tuple(rng.uniform(-1.0, 1.0, n))
            A, B = S1.with_initial_state(state), S2.with_initial_state(state)
        else:
            x = rng.uniform(-1.0, 1.0, H + 1)
            A, B = S1, S2
        y1, y2 = simulate(A, x, H), simulate(B, x, H)
        j = first_mismatch(y1, y2, rtol, atol)
        if j is not None and (worst is None or j < worst.k):
            worst = Violation(-1, j, float(y2[j]), float(y1[j]))
    return EquivalenceReport(worst is None, "simulated", worst)
