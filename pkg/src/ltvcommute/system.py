"""Order-n linear time-varying difference equations.

A system is

    a_n(k) y(k+n) + ... + a_1(k) y(k+1) + a_0(k) y(k) = x(k),   k >= 0,

with initial samples y(0), ..., y(n-1). Responses are computed by solving for
the highest-index sample one step at a time, in increasing ``k``, in double
precision. Signals are plain 1-D float arrays indexed from ``k = 0``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence, Union

import numpy as np

from .coeffexpr import CoefficientError, CoefficientSequence, as_sequence

__all__ = [
    "RTOL", "ATOL", "LtvSystem", "ValidationError", "LeadingCoefficientZero",
    "NonFiniteCoefficient", "validate", "simulate", "unit_sample",
    "impulse_response", "impulse_response_matrix", "convolve",
    "zero_state_response", "zero_input_response", "allclose", "first_mismatch",
    "write_signal_csv", "read_signal_csv",
]

RTOL = 1e-9
ATOL = 1e-12


class ValidationError(ValueError):
    pass


class LeadingCoefficientZero(ValidationError):
    def __init__(self, k, label=""):
        self.k = k
        name = f"{label}: " if label else ""
        super().__init__(f"{name}leading coefficient is zero at k={k}")


class NonFiniteCoefficient(ValidationError):
    def __init__(self, index, k, label=""):
        self.index = index
        self.k = k
        name = f"{label}: " if label else ""
        super().__init__(f"{name}coefficient a_{index} cannot be evaluated at k={k}")


@dataclass(frozen=True)
class LtvSystem:
    """Coefficients ``coeffs[i]`` multiply ``y(k+i)``; lowest index first."""

    coeffs: tuple
    initial_state: tuple = None
    label: str = ""
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        coeffs = tuple(as_sequence(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a system needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)
        n = len(coeffs) - 1
        state = (0.0,) * n if self.initial_state is None else tuple(float(v) for v in self.initial_state)
        if len(state) != n:
            raise ValueError(f"order {n} system needs {n} initial samples, got {len(state)}")
        object.__setattr__(self, "initial_state", state)

    @classmethod
    def first_order(cls, a1, a0, y0=0.0, label=""):
        return cls((a0, a1), (y0,), label)

    @classmethod
    def static(cls, a0, label=""):
        return cls((a0,), (), label)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def relaxed(self) -> "LtvSystem":
        return replace(self, initial_state=(0.0,) * self.order)

    def with_initial_state(self, state) -> "LtvSystem":
        return replace(self, initial_state=tuple(state))

    def coefficient_table(self, K: int) -> np.ndarray:
        """Array of shape ``(order+1, K+1)``; row ``i`` holds ``a_i(0..K)``."""
        cached = self._cache.get("table")
        if cached is not None and cached.shape[1] >= K + 1:
            return cached[:, : K + 1]
        rows = []
        for i, c in enumerate(self.coeffs):
            try:
                rows.append(c.tabulate(K))
            except CoefficientError as exc:
                k = getattr(exc, "k", None)
                raise NonFiniteCoefficient(i, K if k is None else k, self.label) from exc
        table = np.vstack(rows)
        table.setflags(write=False)
        self._cache["table"] = table
        return table


def validate(sys: LtvSystem, K: int) -> np.ndarray:
    """Check ``sys`` on ``[0, K]`` and return its coefficient table.

    Raises NonFiniteCoefficient if any coefficient fails to evaluate, and
    LeadingCoefficientZero at the first ``k`` where ``a_n(k) == 0``.
    """
    if K < 0:
        raise ValueError("horizon must be nonnegative")
    table = sys.coefficient_table(K)
    zeros = np.flatnonzero(table[sys.order] == 0.0)
    if zeros.size:
        raise LeadingCoefficientZero(int(zeros[0]), sys.label)
    return table


def _as_input(x, K):
    xs = np.asarray(x, dtype=float)
    if xs.ndim != 1 or xs.size < K + 1:
        raise ValueError(f"input must have at least {K + 1} samples")
    if not np.all(np.isfinite(xs[: K + 1])):
        raise ValueError("input samples must be finite")
    return xs[: K + 1]


def simulate(sys: LtvSystem, x, K: int) -> np.ndarray:
    """Output samples ``y(0..K)`` for input ``x`` and the stored initial state.

    Only the coefficients on ``[0, K - n]`` take part in the solution, so only
    that range is validated.
    """
    n = sys.order
    if K < n:
        raise ValueError(f"horizon {K} is shorter than the system order {n}")
    xs = _as_input(x, K).tolist()
    table = validate(sys, K - n).tolist()
    lead = table[n]
    y = list(sys.initial_state) + [0.0] * (K + 1 - n)
    for k in range(K - n + 1):
        s = 0.0
        for i in range(n):
            s += table[i][k] * y[k + i]
        y[n + k] = (xs[k] - s) / lead[k]
    out = np.array(y, dtype=float)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError(f"{sys.label or 'system'} response overflowed")
    return out


def zero_state_response(sys: LtvSystem, x, K: int) -> np.ndarray:
    return simulate(sys.relaxed(), x, K)


def zero_input_response(sys: LtvSystem, K: int) -> np.ndarray:
    return simulate(sys, np.zeros(K + 1), K)


def unit_sample(l: int, K: int) -> np.ndarray:
    if not 0 <= l <= K:
        raise ValueError(f"unit sample position {l} outside [0, {K}]")
    d = np.zeros(K + 1)
    d[l] = 1.0
    return d


def impulse_response(sys: LtvSystem, l: int, K: int) -> np.ndarray:
    """Zero-state response ``h(., l)`` to a unit sample applied at ``l``."""
    return simulate(sys.relaxed(), unit_sample(l, K), K)


def impulse_response_matrix(sys: LtvSystem, K: int) -> np.ndarray:
    """``H[k, l] = h(k, l)`` for ``0 <= k, l <= K`` (lower triangular)."""
    H = np.zeros((K + 1, K + 1))
    for l in range(K + 1):
        H[:, l] = impulse_response(sys, l, K)
    return H


def convolve(h: Union[Callable[[int, int], float], np.ndarray], x, K: int) -> np.ndarray:
    """Superpose unit-sample responses: ``y(k) = sum_l x(l) h(k, l)``.

    ``h`` may be a callable ``h(k, l)`` or a matrix indexed ``[k, l]``. Causal
    responses vanish for ``l > k``, so the sum stops at ``l = k``.
    """
    xs = _as_input(x, K)
    if callable(h):
        hk = lambda k, l: h(k, l)  # noqa: E731
    else:
        H = np.asarray(h, dtype=float)
        hk = lambda k, l: H[k, l]  # noqa: E731
    y = np.zeros(K + 1)
    for k in range(K + 1):
        s = 0.0
        for l in range(k + 1):
            if xs[l] != 0.0:
                s += xs[l] * hk(k, l)
        y[k] = s
    if not np.all(np.isfinite(y)):
        raise FloatingPointError("convolution sum overflowed")
    return y


def allclose(a, b, rtol: float = RTOL, atol: float = ATOL) -> bool:
    return first_mismatch(a, b, rtol, atol) is None


def first_mismatch(a, b, rtol: float = RTOL, atol: float = ATOL):
    """Smallest index where ``|a-b| > atol + rtol*max(|a|,|b|)``, else None."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    bad = np.abs(a - b) > atol + rtol * np.maximum(np.abs(a), np.abs(b))
    idx = np.flatnonzero(bad)
    return int(idx[0]) if idx.size else None


def write_signal_csv(path, samples: Sequence[float]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "value"])
        for k, v in enumerate(samples):
            w.writerow([k, "%.17g" % float(v)])


def read_signal_csv(path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["k", "value"]:
        raise ValueError(f"{path}: expected header 'k,value'")
    values = []
    for j, row in enumerate(rows[1:]):
        if int(row[0]) != j:
            raise ValueError(f"{path}: row {j + 1} has k={row[0]}")
        v = float(row[1])
        if not math.isfinite(v):
            raise ValueError(f"{path}: non-finite sample at k={j}")
        values.append(v)
    return np.array(values)
