"""Sensitivity of the two cascade orderings to noise at the junction.

Noise added between the stages only passes through the second stage, so
the deviation of AB's output is B's zero-state response to the noise and
that of BA is A's. Comparing unit-sample responses of A and B therefore
decides which ordering suppresses junction noise better.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .system import ATOL, RTOL, LtvSystem, impulse_response, simulate

__all__ = [
    "RobustnessReport", "inject_and_compare", "analytic_hA_example1",
    "analytic_hB_example1", "impulse_ratio", "pulse_train", "modulation_index",
]


@dataclass(frozen=True)
class RobustnessReport:
    deviation_ab: np.ndarray
    deviation_ba: np.ndarray
    bounds_ab: tuple
    bounds_ba: tuple
    winner: str
    clean_ab: np.ndarray
    clean_ba: np.ndarray
    noisy_ab: np.ndarray
    noisy_ba: np.ndarray

    @property
    def max_dev_ab(self) -> float:
        return float(np.max(np.abs(self.deviation_ab)))

    @property
    def max_dev_ba(self) -> float:
        return float(np.max(np.abs(self.deviation_ba)))


def inject_and_compare(A: LtvSystem, B: LtvSystem, x, d, K: int, rtol=RTOL, atol=ATOL) -> RobustnessReport:
    """Add ``d`` at the junction of AB and of BA and measure the output change.

    ``winner`` names the ordering with the smaller peak deviation, or
    ``"tie"`` when the peaks agree within tolerance.
    """
    d = np.asarray(d, dtype=float)[: K + 1]
    if d.size < K + 1:
        raise ValueError(f"disturbance must have at least {K + 1} samples")
    mid_ab = simulate(A, x, K)
    mid_ba = simulate(B, x, K)
    clean_ab = simulate(B, mid_ab, K)
    clean_ba = simulate(A, mid_ba, K)
    noisy_ab = simulate(B, mid_ab + d, K)
    noisy_ba = simulate(A, mid_ba + d, K)
    dev_ab = noisy_ab - clean_ab
    dev_ba = noisy_ba - clean_ba
    peak_ab = np.max(np.abs(dev_ab))
    peak_ba = np.max(np.abs(dev_ba))
    if abs(peak_ab - peak_ba) <= atol + rtol * max(peak_ab, peak_ba):
        winner = "tie"
    else:
        winner = "AB" if peak_ab < peak_ba else "BA"
    return RobustnessReport(
        deviation_ab=dev_ab,
        deviation_ba=dev_ba,
        bounds_ab=(float(dev_ab.min()), float(dev_ab.max())),
        bounds_ba=(float(dev_ba.min()), float(dev_ba.max())),
        winner=winner,
        clean_ab=clean_ab,
        clean_ba=clean_ba,
        noisy_ab=noisy_ab,
        noisy_ba=noisy_ba,
    )


def _exponent(k, l):
    # sum of j for j = l .. k-1
    return (k * (k - 1) - l * (l - 1)) // 2


def analytic_hA_example1(k: int, l: int) -> float:
    """Closed-form h(k, l) of ``exp(k) y(k+1) + (k+1)^2 y(k) = x(k)``."""
    if k <= l:
        return 0.0
    prod = math.prod((k - i + 1) ** 2 for i in range(1, k - l))
    sign = -1.0 if (k - l - 1) % 2 else 1.0
    return sign * math.exp(math.log(prod) - _exponent(k, l))


def analytic_hB_example1(k: int, l: int) -> float:
    """Closed-form h(k, l) of ``2 exp(k) y(k+1) + (2k^2 + 4k + 3) y(k) = x(k)``.

    Each step multiplies by ``-((k+1)^2 + 1/2) / exp(k)``, after the first
    sample ``1 / (2 exp(l))``.
    """
    if k <= l:
        return 0.0
    steps = k - l - 1
    # (m^2 + 1/2) = (2 m^2 + 1) / 2, kept as an exact integer product
    prod = math.prod(2 * (k - i + 1) ** 2 + 1 for i in range(1, k - l))
    sign = -1.0 if steps % 2 else 1.0
    log_mag = math.log(prod) - (steps + 1) * math.log(2.0) - _exponent(k, l)
    return sign * math.exp(log_mag)


def impulse_ratio(A: LtvSystem, B: LtvSystem, l: int, K: int) -> np.ndarray:
    """``h_A(k, l) / h_B(k, l)`` for ``k = l+1 .. K``; NaN where ``h_B`` vanishes."""
    if not 0 <= l < K:
        raise ValueError(f"need 0 <= l < K, got l={l}, K={K}")
    ha = impulse_response(A, l, K)[l + 1 :]
    hb = impulse_response(B, l, K)[l + 1 :]
    out = np.full(ha.shape, np.nan)
    nz = hb != 0.0
    out[nz] = ha[nz] / hb[nz]
    return out


def pulse_train(amplitude: float, period: int, duty: float, K: int) -> np.ndarray:
    """``amplitude`` for the first ``duty`` fraction of every period, else 0."""
    if period < 1:
        raise ValueError("period must be a positive integer")
    if not 0 < duty <= 1:
        raise ValueError("duty must lie in (0, 1]")
    k = np.arange(K + 1)
    return np.where((k % period) < duty * period, float(amplitude), 0.0)


def modulation_index(signal, period: int, start: int, stop: int) -> float:
    """Depth ``(E_max - E_min) / (E_max + E_min)`` of the upper envelope.

    The envelope is sampled as the maximum of each complete ``period``-long
    window in ``[start, stop]``.
    """
    seg = np.asarray(signal, dtype=float)[start : stop + 1]
    n = seg.size // period
    if n < 2:
        raise ValueError("need at least two complete carrier periods")
    peaks = seg[: n * period].reshape(n, period).max(axis=1)
    hi, lo = peaks.max(), peaks.min()
    return float((hi - lo) / (hi + lo))
