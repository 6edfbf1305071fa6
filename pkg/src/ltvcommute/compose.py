"""Cascade connections of first-order and zero-order systems.

``cascade_first_order(A, B, K)`` builds the second-order equation satisfied
by the output of B when A's output drives B's input, with coefficients
tabulated on ``[0, K]``. ``cascade_chain`` is the operational definition
(simulate one system, feed the result to the other) and serves as its
oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffexpr import Tabulated
from .system import LtvSystem, simulate, validate

__all__ = ["CascadeSystem", "cascade_first_order", "cascade_chain", "cascade_with_zero_order"]


@dataclass(frozen=True)
class CascadeSystem:
    inner: LtvSystem
    first: str
    second: str

    @property
    def name(self):
        return f"{self.first}{self.second}"


def _require_order(sys, order, role):
    if sys.order != order:
        raise ValueError(f"{role} system {sys.label!r} must have order {order}, got {sys.order}")


def cascade_first_order(first: LtvSystem, second: LtvSystem, K: int) -> CascadeSystem:
    """Second-order system equivalent to ``first`` followed by ``second``.

    With ``first = a1 y(k+1) + a0 y(k)`` and ``second = b1 y(k+1) + b0 y(k)``:

        c2(k) = a1(k) b1(k+1)
        c1(k) = a1(k) b0(k+1) + a0(k) b1(k)
        c0(k) = a0(k) b0(k)

    and the initial samples are ``y(0) = y0_second`` and
    ``y(1) = (y0_first - b0(0) y0_second) / b1(0)``. Operand coefficients are
    needed on ``[0, K+1]``. Swap the arguments for the other ordering.
    """
    _require_order(first, 1, "first")
    _require_order(second, 1, "second")
    ta = validate(first, K + 1)
    tb = validate(second, K + 1)
    a0, a1 = ta[0], ta[1]
    b0, b1 = tb[0], tb[1]
    c2 = a1[: K + 1] * b1[1 : K + 2]
    c1 = a1[: K + 1] * b0[1 : K + 2] + a0[: K + 1] * b1[: K + 1]
    c0 = a0[: K + 1] * b0[: K + 1]
    y0a, = first.initial_state
    y0b, = second.initial_state
    state = (y0b, (y0a - b0[0] * y0b) / b1[0])
    name = f"{first.label}{second.label}"
    inner = LtvSystem((Tabulated(c0), Tabulated(c1), Tabulated(c2)), state, name)
    return CascadeSystem(inner, first.label, second.label)


def cascade_chain(first: LtvSystem, second: LtvSystem, x, K: int) -> np.ndarray:
    """Output of ``second`` driven by the output of ``first``; any orders."""
    return simulate(second, simulate(first, x, K), K)


def cascade_with_zero_order(A: LtvSystem, Z: LtvSystem, order: str, K: int) -> LtvSystem:
    """First-order ``A`` in cascade with the static gain system ``Z``.

    ``order="AB"`` puts A first (``Z`` divides A's output by ``b0(k)``);
    ``order="BA"`` puts Z first. Coefficients are tabulated on ``[0, K]``.
    """
    _require_order(A, 1, "dynamic")
    _require_order(Z, 0, "static")
    if order not in ("AB", "BA"):
        raise ValueError(f"order must be 'AB' or 'BA', got {order!r}")
    ta = validate(A, K + 1)
    b0 = validate(Z, K + 1)[0]
    a0, a1 = ta[0, : K + 1], ta[1, : K + 1]
    y0a, = A.initial_state
    if order == "AB":
        lead = a1 * b0[1 : K + 2]
        state = (y0a / b0[0],)
        name = f"{A.label}{Z.label}"
    else:
        lead = a1 * b0[: K + 1]
        state = (y0a,)
        name = f"{Z.label}{A.label}"
    return LtvSystem((Tabulated(a0 * b0[: K + 1]), Tabulated(lead)), state, name)
