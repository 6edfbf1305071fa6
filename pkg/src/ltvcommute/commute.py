"""Commutativity of first-order systems and construction of commutative pairs.

Two systems commute when the cascades AB and BA are equivalent. For
first-order A, every first-order partner B is obtained from two constants:

    b1(k) = c1 * a1(k)
    b0(k) = c1 * (a0(k) - a0(0)) + c0,        c1 != 0,

with ``c0 = 1 - c1 + c1*a0(0)`` required once the shared initial
value is nonzero. The same family arises from wrapping A in a constant
feed-forward gain and a constant feedback gain.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coeffexpr import BinOp, ClosedForm, Neg, Num, Tabulated
from .compose import cascade_with_zero_order
from .equivalence import coefficients_close, zero_input_scalar_multiple
from .system import ATOL, RTOL, LtvSystem, validate

__all__ = [
    "SynthesisConstants", "FeedbackGains", "CommutativityReport",
    "CommutativityWarning", "check_conditions", "synthesize_pair",
    "required_c0", "feedback_pair", "gains_from_constants",
    "constants_from_gains", "zero_order_commutes",
]


class CommutativityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SynthesisConstants:
    """``c1 = b1(0)/a1(0)`` (nonzero) and ``c0 = b0(0)``."""

    c0: float
    c1: float

    def __post_init__(self):
        if self.c1 == 0 or not math.isfinite(self.c1):
            raise ValueError("c1 must be finite and nonzero")
        if not math.isfinite(self.c0):
            raise ValueError("c0 must be finite")


@dataclass(frozen=True)
class FeedbackGains:
    """Feed-forward gain ``alpha`` (nonzero) and feedback gain ``beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha == 0 or not math.isfinite(self.alpha):
            raise ValueError("forward gain must be finite and nonzero")
        if not math.isfinite(self.beta):
            raise ValueError("feedback gain must be finite")


@dataclass(frozen=True)
class CommutativityReport:
    """Flags for the separate commutativity regimes.

    ``ic_constraint_ok`` is None when initial conditions were not checked.
    ``first_violation`` is ``(tag, k, residual)``.
    """

    zero_state_ok: bool
    general_ok: bool
    ic_constraint_ok: Optional[bool]
    zero_input_sufficient_ok: bool
    first_violation: Optional[tuple] = None
    relaxed: bool = True
    alphas: Optional[tuple] = None

    @property
    def commutative(self) -> bool:
        if self.relaxed:
            return self.zero_state_ok
        return self.general_ok and bool(self.ic_constraint_ok)

    def __bool__(self):
        return self.commutative


def _first_bad(tag, lhs, rhs, ks, rtol, atol):
    ok = coefficients_close(lhs, rhs, rtol, atol)
    bad = np.flatnonzero(~ok)
    if not bad.size:
        return None
    j = bad[0]
    return (tag, int(ks[j]), float(lhs[j] - rhs[j]))


def _first_order_pair(A, B):
    if A.order != 1 or B.order != 1:
        raise ValueError(f"both systems must be first order (got {A.order} and {B.order})")


def check_conditions(
    A: LtvSystem,
    B: LtvSystem,
    K: int,
    with_initial_conditions: bool = True,
    rtol=RTOL,
    atol=ATOL,
) -> CommutativityReport:
    """Coefficient-level commutativity test for two first-order systems.

    Zero-state commutativity compares the leading cascade coefficients for
    ``k >= 0``, the middle ones for ``k >= 1`` and the constant ones for
    ``k >= 2``; general commutativity compares all of them for every ``k``
    in ``[0, K]`` and, with initial conditions, also requires equal initial
    values and equal second samples of both cascades.
    """
    _first_order_pair(A, B)
    ta, tb = validate(A, K + 1), validate(B, K + 1)
    a0, a1, b0, b1 = ta[0], ta[1], tb[0], tb[1]
    ks = np.arange(K + 1)
    now, nxt = slice(0, K + 1), slice(1, K + 2)
    # cascade coefficients: AB on the left, BA on the right
    lead = (a1[now] * b1[nxt], b1[now] * a1[nxt])
    mid = (a1[now] * b0[nxt] + a0[now] * b1[now], b1[now] * a0[nxt] + b0[now] * a1[now])
    const = (a0[now] * b0[now], b0[now] * a0[now])

    zs = [
        _first_bad("zero_state.leading", *lead, ks, rtol, atol),
        _first_bad("zero_state.middle", mid[0][1:], mid[1][1:], ks[1:], rtol, atol),
        _first_bad("zero_state.constant", const[0][2:], const[1][2:], ks[2:], rtol, atol),
    ]
    gen = [
        _first_bad("general.leading", *lead, ks, rtol, atol),
        _first_bad("general.middle", *mid, ks, rtol, atol),
        _first_bad("general.constant", *const, ks, rtol, atol),
    ]
    zs = [v for v in zs if v]
    gen = [v for v in gen if v]

    alphas = lead[1] / lead[0]
    zi = [
        _first_bad("zero_input.constant", const[1], alphas * const[0], ks, rtol, atol),
        _first_bad("zero_input.middle", mid[1], alphas * mid[0], ks, rtol, atol),
        _first_bad("zero_input.leading", lead[1], alphas * lead[0], ks, rtol, atol),
    ]
    zi = [v for v in zi if v]

    y0a, = A.initial_state
    y0b, = B.initial_state
    ic_ok = None
    ic = []
    if with_initial_conditions:
        if not coefficients_close(y0b, y0a, rtol, atol):
            ic.append(("ic.initial_values", 0, y0b - y0a))
        second_ab = y0a / b1[0] - b0[0] / b1[0] * y0b
        second_ba = y0b / a1[0] - a0[0] / a1[0] * y0a
        if not coefficients_close(second_ab, second_ba, rtol, atol):
            ic.append(("ic.second_sample", 1, second_ab - second_ba))
        ic_ok = not ic

    relaxed = not with_initial_conditions or (y0a == 0.0 and y0b == 0.0)
    if zs:
        first = min(zs, key=lambda v: v[1])
    elif gen and not relaxed:
        first = min(gen, key=lambda v: v[1])
    elif ic and not relaxed:
        first = ic[0]
    else:
        first = None
    return CommutativityReport(
        zero_state_ok=not zs,
        general_ok=not gen,
        ic_constraint_ok=ic_ok,
        zero_input_sufficient_ok=not zi,
        first_violation=first,
        relaxed=relaxed,
        alphas=tuple(alphas.tolist()),
    )


# -- synthesis ----------------------------------------------------------------

def _num(v):
    return Num(float(v)) if v >= 0 else Neg(Num(-float(v)))


def _scaled(c, expr):
    if c == 1:
        return expr
    return BinOp("*", _num(c), expr)


def _shifted(expr, v):
    if v == 0:
        return expr
    if v < 0:
        return BinOp("-", expr, Num(-float(v)))
    return BinOp("+", expr, Num(float(v)))


def _divided(expr, c):
    if c == 1:
        return expr
    return BinOp("/", expr, _num(c))


def _is_closed(A):
    return all(isinstance(c, ClosedForm) for c in A.coeffs)


def synthesize_pair(A: LtvSystem, c: SynthesisConstants, K: int, y0: float = None, label: str = "B") -> LtvSystem:
    """The commutative partner of ``A`` generated by ``c``.

    ``y0`` defaults to A's initial value. Closed-form coefficients of A give
    closed-form coefficients of B; otherwise B is tabulated on ``[0, K]``.
    """
    if A.order != 1:
        raise ValueError("synthesis needs a first-order system")
    table = validate(A, K)
    y0 = A.initial_state[0] if y0 is None else y0
    shift = c.c0 - c.c1 * table[0, 0]
    if _is_closed(A):
        a0, a1 = A.coeffs
        b1 = ClosedForm(_scaled(c.c1, a1.expr))
        b0 = ClosedForm(_shifted(_scaled(c.c1, a0.expr), shift))
    else:
        b1 = Tabulated(c.c1 * table[1])
        b0 = Tabulated(c.c1 * table[0] + shift)
    return LtvSystem((b0, b1), (y0,), label)


def required_c0(A: LtvSystem, c1: float) -> float:
    """The c0 that keeps the pair commutative under a nonzero initial value."""
    if c1 == 0:
        raise ValueError("c1 must be nonzero")
    return 1.0 - c1 + c1 * A.coeffs[0](0)


def feedback_pair(A: LtvSystem, g: FeedbackGains, K: int, label: str = "B", rtol=RTOL, atol=ATOL) -> LtvSystem:
    """A wrapped with feed-forward gain ``g.alpha`` and feedback ``g.beta``.

    Resulting equation: ``(a1/alpha) y(k+1) + (a0/alpha + beta) y(k) = x(k)``
    with A's initial value. Issues a CommutativityWarning if A's initial value
    is nonzero and ``beta != 1 - 1/alpha``.
    """
    if A.order != 1:
        raise ValueError("feedback conjugate needs a first-order system")
    table = validate(A, K)
    y0, = A.initial_state
    if _is_closed(A):
        a0, a1 = A.coeffs
        b1 = ClosedForm(_divided(a1.expr, g.alpha))
        b0 = ClosedForm(_shifted(_divided(a0.expr, g.alpha), g.beta))
    else:
        b1 = Tabulated(table[1] / g.alpha)
        b0 = Tabulated(table[0] / g.alpha + g.beta)
    required = 1.0 - 1.0 / g.alpha
    if y0 != 0 and not coefficients_close(g.beta, required, rtol, atol):
        warnings.warn(
            f"beta {g.beta!r} != 1 - 1/alpha = {required!r}: "
            "the pair does not commute under the nonzero initial value",
            CommutativityWarning,
            stacklevel=2,
        )
    return LtvSystem((b0, b1), (y0,), label)


def gains_from_constants(A: LtvSystem, c: SynthesisConstants) -> FeedbackGains:
    return FeedbackGains(alpha=1.0 / c.c1, beta=c.c0 - c.c1 * A.coeffs[0](0))


def constants_from_gains(A: LtvSystem, g: FeedbackGains) -> SynthesisConstants:
    return SynthesisConstants(c0=A.coeffs[0](0) / g.alpha + g.beta, c1=1.0 / g.alpha)


def zero_order_commutes(
    A: LtvSystem,
    Z: LtvSystem,
    K: int,
    with_initial_conditions: bool = True,
    rtol=RTOL,
    atol=ATOL,
) -> CommutativityReport:
    """First-order ``A`` against the static gain ``Z``.

    They commute iff ``Z``'s gain is constant on ``[0, K+1]``; with a nonzero
    initial value of A the gain must also be exactly one.
    """
    if A.order != 1:
        raise ValueError("dynamic system must be first order")
    if Z.order != 0:
        raise ValueError(f"static system must have order 0, got {Z.order}")
    b0 = validate(Z, K + 1)[0]
    validate(A, K + 1)
    ks = np.arange(K + 1)
    v = _first_bad("constant_gain", b0[1:], b0[:-1], ks, rtol, atol)
    y0a, = A.initial_state
    ic_ok = None
    ic_v = None
    if with_initial_conditions:
        ic_ok = bool(coefficients_close(y0a, y0a / b0[0], rtol, atol))
        if not ic_ok:
            ic_v = ("ic.initial_values", 0, y0a - y0a / b0[0])
    az = cascade_with_zero_order(A, Z, "AB", K)
    za = cascade_with_zero_order(A, Z, "BA", K)
    zi = zero_input_scalar_multiple(az, za, K, rtol, atol)
    relaxed = not with_initial_conditions or y0a == 0.0
    return CommutativityReport(
        zero_state_ok=v is None,
        general_ok=v is None,
        ic_constraint_ok=ic_ok,
        zero_input_sufficient_ok=zi.verdict,
        first_violation=v or (None if relaxed else ic_v),
        relaxed=relaxed,
        alphas=zi.alphas,
    )
