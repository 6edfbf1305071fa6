"""Two time-varying systems that commute, and a near miss that does not.

A:  e^k y(k+1) + (k+1)^2 y(k) = x(k)
B:  built from A with c1 = 2, c0 = 1, so both cascades agree even with y(0) = 2.
B': same b1, but b0 shifted by 2. Zero-state commutative, yet the initial
    value breaks it.
"""
import numpy as np

from ltvcommute import (
    LtvSystem, SynthesisConstants, cascade_first_order, check_conditions, simulate,
    synthesize_pair, unit_sample,
)

K = 50
A = LtvSystem.first_order("exp(k)", "(k+1)^2", 2.0, "A")
B = synthesize_pair(A, SynthesisConstants(c0=1.0, c1=2.0), K + 1)
print(f"b1(k) = {B.coeffs[1]}    b0(k) = {B.coeffs[0]}")

x = unit_sample(0, K)


def outputs(P, Q):
    ab = simulate(cascade_first_order(P, Q, K).inner, x, K)
    ba = simulate(cascade_first_order(Q, P, K).inner, x, K)
    return ab, ba


ab, ba = outputs(A, B)
rep = check_conditions(A, B, K)
print(f"A,B   max |AB - BA| = {np.max(np.abs(ab - ba)):.3g}   commutative={rep.commutative}")

Bp = LtvSystem.first_order("2*exp(k)", "2*k^2 + 4*k + 3", 2.0, "B'")
ab, ba = outputs(A, Bp)
rep = check_conditions(A, Bp, K)
print(f"A,B'  max |AB - BA| = {np.max(np.abs(ab - ba)):.3g}   commutative={rep.commutative}, "
      f"first violation {rep.first_violation[0]}")
print("      first samples AB:", np.round(ab[:5], 4), " BA:", np.round(ba[:5], 4))

ab, ba = outputs(A.relaxed(), Bp.relaxed())
print(f"relaxed A,B'  max |AB - BA| = {np.max(np.abs(ab - ba)):.3g}")
