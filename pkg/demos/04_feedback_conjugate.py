"""Every commutative partner of a first-order system is A behind a constant
feed-forward gain alpha and a constant feedback gain beta.

With a nonzero initial value the gains must satisfy beta = 1 - 1/alpha.
"""
import warnings

import numpy as np

from ltvcommute import (
    CommutativityWarning, FeedbackGains, LtvSystem, SynthesisConstants, cascade_chain,
    feedback_pair, gains_from_constants, synthesize_pair,
)

K = 20
A = LtvSystem.first_order("exp(k)", "(k+1)^2", 2.0, "A")
step = np.ones(K + 1)

for beta in (0.5, 1.0):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CommutativityWarning)
        B = feedback_pair(A, FeedbackGains(alpha=2.0, beta=beta), K + 1)
    gap = np.max(np.abs(cascade_chain(A, B, step, K) - cascade_chain(B, A, step, K)))
    note = " (warned)" if caught else ""
    print(f"alpha=2 beta={beta}: b0 = {B.coeffs[0]},  max |AB - BA| = {gap:.3g}{note}")

c = SynthesisConstants(c0=1.0, c1=2.0)
g = gains_from_constants(A, c)
same = np.array_equal(feedback_pair(A, g, K).coefficient_table(K), synthesize_pair(A, c, K).coefficient_table(K))
print(f"c1=2, c0=1 corresponds to alpha={g.alpha}, beta={g.beta}; identical tables: {same}")
