"""Which ordering tolerates noise injected between the two stages?

The deviation of AB is B's response to the noise and vice versa, so the
unit-sample responses decide. For the example pair h_A/h_B starts at 2 and
stays above 1, so AB wins.
"""
import numpy as np

from ltvcommute import LtvSystem, impulse_ratio, inject_and_compare, pulse_train, unit_sample

K = 40
A = LtvSystem.first_order("exp(k)", "(k+1)^2", 0.0, "A")
B = LtvSystem.first_order("2*exp(k)", "2*k^2 + 4*k + 3", 0.0, "B")

print("h_A(k,0)/h_B(k,0), k = 1..6:", np.round(impulse_ratio(A, B, 0, 6), 4))

x = unit_sample(0, K)
for name, d in [
    ("unit sample at 0", unit_sample(0, K)),
    ("unit sample at 3", unit_sample(3, K)),
    ("pulse train 0.1, period 2", pulse_train(0.1, 2, 0.5, K)),
    ("0.04^k", 0.04 ** np.arange(K + 1.0)),
]:
    rep = inject_and_compare(A, B, x, d, K)
    print(f"{name:28s} peak AB {rep.max_dev_ab:.4g}  peak BA {rep.max_dev_ba:.4g}  -> {rep.winner}")
