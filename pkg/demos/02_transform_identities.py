"""
Y = O_n Z without forming O_n
=============================

The transform needs only prefix sums. Its last coordinate is sqrt(n) times
the sample mean, and the squares of the other coordinates add up to the sum
of squared deviations W.
"""

import math

import numpy as np

from helmert_student import apply, apply_transpose, build_dense, sample_stats

rng = np.random.default_rng(0)
n = 10
z = rng.normal(size=n)
y = apply(n, z)
s = sample_stats(z)

print("y            =", np.round(y, 4))
print("dense O_n z  =", np.round(build_dense(n) @ z, 4))
print(f"y_n = {y[-1]:.12f}   sqrt(n) * mean = {math.sqrt(n) * s.mean:.12f}")
print(f"sum_(i<n) y_i^2 = {np.sum(y[:-1] ** 2):.12f}   W = {s.w:.12f}")
print(f"sum y^2 = {y @ y:.12f}   sum z^2 = {z @ z:.12f}")

# %% Large orders are cheap; the transpose inverts the transform
big = rng.normal(size=(100, 4096))
print("round-trip max error, n=4096:", np.abs(apply_transpose(4096, apply(4096, big)) - big).max())
