"""
The Helmert matrix and its exact orthogonality certificate
==========================================================

Every entry of O_n is c/sqrt(r) with integers c and r, and a whole row shares
one r. That makes O_n O_n^T checkable with integer sums alone.
"""

import numpy as np

from helmert_student import build_dense, certify_orders, symbolic_matrix, verify_orthogonality_exact

# %% The order-5 matrix, exactly and in floating point
table = symbolic_matrix(5)
for i in range(1, 6):
    print("  ".join(f"{str(table.entry(i, j)):>7}" for j in range(1, 6)))

np.set_printoptions(precision=4, suppress=True)
print(build_dense(5))

# %% Certify: each row pair's integer sum must equal the row radicand (diagonal) or 0
print(verify_orthogonality_exact(5))
verdicts = certify_orders(range(2, 513))
print(f"orders 2..512 certified: {all(v.passed for v in verdicts)}")

# %% A single wrong coefficient is caught, with the offending pair reported (1-based)
bad = verify_orthogonality_exact(table=table.perturbed(4, 2))
print(f"perturbed O_5: passed={bad.passed}, pair={bad.failing_pair}, case={bad.failing_case}, "
      f"sum={bad.failing.integer_sum} (expected {bad.expected_sum})")
