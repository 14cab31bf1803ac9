"""
Gram-Schmidt from the averaging seed
====================================

Orthonormalize the identity matrix whose first row is replaced by
(1/sqrt(n), ..., 1/sqrt(n)). In floating point the result turns out to be
the Helmert matrix again, with its rows reversed and its columns taken in
the order 1, n, n-1, ..., 2. The distinct-|entry| count is identical.
"""

import numpy as np

from helmert_student import build_dense, entry_complexity, gram_schmidt_orthogonalize

n = 5
g = gram_schmidt_orthogonalize(n)
np.set_printoptions(precision=4, suppress=True)
print(g)

cols = [0] + list(range(n - 1, 0, -1))
h = build_dense(n)[::-1][:, np.argsort(cols)]
signs = np.sign(np.sum(g * h, axis=1))
print("matches permuted Helmert:", np.allclose(g, signs[:, None] * h, atol=1e-12))

# %% Entry complexity side by side
for n in range(4, 17):
    print(n, entry_complexity(gram_schmidt_orthogonalize(n)), entry_complexity(build_dense(n)))
