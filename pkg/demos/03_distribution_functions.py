"""
Reference distribution functions
================================

Standard normal CDF, chi-square CDF through the regularized incomplete
gamma function, and the Kolmogorov survival function used for KS p-values.
"""

import math

import numpy as np

from helmert_student import chi2_cdf, kolmogorov_survival, normal_cdf

print("Phi(0)            =", normal_cdf(0.0))
print("Phi(1.959963985)  =", normal_cdf(1.959963985))
print("chi2_cdf(2, 2ln2) =", chi2_cdf(2, 2 * math.log(2)))
print("chi2_cdf(4, 1)    =", chi2_cdf(4, 1.0), " closed form:", 1 - 1.5 * math.exp(-0.5))
print("Q_KS(1.0)         =", kolmogorov_survival(1.0))

# %% chi2 with one degree of freedom is the square of a standard normal
x = np.linspace(0, 50, 501)
gap = np.abs(chi2_cdf(1, x) - (2 * normal_cdf(np.sqrt(x)) - 1)).max()
print("max |chi2_cdf(1, x) - (2 Phi(sqrt x) - 1)| on [0, 50]:", gap)

# %% Large degrees of freedom
for k in (10, 100, 1000, 10_000):
    print(f"k={k:>6}: chi2_cdf(k, k) = {chi2_cdf(k, float(k)):.6f}")
