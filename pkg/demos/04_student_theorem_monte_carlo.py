"""
Monte Carlo check of Student's theorem
======================================

For normal samples of size n: sqrt(n) * mean is N(0, 1), W is chi2(n-1),
and the two are independent. Every claim is tested on 50 000 seeded trials.
A pass means "consistent with", never "proved". The negative controls
show the harness does reject false versions of each claim.
"""

from helmert_student import NormalParams, VerificationConfig, run_all, run_negative_controls

cfg = VerificationConfig(n=5, trials=50_000, seed=42, alpha=0.001, bins=4)
report = run_all(cfg)
for r in report.results:
    print(f"{r.claim_id:<7} {r.verdict}  p={r.p_values}")
print("exact orthogonality of O_5:", report.certification.passed)
print("overall:", report.overall_pass)

# %% General normal parameters go through the standardization map
general = run_all(VerificationConfig(n=5, trials=50_000, seed=7, params=NormalParams(3.0, 2.0)))
for r in general.results:
    if r.claim_id.startswith("T1"):
        print(f"{r.claim_id:<7} {r.verdict}  stats={r.statistics}")

# %% Falsified hypotheses must fail
for outcome in run_negative_controls(VerificationConfig(n=5, trials=100_000, seed=42)):
    flags = ", ".join(f"{r.claim_id}={'pass' if r.passed else 'FAIL'}" for r in outcome.results)
    print(f"{outcome.name:<20} target {outcome.target}: {flags}")
