"""Empirical check of the coset-intersection bound: for random full-rank H,
two large sets of nonzero vectors almost always satisfy A intersect HB != empty,
and the miss probability is bounded by (1 + ln theta)/theta."""
import numpy as np

from wpc import lemma_intersection_check

rng = np.random.default_rng(5)
n = 10
space = (1 << n) - 1
set_a = rng.choice(space, size=256, replace=False) + 1
set_b = rng.choice(space, size=256, replace=False) + 1

report = lemma_intersection_check(n, set_a, set_b, samples=2000, rng=rng)
print(f"n={n}, |A|=|B|=256")
print(f"theta = {report.theta:.4f}")
print(f"bound on P(A cap HB = empty) = {report.bound:.4f}")
print(f"precondition holds: {report.precondition_ok}")
print(f"empirical miss probability: {report.empirical_probability:.4g} "
      f"({report.empty_count}/{report.samples})")
