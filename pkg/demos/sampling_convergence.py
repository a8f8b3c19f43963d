"""Estimate a feasible set from generative-model samples and watch it converge.

The uniform sampler queries every state-action pair t times, plugs the
empirical transition model and expert policies into the same feasible-set
construction, and the Hausdorff distance to the true set shrinks roughly
like 1/sqrt(t). The printed high-probability bound is loose but follows the
same trend once t clears its validity thresholds.
"""
import numpy as np

import irlse

truth = irlse.random_problem(3, 2, 1, gamma=0.9, seed=0)
truth_poly = irlse.polytope_h_rep(truth)
delta = 0.1

print(f"{'t':>6} {'queries':>8} {'hausdorff':>12} {'bound':>12} {'valid':>6}")
for t in (10, 30, 100, 300, 1000):
    values = []
    for seed in range(5):
        model = irlse.GenerativeModel(truth, seed=seed)
        empirical, _ = irlse.us_irl_se(model, t)
        emp_poly = irlse.polytope_h_rep(empirical)
        values.append(irlse.hausdorff_distance(truth_poly, emp_poly).value)
    bound = irlse.error_bound_for(truth, t, delta)
    median = float(np.median(values))
    print(f"{t:>6} {t * truth.dim:>8} {median:>12.5f} {bound.value:>12.3f} "
          f"{str(bound.valid):>6}")

consts = irlse.complexity_constants(truth)
print("\nproblem constants:")
print(f"  pi_min (support minimum): {consts.pi_min_support:.4f}")
print(f"  pi_min (min-max variant): {consts.pi_min_minmax:.4f}")
print(f"  q0 = xi/pi_min: {consts.q0:.3f}   q1: {consts.q1:.3f}")
m = irlse.required_m(0.5, 0.1, 2, 2, 1, 0.1, 0.3, 0.2)
print(f"\nsamples per pair for (0.5, 0.1)-accuracy on an easy problem: {m}")
