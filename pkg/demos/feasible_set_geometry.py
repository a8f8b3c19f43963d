"""Walk through the geometry of a tiny feasible reward set.

A two-state problem where the optimal expert and a sub-optimal expert
disagree in one state pins the reward gap r(S0, a0) - r(S0, a1) into the
band [0, xi]. This script checks memberships, recovers the canonical
(zeta, V) witness of a member, and prints the caps and volume bounds that
quantify how much the sub-optimal expert shrinks the set.
"""
import numpy as np

import irlse

problem = irlse.example_fig1(gamma=0.9, xi=0.5)
print("states:", problem.num_states, "actions:", problem.num_actions,
      "experts:", 1 + problem.num_experts)

inside = irlse.RewardFunction(np.array([[0.6, 0.3], [0.2, 0.1]]))
outside = irlse.RewardFunction(np.array([[0.9, 0.1], [0.2, 0.1]]))
print("\ngap 0.3 reward is a member:", bool(irlse.membership_implicit(problem, inside)))
report = irlse.membership_implicit(problem, outside)
print("gap 0.8 reward is a member:", bool(report))
for v in report.violations:
    print(f"  violated: {v.condition} at state {v.state}, margin {v.margin:.3f}")

params = irlse.params_from_reward(problem, inside)
print("\ncanonical witness of the member:")
print("  zeta =", np.round(params.zeta, 6).tolist())
print("  V    =", np.round(params.v, 6).tolist())
values, in_box = irlse.reward_from_params(problem, params)
print("  reassembled max error:", float(np.max(np.abs(values - inside.values))))

caps = irlse.zeta_caps(problem)
print("\nzeta caps (min over experts of xi / occupancy weight, then horizon):")
print("  k =", caps.k.tolist())
print("  g =", caps.g.tolist())
single, multi = irlse.volume_upper_bounds(problem)
print(f"volume bound without experts: {single:.1f}")
print(f"volume bound with the expert: {multi:.1f}  ({single / multi:.0f}x smaller)")

poly = irlse.polytope_h_rep(problem)
vertices = irlse.enumerate_vertices(poly)
print(f"\nH-representation: {poly.G.shape[0]} rows, {len(vertices)} vertices")
narrow = irlse.polytope_h_rep(irlse.example_fig1(gamma=0.9, xi=0.2))
distance = irlse.hausdorff_distance(poly, narrow)
print(f"Hausdorff distance to the xi=0.2 set: {distance.value:.4f}")
