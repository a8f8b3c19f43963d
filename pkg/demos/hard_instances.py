"""Benchmark instance families whose feasible sets are provably far apart.

Each family pairs a base problem with a barely-distinguishable alternative:
the chain tilts one transition probability by eps, the sub-optimal-expert
family scales one mixture weight by alpha. Any estimator must separate the
pair to get the feasible set right, which is what makes these instances
hard; here we just measure how far apart the sets actually are.
"""
import irlse

print("sub-optimal-expert family: the expert's mixture weight carries the")
print("information; the gap band shrinks from xi/pi_min to xi/(alpha pi_min).")
base = irlse.lb_subopt(1, gamma=0.9, xi=0.1, pi_min=0.25, alpha=2.0)
alt = irlse.lb_subopt(1, gamma=0.9, xi=0.1, pi_min=0.25, alpha=2.0, variant_state=0)
report = irlse.hausdorff_distance(irlse.polytope_h_rep(base),
                                  irlse.polytope_h_rep(alt))
closed_form = 0.5 * (0.1 / 0.25) * (1 - 1 / 2.0)
print(f"  measured H = {report.value:.6f}, closed form {closed_form:.6f}")

print("\nchain family: one transition row tilts by eps toward the good sink,")
print("which rotates a single optimality constraint of the feasible set.")
cbase = irlse.lb_chain(1, 2, gamma=0.9, eps_prime=0.05)
calt = irlse.lb_chain(1, 2, gamma=0.9, eps_prime=0.05, variant=(0, 1))
creport = irlse.hausdorff_distance(irlse.polytope_h_rep(cbase),
                                   irlse.polytope_h_rep(calt))
tilt = 0.05 * 0.9 / (1 - 0.9)
print(f"  tilt delta = eps * gamma / (1 - gamma) = {tilt:.3f}")
print(f"  measured H = {creport.value:.6f} = delta / (1 + 2 delta) "
      f"= {tilt / (1 + 2 * tilt):.6f}")
print("  (moving both reward coordinates of the tilted pair splits the")
print("   distance, so the separation is smaller than the raw tilt)")

print("\ntree family: balanced +-eps tilts across the leaves;")
print("opposite sign vectors give distinct but mirror-image sets.")
ta = irlse.lb_tree(2, 2, gamma=0.9, eps_prime=0.1, v=(1, -1))
tb = irlse.lb_tree(2, 2, gamma=0.9, eps_prime=0.1, v=(-1, 1))
treport = irlse.hausdorff_distance(irlse.polytope_h_rep(ta),
                                   irlse.polytope_h_rep(tb))
print(f"  measured H = {treport.value:.6f}")
