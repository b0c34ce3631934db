"""The deterministic estimator against brute-force enumeration.

The estimator never sees the 2^n configuration space: it sweeps the vertices,
estimates each conditional plus-marginal from a truncated walk tree, and
telescopes.  The guarantee is |log Z_hat - log Z| <= eps; in practice the
error is far below the budget.
"""

import math

import numpy as np

from spinz import (
    attach_spin_model,
    build_family_graph,
    conditional_marginal_estimate,
    exact_conditional_marginal,
    exact_log_partition,
    fptas_log_partition,
    ising_system,
    Spin,
)

# One instance, several accuracy targets.  The depth grows like log(1/eps);
# on a graph this small the walk trees go complete well before the requested
# depth, so the node count saturates and the answer is exact.
graph = build_family_graph("grid", rows=3, cols=4)
system = ising_system(graph, coupling=0.25, field_strength=0.2)
exact = exact_log_partition(system)
print(f"3x4 grid, J = 0.25, B = 0.2: exact log Z = {exact:.12f}")
print(f"  {'eps':>6}  {'depth':>5}  {'nodes':>6}  {'log Z_hat':>16}  {'|error|':>9}")
for eps in (0.5, 0.1, 0.02, 0.004):
    report = fptas_log_partition(system, eps)
    err = abs(report.log_z_hat - exact)
    print(f"  {eps:>6}  {report.truncation_depth:>5}  {report.total_nodes:>6}"
          f"  {report.log_z_hat:>16.12f}  {err:>9.2e}")

# Truncation error in isolation: hold the depth artificially small and watch
# the root marginal converge geometrically to the exact value.
graph = build_family_graph("random_regular", n=10, degree=3, seed=5)
system = ising_system(graph, coupling=0.45, field_strength=0.1)
truth = exact_conditional_marginal(system, 1, Spin.PLUS)
print(f"\n3-regular n=10, J = 0.45: exact p(vertex 1 = +) = {truth:.12f}")
print(f"  {'depth':>5}  {'estimate':>14}  {'|log error|':>11}")
for depth in range(1, 9):
    p_hat = conditional_marginal_estimate(system, 1, depth=depth)
    gap = abs(math.log(p_hat) - math.log(truth))
    print(f"  {depth:>5}  {p_hat:>14.12f}  {gap:>11.2e}")

# A small batch of random systems near the applicability boundary.
rng = np.random.default_rng(42)
print("\nrandom 3-regular batch at eps = 0.05:")
print(f"  {'seed':>4}  {'contraction':>11}  {'|error|':>9}")
for seed in range(6):
    graph = build_family_graph("random_regular", n=10, degree=3, seed=seed)
    system = attach_spin_model(graph, "random", coupling=0.45,
                               field_strength=1.0, seed=seed)
    report = fptas_log_partition(system, eps=0.05)
    err = abs(report.log_z_hat - exact_log_partition(system))
    print(f"  {seed:>4}  {report.contraction:>11.4f}  {err:>9.2e}")
