"""Building two-state spin systems and reading off their scalar diagnostics.

A system is a graph plus a log-weight table on each edge and each vertex.
Everything the estimator needs to know about applicability boils down to
three numbers: the maximum interaction strength J, the degree bound d, and
the contraction factor (d - 1) * tanh(J).
"""

from spinz import (
    EdgePotential,
    Graph,
    VertexField,
    SpinSystem,
    build_family_graph,
    critical_inverse_temperature,
    external_field,
    interaction_strength,
    ising_potential,
    ising_system,
    system_scalars,
)

# An explicit 4-cycle with one asymmetric edge table.
graph = Graph.from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
potentials = {
    (1, 2): ising_potential(0.3),
    (2, 3): ising_potential(-0.3),
    (3, 4): EdgePotential(pp=0.5, pm=-0.1, mp=0.2, mm=0.0),
    (1, 4): ising_potential(0.3),
}
fields = {v: VertexField(h_plus=0.1 * v, h_minus=0.0) for v in graph.vertices()}
system = SpinSystem(graph, potentials, fields)

print("per-edge interaction strengths J_ij = (pp + mm - pm - mp) / 4:")
for edge, table in sorted(potentials.items()):
    print(f"  {edge}: J = {interaction_strength(table):+.4f}")
print("per-vertex external fields B_i = (h_plus - h_minus) / 2:")
for v in graph.vertices():
    print(f"  {v}: B = {external_field(fields[v]):+.4f}")

scalars = system_scalars(system)
print(f"\nmax |J|        : {scalars.max_coupling:.4f}")
print(f"degree bound   : {scalars.degree_bound}")
print(f"contraction    : {scalars.contraction:.4f}  (estimator needs < 1)")

# The applicability region shrinks with the degree bound: the critical
# coupling 0.5 * log(d / (d - 2)) is where the contraction hits 1 exactly.
print("\ncritical coupling by degree:")
for d in (3, 4, 5, 6, 10):
    print(f"  d = {d:2d}: J_crit = {critical_inverse_temperature(d):.4f}")

# A 3-regular system right below and right above its critical coupling.
cubic = build_family_graph("random_regular", n=10, degree=3, seed=7)
for factor in (0.9, 1.1):
    coupling = factor * critical_inverse_temperature(3)
    s = system_scalars(ising_system(cubic, coupling))
    verdict = "inside" if s.contraction < 1 else "outside"
    print(f"J = {coupling:.4f}: contraction = {s.contraction:.4f} ({verdict} the guarantee region)")
