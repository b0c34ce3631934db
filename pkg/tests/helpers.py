"""Shared test utilities.

reference_log_partition is a deliberately plain itertools enumeration kept
independent of the package's vectorized oracle, so the two can cross-check
each other.  The instance builders centralize the seeded recipes used by
several test modules.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from spinz import (
    EdgePotential,
    Graph,
    Spin,
    SpinSystem,
    VertexField,
    build_family_graph,
    critical_inverse_temperature,
    ising_potential,
)

PETERSEN_EDGES = [
    (1, 2), (2, 3), (3, 4), (4, 5), (1, 5),
    (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
    (6, 8), (8, 10), (7, 10), (7, 9), (6, 9),
]


def petersen_graph() -> Graph:
    return Graph.from_edges(10, PETERSEN_EDGES)


def reference_log_partition(system: SpinSystem, condition=None) -> float:
    """Exact log Z by direct product-space enumeration, pure Python."""
    cond = dict(condition or {})
    free = [v for v in system.graph.vertices() if v not in cond]
    log_weights = []
    for draw in itertools.product((Spin.MINUS, Spin.PLUS), repeat=len(free)):
        sigma = dict(cond)
        sigma.update(zip(free, draw))
        w = 0.0
        for (u, v), pot in system.potentials.items():
            w += pot.value(sigma[u], sigma[v])
        for v, f in system.fields.items():
            w += f.value(sigma[v])
        log_weights.append(w)
    peak = max(log_weights)
    return peak + math.log(sum(math.exp(w - peak) for w in log_weights))


def random_system(rng, n: int, edge_prob: float = 0.5, coupling: float = 1.0, field: float = 1.0) -> SpinSystem:
    """Random dense-ish system with uniform table entries, for identities."""
    edges = [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < edge_prob]
    graph = Graph.from_edges(n, edges)
    potentials = {e: EdgePotential(*rng.uniform(-coupling, coupling, 4)) for e in graph.edges}
    fields = {v: VertexField(*rng.uniform(-field, field, 2)) for v in graph.vertices()}
    return SpinSystem(graph, potentials, fields)


ACCEPTANCE_FAMILIES = ("cycle", "grid", "rr3", "rr4", "er")


def acceptance_instance(family: str, model: str, seed: int) -> SpinSystem:
    """One instance of the near-critical acceptance recipe.

    Graph from the named family with n in [4, 12]; coupling set to 0.9 times
    the critical value for max(3, max degree), sign flipped on half the
    draws; per-vertex fields uniform in [-1, 1].  Degree-0/1 graphs are
    redrawn so every instance has a meaningful degree bound.
    """
    rng = np.random.default_rng(seed)
    while True:
        topo_seed = int(rng.integers(2**32))
        if family == "cycle":
            graph = build_family_graph("cycle", n=int(rng.integers(4, 13)))
        elif family == "grid":
            shapes = [(2, 2), (2, 3), (2, 4), (3, 3), (2, 5), (3, 4)]
            rows, cols = shapes[int(rng.integers(len(shapes)))]
            graph = build_family_graph("grid", rows=rows, cols=cols)
        elif family == "rr3":
            n = int(rng.choice([4, 6, 8, 10, 12]))
            graph = build_family_graph("random_regular", n=n, degree=3, seed=topo_seed)
        elif family == "rr4":
            graph = build_family_graph(
                "random_regular", n=int(rng.integers(5, 13)), degree=4, seed=topo_seed
            )
        elif family == "er":
            graph = build_family_graph(
                "erdos_renyi",
                n=int(rng.integers(4, 13)),
                degree=float(rng.uniform(1.5, 3.0)),
                seed=topo_seed,
            )
        else:
            raise ValueError(f"unknown acceptance family {family!r}")
        if graph.max_degree() >= 2:
            break
    coupling = 0.9 * critical_inverse_temperature(max(3, graph.max_degree()))
    sign = 1.0 if rng.random() < 0.5 else -1.0
    if model == "ising":
        potentials = {e: ising_potential(sign * coupling) for e in graph.edges}
    elif model == "random":
        potentials = {
            e: EdgePotential(*rng.uniform(-coupling, coupling, 4)) for e in graph.edges
        }
    else:
        raise ValueError(f"unknown acceptance model {model!r}")
    fields = {}
    for v in graph.vertices():
        b = float(rng.uniform(-1.0, 1.0))
        fields[v] = VertexField(b, -b)
    return SpinSystem(graph, potentials, fields)
