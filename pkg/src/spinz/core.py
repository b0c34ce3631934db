"""Core types for two-state spin systems on finite graphs.

A spin system attaches a 2x2 table of pair log-weights to every edge and a
2-entry log-weight table to every vertex.  The scalars derived from those
tables (per-edge interaction strength, per-vertex external field, and their
extremes) decide whether the correlation-decay machinery in the rest of the
package applies, and how fast it converges.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "Spin",
    "Graph",
    "EdgePotential",
    "VertexField",
    "SpinSystem",
    "SystemScalars",
    "DecayConditionError",
    "interaction_strength",
    "external_field",
    "critical_inverse_temperature",
    "system_scalars",
    "decay_condition_holds",
    "decay_function",
    "ising_potential",
    "ising_field",
]


class Spin(enum.IntEnum):
    """A two-valued spin, +1 or -1."""

    PLUS = 1
    MINUS = -1

    def __neg__(self) -> "Spin":
        return Spin(-int(self))

    def __str__(self) -> str:
        return "+" if self is Spin.PLUS else "-"


class DecayConditionError(Exception):
    """The couplings are too strong for the contraction guarantee.

    Raised instead of silently producing an estimate without an accuracy
    guarantee.  Carries the offending contraction factor
    (degree_bound - 1) * tanh(max_coupling) and the scalars behind it.
    """

    def __init__(
        self,
        contraction: float,
        max_coupling: float | None = None,
        critical_coupling: float | None = None,
        degree_bound: int | None = None,
    ):
        self.contraction = contraction
        self.max_coupling = max_coupling
        self.critical_coupling = critical_coupling
        self.degree_bound = degree_bound
        super().__init__(
            f"decay condition violated: (degree_bound - 1) * tanh(max_coupling) = "
            f"{contraction:.6g} >= 1 (max_coupling={max_coupling}, "
            f"critical_coupling={critical_coupling}, degree_bound={degree_bound})"
        )


def _check_label(v, n: int) -> None:
    if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= n:
        raise ValueError(f"unknown vertex label {v!r} (valid labels are 1..{n})")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices labeled 1..n.

    Labels are contiguous and meaningful: the cycle-closing rule of the walk
    tree and the vertex sweep of the partition estimator both read them.
    Neighbor lists are kept sorted so that constructions iterating over them
    are deterministic.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] = ()) -> "Graph":
        """Build and validate a graph from (u, v) pairs in either orientation.

        Rejects labels outside 1..n, self-loops, and duplicate edges.
        """
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise ValueError(f"vertex count must be a nonnegative integer, got {n!r}")
        adjacency: list[list[int]] = [[] for _ in range(n)]
        normalized: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            _check_label(u, n)
            _check_label(v, n)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            normalized.append(key)
            adjacency[u - 1].append(v)
            adjacency[v - 1].append(u)
        normalized.sort()
        return cls(n, tuple(normalized), tuple(tuple(sorted(nbrs)) for nbrs in adjacency))

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        _check_label(v, self.n)
        return self.adjacency[v - 1]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        _check_label(u, self.n)
        _check_label(v, self.n)
        return v in self.adjacency[u - 1]

    def distances_from(self, v: int) -> dict[int, int]:
        """Breadth-first distances from v; unreachable vertices are absent."""
        _check_label(v, self.n)
        dist = {v: 0}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in self.adjacency[u - 1]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def vertices_at_distance(self, v: int, distance: int) -> tuple[int, ...]:
        """Sorted labels of vertices at graph distance exactly `distance` from v."""
        if distance < 0:
            raise ValueError("distance must be nonnegative")
        dist = self.distances_from(v)
        return tuple(sorted(u for u, d in dist.items() if d == distance))

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return len(self.distances_from(1)) == self.n


@dataclass(frozen=True)
class EdgePotential:
    """Log-weights of the four spin pairs across an edge.

    Entries are read in a fixed orientation (first endpoint, second endpoint):
    pp is (+, +), pm is (+, -), mp is (-, +), mm is (-, -).  The reverse
    orientation of the same edge is ``transposed()``.  All entries must be
    finite; hard constraints are out of scope.
    """

    pp: float
    pm: float
    mp: float
    mm: float

    def __post_init__(self):
        for name in ("pp", "pm", "mp", "mm"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"potential entry {name} must be a number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"potential entry {name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))

    def transposed(self) -> "EdgePotential":
        """The same table read with the endpoints swapped."""
        return EdgePotential(self.pp, self.mp, self.pm, self.mm)

    def value(self, first: Spin, second: Spin) -> float:
        first = Spin(first)
        second = Spin(second)
        if first is Spin.PLUS:
            return self.pp if second is Spin.PLUS else self.pm
        return self.mp if second is Spin.PLUS else self.mm


@dataclass(frozen=True)
class VertexField:
    """Log-weights of the two spins at a vertex."""

    h_plus: float
    h_minus: float

    def __post_init__(self):
        for name in ("h_plus", "h_minus"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"field entry {name} must be a number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"field entry {name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))

    def value(self, spin: Spin) -> float:
        return self.h_plus if Spin(spin) is Spin.PLUS else self.h_minus


@dataclass(frozen=True)
class SpinSystem:
    """A graph plus one potential per edge and one field per vertex.

    Potentials are keyed by (u, v) with u < v and read in that orientation;
    ``oriented_potential`` serves the reverse reading.  Instances are
    immutable, so they can be shared freely across worker threads.
    """

    graph: Graph
    potentials: Mapping[tuple[int, int], EdgePotential]
    fields: Mapping[int, VertexField]

    def __post_init__(self):
        expected = set(self.graph.edges)
        got = set(self.potentials)
        if got != expected:
            raise ValueError(
                "potential keys must be exactly the edge set keyed (u, v) with u < v; "
                f"missing={sorted(expected - got)}, unexpected={sorted(got - expected)}"
            )
        expected_v = set(self.graph.vertices())
        got_v = set(self.fields)
        if got_v != expected_v:
            raise ValueError(
                "field keys must be exactly the vertex set; "
                f"missing={sorted(expected_v - got_v)}, unexpected={sorted(got_v - expected_v)}"
            )
        object.__setattr__(self, "potentials", dict(self.potentials))
        object.__setattr__(self, "fields", dict(self.fields))

    @property
    def n(self) -> int:
        return self.graph.n

    def oriented_potential(self, u: int, v: int) -> EdgePotential:
        """Potential of edge {u, v} read in orientation u -> v."""
        key = (u, v) if u < v else (v, u)
        try:
            stored = self.potentials[key]
        except KeyError:
            raise ValueError(f"no edge between {u} and {v}") from None
        return stored if u < v else stored.transposed()

    def field(self, v: int) -> VertexField:
        _check_label(v, self.graph.n)
        return self.fields[v]


def interaction_strength(potential: EdgePotential) -> float:
    """Quarter alternating sum of the table entries.

    Zero means the edge factor is constant; the sign distinguishes
    aligning from anti-aligning edges.  Adding a constant to every entry
    leaves it unchanged.
    """
    return (potential.pp + potential.mm - potential.mp - potential.pm) / 4.0


def external_field(field: VertexField) -> float:
    """Half the spread between the two vertex log-weights."""
    return (field.h_plus - field.h_minus) / 2.0


def critical_inverse_temperature(degree: int) -> float:
    """Coupling threshold for a given degree: 0.5 * log(degree / (degree - 2)).

    Below this value the per-edge contraction factor (degree - 1) * tanh(J)
    stays under 1.  Degrees 2 and below never contract away, so the
    threshold is +inf there.
    """
    if isinstance(degree, bool) or not isinstance(degree, int) or degree < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {degree!r}")
    if degree <= 2:
        return math.inf
    return 0.5 * math.log(degree / (degree - 2))


@dataclass(frozen=True)
class SystemScalars:
    """Derived scalars of a system for a chosen degree bound."""

    interaction_by_edge: Mapping[tuple[int, int], float]
    field_by_vertex: Mapping[int, float]
    max_coupling: float
    max_degree: int
    degree_bound: int
    critical_coupling: float
    contraction: float


def system_scalars(system: SpinSystem, degree_bound: int | None = None) -> SystemScalars:
    """Compute per-edge couplings, per-vertex fields, and the contraction factor.

    Args:
        system: the spin system.
        degree_bound: degree parameter for the guarantees; defaults to the
            maximum degree of the graph and may be larger, never smaller.
    """
    interaction = {e: interaction_strength(p) for e, p in system.potentials.items()}
    fields = {v: external_field(system.fields[v]) for v in system.graph.vertices()}
    max_degree = system.graph.max_degree()
    if degree_bound is None:
        degree_bound = max_degree
    elif isinstance(degree_bound, bool) or not isinstance(degree_bound, int):
        raise ValueError(f"degree bound must be an integer, got {degree_bound!r}")
    elif degree_bound < max_degree:
        raise ValueError(
            f"degree bound {degree_bound} is below the maximum degree {max_degree}"
        )
    max_coupling = max((abs(j) for j in interaction.values()), default=0.0)
    contraction = (degree_bound - 1) * math.tanh(max_coupling)
    if contraction <= 0.0:
        contraction = 0.0
    return SystemScalars(
        interaction_by_edge=interaction,
        field_by_vertex=fields,
        max_coupling=max_coupling,
        max_degree=max_degree,
        degree_bound=degree_bound,
        critical_coupling=critical_inverse_temperature(degree_bound),
        contraction=contraction,
    )


def decay_condition_holds(scalars: SystemScalars) -> bool:
    """Whether the contraction factor is strictly below 1."""
    return scalars.contraction < 1.0


def decay_function(distance: int, coupling: float, degree: int) -> float:
    """Envelope on how far the root log-marginal can move when spins at a
    given distance change:

        4 * coupling * degree * ((degree - 1) * tanh(coupling)) ** (distance - 1)
    """
    if distance < 1:
        raise ValueError("distance must be at least 1")
    if coupling < 0:
        raise ValueError("coupling must be nonnegative")
    if degree < 1:
        raise ValueError("degree must be at least 1")
    rate = (degree - 1) * math.tanh(coupling)
    return 4.0 * coupling * degree * rate ** (distance - 1)


def ising_potential(coupling: float) -> EdgePotential:
    """Symmetric pair table coupling * s1 * s2."""
    return EdgePotential(coupling, -coupling, -coupling, coupling)


def ising_field(strength: float) -> VertexField:
    """Vertex table strength * s."""
    return VertexField(strength, -strength)
