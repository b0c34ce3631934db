from __future__ import annotations

import math

import numpy as np
import pytest

from spinz import (
    EdgePotential,
    Graph,
    Spin,
    SpinSystem,
    VertexField,
    critical_inverse_temperature,
    decay_condition_holds,
    decay_function,
    external_field,
    interaction_strength,
    ising_field,
    ising_potential,
    system_scalars,
)


def test_spin_values():
    assert int(Spin.PLUS) == 1
    assert int(Spin.MINUS) == -1
    assert -Spin.PLUS is Spin.MINUS
    assert -(-Spin.MINUS) is Spin.MINUS
    assert str(Spin.PLUS) == "+"
    assert str(Spin.MINUS) == "-"


def test_graph_construction_and_queries():
    g = Graph.from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
    assert g.n == 4
    assert g.edges == ((1, 2), (1, 4), (2, 3), (3, 4))
    assert g.neighbors(1) == (2, 4)
    assert g.degree(2) == 2
    assert g.max_degree() == 2
    assert g.has_edge(4, 3) and not g.has_edge(1, 3)
    assert list(g.vertices()) == [1, 2, 3, 4]
    assert g.is_connected()


def test_graph_edge_normalization():
    # order within a pair and between pairs must not matter
    a = Graph.from_edges(3, [(2, 1), (3, 2)])
    b = Graph.from_edges(3, [(2, 3), (1, 2)])
    assert a.edges == b.edges == ((1, 2), (2, 3))


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 2), (2, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 2)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 4)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(True, 2)])


def test_graph_distances():
    g = Graph.from_edges(5, [(1, 2), (2, 3), (3, 4)])
    d = g.distances_from(1)
    assert d == {1: 0, 2: 1, 3: 2, 4: 3}
    assert 5 not in d
    assert g.vertices_at_distance(1, 2) == (3,)
    assert g.vertices_at_distance(1, 9) == ()
    assert not g.is_connected()


def test_empty_and_single_vertex_graphs():
    empty = Graph.from_edges(0, [])
    assert empty.n == 0 and empty.edges == () and empty.is_connected()
    single = Graph.from_edges(1, [])
    assert single.max_degree() == 0 and single.is_connected()


def test_interaction_strength_examples():
    assert interaction_strength(ising_potential(0.3)) == pytest.approx(0.3, abs=1e-15)
    assert interaction_strength(EdgePotential(0, 0, 0, 0)) == 0.0
    assert interaction_strength(EdgePotential(1.0, 0.0, 0.0, 1.0)) == 0.5


def test_interaction_strength_transpose_invariance():
    rng = np.random.default_rng(0)
    for _ in range(100):
        p = EdgePotential(*rng.uniform(-3, 3, 4))
        assert interaction_strength(p.transposed()) == pytest.approx(
            interaction_strength(p), abs=1e-15
        )


def test_interaction_strength_shift_invariance():
    rng = np.random.default_rng(1)
    for _ in range(100):
        entries = rng.uniform(-3, 3, 4)
        shift = float(rng.uniform(-5, 5))
        p = EdgePotential(*entries)
        q = EdgePotential(*(entries + shift))
        assert interaction_strength(q) == pytest.approx(interaction_strength(p), abs=1e-12)
        f = VertexField(entries[0], entries[1])
        g = VertexField(entries[0] + shift, entries[1] + shift)
        assert external_field(g) == pytest.approx(external_field(f), abs=1e-12)


def test_external_field_examples():
    assert external_field(VertexField(0.7, 0.7)) == 0.0
    assert external_field(VertexField(1.0, 0.0)) == 0.5
    assert external_field(VertexField(-0.2, 0.4)) == pytest.approx(-0.3, abs=1e-15)


def test_potential_field_values():
    p = EdgePotential(1.0, 2.0, 3.0, 4.0)
    assert p.value(Spin.PLUS, Spin.PLUS) == 1.0
    assert p.value(Spin.PLUS, Spin.MINUS) == 2.0
    assert p.value(Spin.MINUS, Spin.PLUS) == 3.0
    assert p.value(Spin.MINUS, Spin.MINUS) == 4.0
    assert p.transposed().value(Spin.MINUS, Spin.PLUS) == 2.0
    f = VertexField(0.5, -0.25)
    assert f.value(Spin.PLUS) == 0.5
    assert f.value(Spin.MINUS) == -0.25


def test_potential_rejects_nonfinite():
    with pytest.raises(ValueError):
        EdgePotential(math.inf, 0, 0, 0)
    with pytest.raises(ValueError):
        VertexField(0.0, math.nan)


def test_critical_inverse_temperature_examples():
    assert critical_inverse_temperature(3) == pytest.approx(0.5493061443340549, abs=1e-15)
    assert critical_inverse_temperature(4) == pytest.approx(0.34657359027997264, abs=1e-15)
    assert critical_inverse_temperature(2) == math.inf
    assert critical_inverse_temperature(0) == math.inf


def test_critical_inverse_temperature_decreases():
    values = [critical_inverse_temperature(d) for d in range(3, 40)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert critical_inverse_temperature(10**6) < 1e-5


def test_decay_function_examples():
    assert decay_function(1, 0.7, 5) == pytest.approx(4 * 0.7 * 5, abs=1e-12)
    assert decay_function(4, 0.0, 3) == 0.0
    assert decay_function(3, 0.3, 3) == pytest.approx(1.2220277496965393, abs=1e-12)


def test_decay_function_decreasing_when_subcritical():
    values = [decay_function(t, 0.4, 3) for t in range(1, 12)]
    assert all(a > b for a, b in zip(values, values[1:]))


def _ising_system(graph: Graph, coupling: float, field: float = 0.0) -> SpinSystem:
    return SpinSystem(
        graph,
        {e: ising_potential(coupling) for e in graph.edges},
        {v: ising_field(field) for v in graph.vertices()},
    )


def test_system_scalars_decay_condition():
    g = Graph.from_edges(4, [(1, 2), (1, 3), (1, 4)])
    hold = system_scalars(_ising_system(g, 0.5))
    assert hold.degree_bound == 3
    assert hold.contraction == pytest.approx(0.9242343145200195, abs=1e-15)
    assert decay_condition_holds(hold)

    broken = system_scalars(_ising_system(g, 0.6))
    assert broken.contraction == pytest.approx(1.0740991339960706, abs=1e-15)
    assert not decay_condition_holds(broken)

    assert decay_condition_holds(system_scalars(_ising_system(g, 0.0)))


def test_system_scalars_fields_and_couplings():
    g = Graph.from_edges(2, [(1, 2)])
    sys_ = SpinSystem(
        g,
        {(1, 2): EdgePotential(1.0, 0.0, 0.0, 1.0)},
        {1: VertexField(1.0, 0.0), 2: VertexField(0.0, 0.0)},
    )
    scalars = system_scalars(sys_)
    assert scalars.interaction_by_edge[(1, 2)] == 0.5
    assert scalars.field_by_vertex[1] == 0.5
    assert scalars.field_by_vertex[2] == 0.0
    assert scalars.max_coupling == 0.5
    assert scalars.max_degree == 1


def test_system_scalars_degree_bound_override():
    g = Graph.from_edges(3, [(1, 2), (2, 3)])
    sys_ = _ising_system(g, 0.4)
    assert system_scalars(sys_).degree_bound == 2
    assert system_scalars(sys_, degree_bound=5).degree_bound == 5
    with pytest.raises(ValueError):
        system_scalars(sys_, degree_bound=1)


def test_spin_system_validates_keys():
    g = Graph.from_edges(2, [(1, 2)])
    with pytest.raises(ValueError):
        SpinSystem(g, {}, {1: VertexField(0, 0), 2: VertexField(0, 0)})
    with pytest.raises(ValueError):
        SpinSystem(
            g,
            {(2, 1): ising_potential(0.1)},
            {1: VertexField(0, 0), 2: VertexField(0, 0)},
        )
    with pytest.raises(ValueError):
        SpinSystem(g, {(1, 2): ising_potential(0.1)}, {1: VertexField(0, 0)})


def test_oriented_potential_transposes():
    g = Graph.from_edges(2, [(1, 2)])
    sys_ = SpinSystem(
        g,
        {(1, 2): EdgePotential(1.0, 2.0, 3.0, 4.0)},
        {1: VertexField(0, 0), 2: VertexField(0, 0)},
    )
    forward = sys_.oriented_potential(1, 2)
    backward = sys_.oriented_potential(2, 1)
    assert (forward.pp, forward.pm, forward.mp, forward.mm) == (1.0, 2.0, 3.0, 4.0)
    assert (backward.pp, backward.pm, backward.mp, backward.mm) == (1.0, 3.0, 2.0, 4.0)
