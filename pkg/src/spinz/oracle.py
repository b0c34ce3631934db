"""Exact brute-force references and property checkers.

``exact_log_partition`` enumerates configurations (vectorized in chunks,
capped at 2**24 free vertices) and is the ground truth every approximation
in this package is judged against.  The ``check_*`` functions exercise the
quantitative guarantees at desk scale: the root-marginal identity of the
walk tree, the per-edge contraction inequality, the boundary-decay envelope,
and the telescoping product.  Each returns a CheckReport that fails exactly
when its worst violation exceeds its tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .core import (
    Graph,
    Spin,
    SpinSystem,
    decay_function,
    interaction_strength,
    system_scalars,
)
from .generate import attach_spin_model, build_family_graph, ising_system
from .marginal import edge_factor_log, marginal_plus, tree_log_ratio
from .partition import all_plus_log_weight
from .sawtree import Condition, build_saw_tree

__all__ = [
    "CheckReport",
    "exact_log_partition",
    "exact_conditional_marginal",
    "check_saw_identity",
    "check_contraction",
    "check_edge_factor_lipschitz",
    "check_decay_bound",
    "max_boundary_gap",
    "check_decay_geometric",
    "check_saw_identity_exhaustive",
    "check_saw_identity_random",
    "check_telescoping",
    "connected_graphs",
]

MAX_FREE_VERTICES = 24
_CHUNK = 1 << 18


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one property check; fails exactly when
    max_violation > tolerance.  worst_case fingerprints the offender."""

    name: str
    trials: int
    max_violation: float
    tolerance: float
    passed: bool
    worst_case: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "worst_case": self.worst_case,
        }


def _report(name: str, trials: int, max_violation, tolerance: float, worst_case: str) -> CheckReport:
    max_violation = float(max_violation)
    return CheckReport(
        name=name,
        trials=trials,
        max_violation=max_violation,
        tolerance=tolerance,
        passed=max_violation <= tolerance,
        worst_case=worst_case,
    )


def _as_condition(condition) -> Condition:
    return condition if isinstance(condition, Condition) else Condition(condition)


def exact_log_partition(system: SpinSystem, condition=None) -> float:
    """Exact log of the sum of configuration weights consistent with the
    condition, via chunked enumeration and a running log-sum-exp.

    Refuses more than 2**24 free vertices; this is a reference
    implementation, not an algorithm.
    """
    cond = _as_condition(condition)
    graph = system.graph
    for v in cond:
        if v > graph.n:
            raise ValueError(f"conditioned vertex {v} is not in the graph (n={graph.n})")
    free = [v for v in graph.vertices() if v not in cond]
    k = len(free)
    if k > MAX_FREE_VERTICES:
        raise ValueError(
            f"brute force refuses {k} free vertices (cap {MAX_FREE_VERTICES})"
        )
    position = {v: i for i, v in enumerate(free)}

    base = 0.0
    free_h = np.empty((k, 2))
    for v in graph.vertices():
        f = system.fields[v]
        i = position.get(v)
        if i is None:
            base += f.value(cond[v])
        else:
            free_h[i, 0] = f.h_minus
            free_h[i, 1] = f.h_plus

    both_free: list[tuple[int, int, np.ndarray]] = []
    half_free: list[tuple[int, np.ndarray]] = []
    for (u, v), pot in system.potentials.items():
        iu = position.get(u)
        iv = position.get(v)
        if iu is not None and iv is not None:
            table = np.array([[pot.mm, pot.mp], [pot.pm, pot.pp]])
            both_free.append((iu, iv, table))
        elif iu is None and iv is None:
            base += pot.value(cond[u], cond[v])
        elif iv is None:
            pinned = cond[v]
            table = np.array([pot.value(Spin.MINUS, pinned), pot.value(Spin.PLUS, pinned)])
            half_free.append((iu, table))
        else:
            pinned = cond[u]
            table = np.array([pot.value(pinned, Spin.MINUS), pot.value(pinned, Spin.PLUS)])
            half_free.append((iv, table))

    total = None
    count = 1 << k
    shifts = np.arange(k, dtype=np.uint64)
    columns = np.arange(k)
    for start in range(0, count, _CHUNK):
        stop = min(start + _CHUNK, count)
        index = np.arange(start, stop, dtype=np.uint64)
        bits = ((index[:, None] >> shifts) & 1).astype(np.intp)
        weights = np.full(stop - start, base)
        if k:
            weights += free_h[columns, bits].sum(axis=1)
        for iu, iv, table in both_free:
            weights += table[bits[:, iu], bits[:, iv]]
        for iv, table in half_free:
            weights += table[bits[:, iv]]
        piece = float(logsumexp(weights))
        total = piece if total is None else float(np.logaddexp(total, piece))
    return float(total)


def exact_conditional_marginal(system: SpinSystem, vertex: int, spin: Spin, condition=None) -> float:
    """Exact probability that ``vertex`` takes ``spin`` given the condition,
    as a ratio of two partition sums."""
    cond = _as_condition(condition)
    if vertex in cond:
        raise ValueError(f"vertex {vertex} is conditioned; its marginal is pinned")
    numerator = exact_log_partition(system, cond.assign(vertex, Spin(spin)))
    denominator = exact_log_partition(system, cond)
    return math.exp(numerator - denominator)


def check_saw_identity(system: SpinSystem, vertex: int, condition=None, tolerance: float = 1e-9) -> CheckReport:
    """Root marginal of the complete walk tree vs the exact marginal."""
    cond = _as_condition(condition)
    exact = exact_conditional_marginal(system, vertex, Spin.PLUS, cond)
    tree = build_saw_tree(system, vertex, system.graph.n, cond)
    walked = marginal_plus(tree_log_ratio(system, tree))
    gap = abs(exact - walked)
    worst = f"vertex={vertex} n={system.graph.n} condition={dict(cond)!r}"
    return _report("saw-marginal-identity", 1, gap, tolerance, worst)


def check_contraction(trials: int = 100_000, seed: int = 0, tolerance: float = 1e-12) -> CheckReport:
    """The per-edge contraction inequality on random positive tables.

    For g(x) = (a x + b) / (c x + d) with entries log-uniform in
    [e**-5, e**5], checks
        |log g(x) - log g(y)| <= s * |log x - log y|
    with s = |sqrt(ad) - sqrt(bc)| / (sqrt(ad) + sqrt(bc)), measuring the
    violation relative to max(1, right-hand side).
    """
    rng = np.random.default_rng(seed)
    logs = rng.uniform(-5.0, 5.0, size=(trials, 6))
    a, b, c, d, x, y = np.exp(logs.T)
    gx = (a * x + b) / (c * x + d)
    gy = (a * y + b) / (c * y + d)
    lhs = np.abs(np.log(gx) - np.log(gy))
    root_ad = np.sqrt(a * d)
    root_bc = np.sqrt(b * c)
    slope = np.abs(root_ad - root_bc) / (root_ad + root_bc)
    rhs = slope * np.abs(np.log(x) - np.log(y))
    violation = (lhs - rhs) / np.maximum(1.0, rhs)
    worst_index = int(np.argmax(violation))
    worst = (
        f"seed={seed} trial={worst_index} "
        f"log_entries={np.array2string(logs[worst_index], precision=6)}"
    )
    return _report("contraction-inequality", trials, violation[worst_index], tolerance, worst)


def check_edge_factor_lipschitz(trials: int = 10_000, seed: int = 0, tolerance: float = 1e-12) -> CheckReport:
    """edge_factor_log moves at most tanh(|interaction_strength|) per unit of
    child log ratio, measured over random tables and ratio pairs."""
    from .core import EdgePotential

    rng = np.random.default_rng(seed)
    entries = rng.uniform(-2.0, 2.0, size=(trials, 4))
    ratios = rng.uniform(-25.0, 25.0, size=(trials, 2))
    max_violation = -math.inf
    worst = ""
    for i in range(trials):
        potential = EdgePotential(*entries[i])
        slope = math.tanh(abs(interaction_strength(potential)))
        first, second = ratios[i]
        lhs = abs(edge_factor_log(potential, first) - edge_factor_log(potential, second))
        rhs = slope * abs(first - second)
        violation = (lhs - rhs) / max(1.0, rhs)
        if violation > max_violation:
            max_violation = violation
            worst = f"seed={seed} trial={i} entries={np.array2string(entries[i], precision=6)}"
    return _report("edge-factor-lipschitz", trials, max_violation, tolerance, worst)


def max_boundary_gap(system: SpinSystem, vertex: int, sphere, trials: int, rng) -> tuple[float, str]:
    """Largest |log p - log p'| at ``vertex`` over random spin-pair draws on
    the sphere, computed from exact partition sums."""
    worst = ""
    largest = 0.0
    sphere = list(sphere)
    for trial in range(trials):
        first = rng.integers(0, 2, len(sphere))
        second = rng.integers(0, 2, len(sphere))
        if np.array_equal(first, second):
            second = second.copy()
            second[0] ^= 1
        log_p = []
        for draw in (first, second):
            cond = Condition(
                {v: (Spin.PLUS if bit else Spin.MINUS) for v, bit in zip(sphere, draw)}
            )
            log_p.append(
                exact_log_partition(system, cond.assign(vertex, Spin.PLUS))
                - exact_log_partition(system, cond)
            )
        gap = abs(log_p[0] - log_p[1])
        if gap > largest:
            largest = gap
            worst = f"trial={trial}"
    return largest, worst


def check_decay_bound(
    system: SpinSystem,
    vertex: int,
    radius: int,
    trials: int = 100,
    seed: int = 0,
    degree_bound: int | None = None,
    tolerance: float = 1e-9,
) -> CheckReport:
    """Conditioning the sphere at ``radius`` moves the root log-marginal by
    at most the decay envelope; reports measured / envelope - 1."""
    scalars = system_scalars(system, degree_bound)
    sphere = system.graph.vertices_at_distance(vertex, radius)
    if not sphere:
        raise ValueError(f"no vertices at distance {radius} from vertex {vertex}")
    envelope = decay_function(radius, scalars.max_coupling, scalars.degree_bound)
    rng = np.random.default_rng(seed)
    measured, worst_trial = max_boundary_gap(system, vertex, sphere, trials, rng)
    if envelope > 0.0:
        violation = measured / envelope - 1.0
    else:
        violation = 0.0 if measured <= 1e-12 else math.inf
    worst = (
        f"vertex={vertex} radius={radius} measured={measured:.6e} "
        f"envelope={envelope:.6e} seed={seed} {worst_trial}"
    )
    return _report("boundary-decay-bound", trials, violation, tolerance, worst)


def check_decay_geometric(
    seed: int = 0,
    pairs_per_radius: int = 100,
    radii: tuple[int, ...] = (1, 2, 3),
    graph_count: int = 3,
    n: int = 10,
    degree: int = 3,
    coupling: float = 0.4,
    tolerance: float = 1e-9,
    ratio_slack: float = 0.1,
) -> list[CheckReport]:
    """Decay-envelope suite on regular graphs: per-radius envelope reports
    plus one geometric-decay report per graph (consecutive measured maxima
    shrink by at least the contraction factor plus slack)."""
    reports: list[CheckReport] = []
    found = 0
    attempt = 0
    deepest = max(radii)
    while found < graph_count:
        attempt += 1
        if attempt > 200:
            raise RuntimeError("could not find enough graphs with the required eccentricity")
        graph_seed = seed * 1000 + attempt
        graph = build_family_graph("random_regular", n=n, degree=degree, seed=graph_seed)
        root = None
        for v in graph.vertices():
            distances = graph.distances_from(v)
            if len(distances) == n and max(distances.values()) >= deepest:
                root = v
                break
        if root is None:
            continue
        system = ising_system(graph, coupling)
        scalars = system_scalars(system)
        rng = np.random.default_rng(graph_seed)
        measured: dict[int, float] = {}
        for radius in radii:
            sphere = graph.vertices_at_distance(root, radius)
            measured[radius], _ = max_boundary_gap(system, root, sphere, pairs_per_radius, rng)
            envelope = decay_function(radius, scalars.max_coupling, scalars.degree_bound)
            reports.append(
                _report(
                    "boundary-decay-bound",
                    pairs_per_radius,
                    measured[radius] / envelope - 1.0,
                    tolerance,
                    f"graph_seed={graph_seed} root={root} radius={radius} "
                    f"measured={measured[radius]:.6e} envelope={envelope:.6e}",
                )
            )
        threshold = scalars.contraction + ratio_slack
        worst_ratio = max(
            measured[radii[i + 1]] / measured[radii[i]] for i in range(len(radii) - 1)
        )
        reports.append(
            _report(
                "boundary-decay-geometric",
                len(radii) - 1,
                worst_ratio - threshold,
                0.0,
                f"graph_seed={graph_seed} root={root} worst_ratio={worst_ratio:.6f} "
                f"threshold={threshold:.6f}",
            )
        )
        found += 1
    return reports


def connected_graphs(n: int):
    """All labeled connected graphs on vertices 1..n, in edge-mask order."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
        graph = Graph.from_edges(n, edges)
        if graph.is_connected():
            yield graph


def _random_condition(rng, graph: Graph) -> Condition:
    assignment: dict[int, Spin] = {}
    for v in graph.vertices():
        roll = rng.random()
        if roll < 0.15:
            assignment[v] = Spin.PLUS
        elif roll < 0.30:
            assignment[v] = Spin.MINUS
    if len(assignment) == graph.n and assignment:
        del assignment[next(iter(assignment))]
    return Condition(assignment)


def check_saw_identity_exhaustive(
    max_n: int = 5,
    draws: int = 20,
    seed: int = 0,
    tolerance: float = 1e-9,
    coupling_bound: float = 1.0,
) -> CheckReport:
    """Walk-tree marginal identity over every connected graph up to max_n
    vertices, with random tables and conditions, checked at every free root."""
    rng = np.random.default_rng(seed)
    max_gap = 0.0
    worst = ""
    checked = 0
    for n in range(1, max_n + 1):
        for graph_index, graph in enumerate(connected_graphs(n)):
            for draw in range(draws):
                system = attach_spin_model(
                    graph, "random", coupling_bound, 1.0, seed=int(rng.integers(2**32))
                )
                cond = _random_condition(rng, graph)
                denominator = exact_log_partition(system, cond)
                for root in graph.vertices():
                    if root in cond:
                        continue
                    numerator = exact_log_partition(system, cond.assign(root, Spin.PLUS))
                    exact = math.exp(numerator - denominator)
                    tree = build_saw_tree(system, root, n, cond)
                    walked = marginal_plus(tree_log_ratio(system, tree))
                    gap = abs(exact - walked)
                    checked += 1
                    if gap > max_gap:
                        max_gap = gap
                        worst = f"n={n} graph={graph_index} draw={draw} root={root} seed={seed}"
    return _report("saw-marginal-identity-exhaustive", checked, max_gap, tolerance, worst)


def check_saw_identity_random(
    instances: int = 50,
    max_n: int = 10,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> CheckReport:
    """Walk-tree marginal identity on random sparse instances, every free root."""
    rng = np.random.default_rng(seed)
    max_gap = 0.0
    worst = ""
    checked = 0
    for instance in range(instances):
        system = _random_instance(rng, max_n=max_n, min_n=6)
        graph = system.graph
        cond = _random_condition(rng, graph)
        denominator = exact_log_partition(system, cond)
        for root in graph.vertices():
            if root in cond:
                continue
            numerator = exact_log_partition(system, cond.assign(root, Spin.PLUS))
            exact = math.exp(numerator - denominator)
            tree = build_saw_tree(system, root, graph.n, cond)
            walked = marginal_plus(tree_log_ratio(system, tree))
            gap = abs(exact - walked)
            checked += 1
            if gap > max_gap:
                max_gap = gap
                worst = f"instance={instance} root={root} n={graph.n} seed={seed}"
    return _report("saw-marginal-identity-random", checked, max_gap, tolerance, worst)


def check_telescoping(
    instances: int = 50,
    max_n: int = 12,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> CheckReport:
    """The all-plus weight divided by the exact sweep marginals reconstructs
    the exact partition sum."""
    rng = np.random.default_rng(seed)
    max_gap = 0.0
    worst = ""
    for instance in range(instances):
        system = _random_instance(rng, max_n=max_n)
        n = system.graph.n
        exact = exact_log_partition(system)
        log_factors = 0.0
        for vertex in range(1, n + 1):
            pinned_before = Condition({i: Spin.PLUS for i in range(1, vertex)})
            log_factors += exact_log_partition(
                system, pinned_before.assign(vertex, Spin.PLUS)
            ) - exact_log_partition(system, pinned_before)
        reconstructed = all_plus_log_weight(system) - log_factors
        gap = abs(reconstructed - exact)
        if gap > max_gap:
            max_gap = gap
            worst = f"instance={instance} n={n} seed={seed}"
    return _report("telescoping-product", instances, max_gap, tolerance, worst)


def _random_instance(rng, max_n: int = 12, min_n: int = 4) -> SpinSystem:
    n = int(rng.integers(min_n, max_n + 1))
    expected_degree = float(rng.uniform(1.0, 3.5))
    graph = build_family_graph(
        "erdos_renyi", n=n, degree=expected_degree, seed=int(rng.integers(2**32))
    )
    if rng.random() < 0.5:
        return attach_spin_model(
            graph, "random", float(rng.uniform(0.2, 1.2)), 1.0, seed=int(rng.integers(2**32))
        )
    return ising_system(graph, float(rng.uniform(-1.0, 1.0)), float(rng.uniform(-1.0, 1.0)))
