"""Seeded graph families, spin-model attachment, and the JSON file format.

Randomness comes from numpy's PCG64 behind named streams so outputs are
portable and reproducible: stream 0 draws topology (with the retry attempt
appended for the regular-graph pairing model), stream 1 draws potential
entries per edge in sorted edge order, stream 2 draws field entries per
vertex in label order.  Stream k of seed s is
``np.random.Generator(PCG64(SeedSequence(s, spawn_key=(k, ...))))``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    EdgePotential,
    Graph,
    SpinSystem,
    VertexField,
    ising_field,
    ising_potential,
)

__all__ = [
    "GenSpec",
    "GraphFileError",
    "generate",
    "build_family_graph",
    "attach_spin_model",
    "ising_system",
    "parse_system",
    "serialize_system",
    "load_system",
    "save_system",
]

SCHEMA_VERSION = 1

_STREAM_TOPOLOGY = 0
_STREAM_POTENTIALS = 1
_STREAM_FIELDS = 2

FAMILIES = ("path", "cycle", "grid", "complete", "random_regular", "erdos_renyi")
MODELS = ("ising", "random")


class GraphFileError(ValueError):
    """A graph file failed schema validation; the message names the spot."""


def _stream(seed: int, stream: int, *extra: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, *extra)))


@dataclass(frozen=True)
class GenSpec:
    """What to generate: a graph family, its size, a spin model, and a seed.

    ``coupling`` and ``field_strength`` are the ising parameters, or the
    entry bounds for the isotropic random model (entries uniform in
    [-coupling, coupling], field entries uniform in the field bound).
    """

    family: str
    n: int | None = None
    rows: int | None = None
    cols: int | None = None
    degree: float | None = None
    model: str = "ising"
    coupling: float = 0.0
    field_strength: float = 0.0
    seed: int = 0


def build_family_graph(
    family: str,
    *,
    n: int | None = None,
    rows: int | None = None,
    cols: int | None = None,
    degree: float | None = None,
    seed: int = 0,
) -> Graph:
    """Build one graph from a named family.

    path/cycle/complete take n; grid takes rows and cols; random_regular
    takes n and an integer degree (pairing model, resampled with a fresh
    sub-stream until simple); erdos_renyi takes n and an expected degree,
    including each pair independently with probability degree / n.
    """
    if family == "path":
        n = _require_count("n", n, minimum=1)
        return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])
    if family == "cycle":
        n = _require_count("n", n, minimum=3)
        edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
        return Graph.from_edges(n, edges)
    if family == "grid":
        rows = _require_count("rows", rows, minimum=1)
        cols = _require_count("cols", cols, minimum=1)
        edges = []
        for r in range(1, rows + 1):
            for c in range(1, cols + 1):
                label = (r - 1) * cols + c
                if c < cols:
                    edges.append((label, label + 1))
                if r < rows:
                    edges.append((label, label + cols))
        return Graph.from_edges(rows * cols, edges)
    if family == "complete":
        n = _require_count("n", n, minimum=1)
        return Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2))
    if family == "random_regular":
        n = _require_count("n", n, minimum=1)
        if degree is None or degree != int(degree):
            raise ValueError("random_regular requires an integer degree")
        d = int(degree)
        if not 0 <= d < n:
            raise ValueError(f"regular degree must satisfy 0 <= degree < n, got {d} with n={n}")
        if (n * d) % 2 != 0:
            raise ValueError(f"n * degree must be even, got n={n}, degree={d}")
        return _random_regular(n, d, seed)
    if family == "erdos_renyi":
        n = _require_count("n", n, minimum=0)
        if degree is None or degree < 0:
            raise ValueError("erdos_renyi requires a nonnegative expected degree")
        return _erdos_renyi(n, float(degree), seed)
    raise ValueError(f"unknown family {family!r} (choose from {', '.join(FAMILIES)})")


def _require_count(name: str, value, minimum: int) -> int:
    if value is None or isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value


def _random_regular(n: int, degree: int, seed: int) -> Graph:
    """Pairing model: shuffle n*degree stubs, pair consecutively, and retry
    on any self-loop or duplicate edge with an incremented sub-stream."""
    if degree == 0:
        return Graph.from_edges(n, [])
    for attempt in itertools.count():
        rng = _stream(seed, _STREAM_TOPOLOGY, attempt)
        stubs = np.repeat(np.arange(1, n + 1), degree)
        rng.shuffle(stubs)
        edges: set[tuple[int, int]] = set()
        simple = True
        for i in range(0, stubs.size, 2):
            u = int(stubs[i])
            v = int(stubs[i + 1])
            if u == v:
                simple = False
                break
            key = (u, v) if u < v else (v, u)
            if key in edges:
                simple = False
                break
            edges.add(key)
        if simple:
            return Graph.from_edges(n, sorted(edges))
    raise AssertionError("unreachable")


def _erdos_renyi(n: int, degree: float, seed: int) -> Graph:
    if n <= 1:
        return Graph.from_edges(n, [])
    p = min(1.0, degree / n)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    rng = _stream(seed, _STREAM_TOPOLOGY)
    keep = rng.random(len(pairs)) < p
    return Graph.from_edges(n, [pair for pair, hit in zip(pairs, keep) if hit])


def attach_spin_model(
    graph: Graph,
    model: str,
    coupling: float,
    field_strength: float,
    seed: int = 0,
) -> SpinSystem:
    """Decorate a graph with potentials and fields from a named model.

    ising: every edge gets the symmetric table for ``coupling`` and every
    vertex the field table for ``field_strength``.  random: each table entry
    is uniform in [-coupling, coupling] (which also bounds the interaction
    strength by ``coupling``) and each field entry uniform in
    [-field_strength, field_strength].
    """
    if model == "ising":
        potentials = {e: ising_potential(coupling) for e in graph.edges}
        fields = {v: ising_field(field_strength) for v in graph.vertices()}
    elif model == "random":
        if coupling < 0 or field_strength < 0:
            raise ValueError("random-model bounds must be nonnegative")
        rng_p = _stream(seed, _STREAM_POTENTIALS)
        potentials = {
            e: EdgePotential(*rng_p.uniform(-coupling, coupling, 4)) for e in graph.edges
        }
        rng_f = _stream(seed, _STREAM_FIELDS)
        fields = {
            v: VertexField(*rng_f.uniform(-field_strength, field_strength, 2))
            for v in graph.vertices()
        }
    else:
        raise ValueError(f"unknown model {model!r} (choose from {', '.join(MODELS)})")
    return SpinSystem(graph, potentials, fields)


def ising_system(graph: Graph, coupling: float, field_strength: float = 0.0) -> SpinSystem:
    """Shorthand for attach_spin_model(graph, "ising", ...)."""
    return attach_spin_model(graph, "ising", coupling, field_strength)


def generate(spec: GenSpec) -> SpinSystem:
    """Generate the system a GenSpec describes; same spec, same system."""
    graph = build_family_graph(
        spec.family,
        n=spec.n,
        rows=spec.rows,
        cols=spec.cols,
        degree=spec.degree,
        seed=spec.seed,
    )
    return attach_spin_model(graph, spec.model, spec.coupling, spec.field_strength, spec.seed)


def _require_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GraphFileError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise GraphFileError(f"{where}: expected a finite number, got {value!r}")
    return float(value)


def _require_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphFileError(f"{where}: expected an integer, got {value!r}")
    return value


def parse_system(text: str) -> SpinSystem:
    """Parse the JSON graph format into a SpinSystem.

    The format lists vertices (with field tables) and edges (with potential
    tables); an optional ising shorthand supplies tables for entries that
    omit them.  Vertex ids must be exactly 1..n; files with gaps or
    duplicates are rejected rather than relabeled.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise GraphFileError("top level: expected an object")
    if "schema_version" not in data:
        raise GraphFileError("top level: missing schema_version")
    if data["schema_version"] != SCHEMA_VERSION:
        raise GraphFileError(
            f"schema_version: expected {SCHEMA_VERSION}, got {data['schema_version']!r}"
        )

    shorthand = data.get("model")
    default_potential = default_field = None
    if shorthand is not None:
        if shorthand != "ising":
            raise GraphFileError(f"model: expected 'ising', got {shorthand!r}")
        coupling = _require_number(data.get("J"), "J")
        strength = _require_number(data.get("B"), "B")
        default_potential = ising_potential(coupling)
        default_field = ising_field(strength)

    raw_vertices = data.get("vertices")
    if not isinstance(raw_vertices, list):
        raise GraphFileError("vertices: expected a list")
    raw_edges = data.get("edges")
    if not isinstance(raw_edges, list):
        raise GraphFileError("edges: expected a list")

    n = len(raw_vertices)
    fields: dict[int, VertexField] = {}
    for i, entry in enumerate(raw_vertices):
        where = f"vertices[{i}]"
        if not isinstance(entry, dict):
            raise GraphFileError(f"{where}: expected an object")
        vid = _require_int(entry.get("id"), f"{where}.id")
        if not 1 <= vid <= n:
            raise GraphFileError(
                f"{where}.id: ids must be exactly 1..{n} with no gaps, got {vid}"
            )
        if vid in fields:
            raise GraphFileError(f"{where}.id: duplicate vertex id {vid}")
        if "h_plus" in entry or "h_minus" in entry:
            fields[vid] = VertexField(
                _require_number(entry.get("h_plus"), f"{where}.h_plus"),
                _require_number(entry.get("h_minus"), f"{where}.h_minus"),
            )
        elif default_field is not None:
            fields[vid] = default_field
        else:
            raise GraphFileError(f"{where}: missing h_plus/h_minus and no model shorthand")

    edges: list[tuple[int, int]] = []
    potentials: dict[tuple[int, int], EdgePotential] = {}
    for i, entry in enumerate(raw_edges):
        where = f"edges[{i}]"
        if not isinstance(entry, dict):
            raise GraphFileError(f"{where}: expected an object")
        u = _require_int(entry.get("u"), f"{where}.u")
        v = _require_int(entry.get("v"), f"{where}.v")
        if not 1 <= u <= n or not 1 <= v <= n:
            raise GraphFileError(f"{where}: endpoint outside 1..{n}")
        if u == v:
            raise GraphFileError(f"{where}: self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in potentials:
            raise GraphFileError(f"{where}: duplicate edge {key}")
        beta = entry.get("beta")
        if beta is not None:
            if not isinstance(beta, dict):
                raise GraphFileError(f"{where}.beta: expected an object")
            table = EdgePotential(
                _require_number(beta.get("pp"), f"{where}.beta.pp"),
                _require_number(beta.get("pm"), f"{where}.beta.pm"),
                _require_number(beta.get("mp"), f"{where}.beta.mp"),
                _require_number(beta.get("mm"), f"{where}.beta.mm"),
            )
            # Tables are stored for (min, max); reorient if given as (v, u).
            potentials[key] = table if u < v else table.transposed()
        elif default_potential is not None:
            potentials[key] = default_potential
        else:
            raise GraphFileError(f"{where}: missing beta and no model shorthand")
        edges.append(key)

    graph = Graph.from_edges(n, edges)
    return SpinSystem(graph, potentials, fields)


def serialize_system(system: SpinSystem) -> str:
    """Render a SpinSystem in the full JSON form; parse_system inverts this
    exactly (float values round-trip bit-for-bit)."""
    payload = {
        "schema_version": SCHEMA_VERSION,
        "vertices": [
            {
                "id": v,
                "h_plus": system.fields[v].h_plus,
                "h_minus": system.fields[v].h_minus,
            }
            for v in system.graph.vertices()
        ],
        "edges": [
            {
                "u": u,
                "v": v,
                "beta": {
                    "pp": system.potentials[(u, v)].pp,
                    "pm": system.potentials[(u, v)].pm,
                    "mp": system.potentials[(u, v)].mp,
                    "mm": system.potentials[(u, v)].mm,
                },
            }
            for (u, v) in system.graph.edges
        ],
    }
    return json.dumps(payload, indent=2)


def load_system(path) -> SpinSystem:
    with open(path, encoding="utf-8") as handle:
        return parse_system(handle.read())


def save_system(system: SpinSystem, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(serialize_system(system))
        handle.write("\n")
