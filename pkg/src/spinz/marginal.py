"""Log-domain evaluation of the root marginal over a walk tree.

Everything is carried as the log of the plus/minus probability ratio.  The
extended values +inf and -inf are first-class and encode copies pinned to +
and -; NaN is always a bug and is rejected at the boundaries.  A free node
combines its children through

    log_ratio = 2 * field + sum over children of edge_factor_log(...)

and free leaves sitting exactly at the depth limit take the caller-supplied
frontier value instead (pinning the unexplored remainder of the graph).
"""

from __future__ import annotations

import math

from .core import EdgePotential, SpinSystem, external_field
from .sawtree import SawTree

__all__ = ["LogRatio", "edge_factor_log", "tree_log_ratio", "marginal_plus"]

LogRatio = float
"""Extended-real log of the plus/minus marginal ratio; +-inf encode pinned spins."""

_INF = math.inf


def edge_factor_log(potential: EdgePotential, child_log_ratio: float) -> float:
    """Log of the edge factor (a*R + b) / (c*R + d) for child ratio R.

    Here a, b, c, d exponentiate the table entries pp, pm, mp, mm read in
    orientation parent -> child, and R = exp(child_log_ratio).  The two
    pinned extremes reduce exactly: +inf gives pp - mp, -inf gives pm - mm.
    Output is finite for finite table entries, whatever the child value.
    """
    if math.isnan(child_log_ratio):
        raise ValueError("child log ratio must not be NaN")
    if child_log_ratio == _INF:
        return potential.pp - potential.mp
    if child_log_ratio == -_INF:
        return potential.pm - potential.mm
    return _logaddexp(potential.pp + child_log_ratio, potential.pm) - _logaddexp(
        potential.mp + child_log_ratio, potential.mm
    )


def _logaddexp(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def tree_log_ratio(system: SpinSystem, tree: SawTree, frontier: float = -_INF) -> float:
    """Evaluate the log ratio at the root of a walk tree built from ``system``.

    Args:
        system: the spin system the tree was built from.
        tree: a walk tree whose root is free.
        frontier: log ratio assigned to free leaves at the depth limit;
            the default -inf pins the unexplored region to minus.

    Evaluation is an explicit post-order sweep (no recursion), so tree depth
    is limited only by memory.  Trees are read-only here, and a single tree
    may be evaluated concurrently with different frontier values.
    """
    if math.isnan(frontier):
        raise ValueError("frontier value must not be NaN")
    root = tree.root
    if root.spin is not None:
        raise ValueError("tree root is pinned; the root marginal is not free")

    n = system.graph.n
    twice_field = [0.0] * (n + 1)
    for v in system.graph.vertices():
        twice_field[v] = 2.0 * external_field(system.fields[v])
    # Entries oriented parent -> child for both orientations of every edge.
    tables: dict[tuple[int, int], tuple[float, float, float, float]] = {}
    for (u, v), pot in system.potentials.items():
        tables[(u, v)] = (pot.pp, pot.pm, pot.mp, pot.mm)
        tables[(v, u)] = (pot.pp, pot.mp, pot.pm, pot.mm)

    depth_limit = tree.depth_limit
    inf = _INF
    log1p = math.log1p
    exp = math.exp
    values: dict[int, float] = {}

    stack: list[tuple] = [(root, False)]
    while stack:
        node, ready = stack.pop()
        if not ready:
            spin = node.spin
            if spin is not None:
                values[id(node)] = inf if spin > 0 else -inf
            elif not node.children:
                values[id(node)] = frontier if node.depth == depth_limit else twice_field[node.origin]
            else:
                stack.append((node, True))
                for child in node.children:
                    stack.append((child, False))
        else:
            origin = node.origin
            total = twice_field[origin]
            for child in node.children:
                pp, pm, mp, mm = tables[(origin, child.origin)]
                lam = values.pop(id(child))
                # Mirrors edge_factor_log; inlined to keep per-node cost low
                # on trees with millions of nodes.
                if lam == inf:
                    total += pp - mp
                elif lam == -inf:
                    total += pm - mm
                else:
                    a = pp + lam
                    b = pm
                    total += (a + log1p(exp(b - a))) if a >= b else (b + log1p(exp(a - b)))
                    a = mp + lam
                    b = mm
                    total -= (a + log1p(exp(b - a))) if a >= b else (b + log1p(exp(a - b)))
            values[id(node)] = total

    return values[id(root)]


def marginal_plus(log_ratio: float) -> float:
    """Probability of + from a log ratio: 1 / (1 + exp(-log_ratio)).

    Stable in both tails; maps +inf to 1.0 and -inf to 0.0.
    """
    if math.isnan(log_ratio):
        raise ValueError("log ratio must not be NaN")
    if log_ratio >= 0:
        return 1.0 / (1.0 + math.exp(-log_ratio))
    r = math.exp(log_ratio)
    return r / (1.0 + r)
