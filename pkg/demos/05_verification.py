"""The built-in verification suite, at reduced trial counts.

Every analytical ingredient of the estimator has a check against brute
force or direct sampling: the walk-tree marginal identity, the contraction
inequality behind the decay rate, the decay envelope itself, and the
telescoping product.  The full-strength versions run via `spinz verify`
or the acceptance tests; this script runs quick versions of each.
"""

from spinz import (
    check_contraction,
    check_decay_geometric,
    check_edge_factor_lipschitz,
    check_saw_identity_exhaustive,
    check_saw_identity_random,
    check_telescoping,
)

reports = [
    check_contraction(trials=20_000),
    check_edge_factor_lipschitz(trials=2_000),
    check_saw_identity_exhaustive(max_n=4, draws=5),
    check_saw_identity_random(instances=10),
    check_telescoping(instances=10),
]
reports += check_decay_geometric(pairs_per_radius=15, graph_count=1)

width = max(len(r.name) for r in reports)
for r in reports:
    flag = "ok" if r.passed else "FAIL"
    print(f"{r.name:<{width}}  trials={r.trials:<6}  "
          f"max_violation={r.max_violation:>10.3e}  [{flag}]")

failed = [r for r in reports if not r.passed]
print(f"\n{len(reports) - len(failed)}/{len(reports)} checks passed")
if failed:
    for r in failed:
        print(f"  {r.name}: worst case {r.worst_case}")
    raise SystemExit(1)
