"""
Column generation on the reference instance
===========================================

Starts from an empty route pool, prices routes with hop-truncated
Bellman-Ford on the master duals, and checks the answer against the LP over
every enumerated route.
"""
from stncg import (
    audit_optimality,
    reference_scenario,
    run_column_generation,
    solve_full_enumeration,
)

sc = reference_scenario(seed=0, hops=(3, 3))
print("demand (Gbit/slot):", [round(d, 1) for d in sc.demands[:6]], "...")
print("compute capacity:", sc.compute_capacity[0])

res = run_column_generation(sc)
print(f"\nstatus {res.status} after {res.iterations} rounds, {res.wall_time * 1e3:.0f} ms")
for row in res.trace:
    print(f"  iter {row.iter:2d}  pool {row.n_columns:4d}  obj {row.objective:9.4f}  new {row.n_added}")

full = solve_full_enumeration(sc)
print(f"\nfull LP over {len(full.routes)} routes: {full.objective:.9f}")
print(f"column generation:            {res.objective:.9f}  ({res.n_activated} routes pooled)")

# no route in the whole universe has a violated dual constraint
rep = audit_optimality(sc, res)
print("audit:", "ok" if rep.ok else rep.violations[:5], "dual objective", round(rep.dual_objective, 9))

print("\ncomputed volume by layer:", {k: round(v, 2) for k, v in res.layer_volumes().items()})
busiest = sorted(res.flows.items(), key=lambda kv: -kv[1])[:5]
for route, f in busiest:
    print(f"  {f:6.2f}  {route}")
