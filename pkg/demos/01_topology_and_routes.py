"""
Constellation topology and the route universe
=============================================

Builds the 6 x 5 Walker-Star torus, looks at a few satellites and counts how
many hop-limited routes the LP would need if every one were a column.
"""
from stncg import build_walker_star, enumerate_routes, validate_topology

topo = build_walker_star(planes=6, sats_per_plane=5)
print(topo.n_satellites, "satellites,", len(topo.isl_edges), "ISLs, gateways", topo.gateways)
print("problems:", validate_topology(topo) or "none")

# every satellite has two in-plane and two cross-plane neighbours
for s in (1, 7, 30):
    print(f"  satellite {s:2d} -> {topo.neighbors(s)}")

# the SGL counts as a hop, so a ground route with budget 2 crosses at most one ISL
inter, ground = enumerate_routes(topo, 2, 2)
print(inter[:3], ground[:3])

print("\n H   inter-sat   ground    total")
for h in range(1, 6):
    inter, ground = enumerate_routes(topo, h, h)
    print(f"{h:2d} {len(inter):11d} {len(ground):8d} {len(inter) + len(ground):8d}")

# cutting the seam removes the wrap-around links and shrinks the universe
flat = build_walker_star(6, 5, seam_wrap=False)
print("\nwithout seam wrap, H=3:", sum(map(len, enumerate_routes(flat, 3, 3))), "routes")
