"""
Column generation against the DFS heuristic and local-only computing
====================================================================
"""
import numpy as np

from stncg import reference_scenario, run_column_generation, solve_dfs, solve_local_only
from stncg.baselines import check_feasibility

print(" H   colgen     DFS   local   cg>dfs")
for h in (1, 3, 5):
    cg, dfs, lo = [], [], []
    for seed in range(20):
        sc = reference_scenario(seed=seed, hops=(h, h))
        d = solve_dfs(sc)
        assert not check_feasibility(sc, d.local, d.flow_map)
        cg.append(run_column_generation(sc).objective)
        dfs.append(d.objective)
        lo.append(solve_local_only(sc))
    wins = sum(a - b > 1e-6 for a, b in zip(cg, dfs))
    print(f"{h:2d} {np.mean(cg):8.2f} {np.mean(dfs):7.2f} {np.mean(lo):7.2f}   {wins:2d}/20")

# heavier demand saturates every layer and the two methods meet
for mean in (10, 40, 100):
    sc = reference_scenario(seed=0, hops=(3, 3), mean=mean)
    print(f"mean {mean:3d}: colgen {run_column_generation(sc).objective:.2f}  DFS {solve_dfs(sc).objective:.2f}")
