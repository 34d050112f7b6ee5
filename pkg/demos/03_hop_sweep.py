"""
Objective versus hop limit
==========================

Averages column generation over 20 demand draws for each hop limit and
splits the computed data into the satellite-local, inter-satellite and
ground layers.
"""
from stncg.experiments import hop_sweep

rows = hop_sweep(h_values=range(6), seeds=range(20))
print(" H   objective   local   inter-sat  ground   gain")
for r in rows:
    print(
        f"{r['h']:2d} {r['objective']:11.3f} {r['local']:7.1f} {r['intersat']:9.1f}"
        f" {r['ground']:7.2f} {r['gain']:6.3f}"
    )

# past a few hops the network is saturated: longer routes add nothing
o = [r["objective"] for r in rows]
print("\nstep H=4 -> 5:", round(o[5] - o[4], 6))
