"""Load relaxation: how close is the traffic mix to the bandwidth ceiling?

Before committing to discrete routes, a quick linear program answers a
coarser question: splitting flow freely across all pairs, what is the best
achievable worst-case bandwidth utilization? A value above 1 means no
routing — fractional or not — can carry the demands, which makes the LP a
cheap early-warning diagnostic. The CLI exposes the same check as
`qostopo loadcheck`.
"""

import numpy as np

from qostopo import NetworkModel, Request, solve_load_lp

net = NetworkModel(
    np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]),
    max_power=10.0,
    bandwidth=4.0,
)

print("three collinear nodes, per-node bandwidth budget 4\n")

for demand in (1.0, 2.0, 5.0):
    res = solve_load_lp(net, [Request(0, 2, demand, 3)])
    flag = "OVERLOADED" if res.overloaded else "ok"
    print(f"demand {demand:>3g} end to end -> worst utilization {res.max_utilization:.3f}  [{flag}]")

# The flows behind the last verdict: a per-commodity matrix, arc by arc.
res = solve_load_lp(net, [Request(0, 2, 2.0, 3), Request(1, 0, 1.0, 3)])
print(f"\ntwo commodities together -> worst utilization {res.max_utilization:.3f}")
for (s, d), grid in sorted(res.flows.items()):
    print(f"  flow {s} -> {d}:")
    for i in range(net.node_count):
        for j in range(net.node_count):
            if grid[i, j] > 1e-9:
                print(f"    {i} -> {j}: {grid[i, j]:.3f}")

# Conservation, recomputed from the matrices: +demand at the source,
# -demand at the destination, zero elsewhere.
grid = res.flows[(0, 2)]
net_flow = grid.sum(axis=1) - grid.sum(axis=0)
print(f"\nnet flow per node for commodity (0, 2): {np.round(net_flow, 9)}")
