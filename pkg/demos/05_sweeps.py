"""Parameter sweeps: what the fairness threshold and demand load cost you.

A sweep replays the same replication seeds at every axis value, so the
curves below differ only in the swept knob. Tightening the fairness
threshold trades admissions for balance (lost requests up, variance
down); raising mean demand saturates node bandwidth and loses traffic
outright.
"""

from qostopo import ScenarioParams, sweep_lambda, sweep_threshold


def show(title, result, axis_label):
    print(title)
    print(f"  {axis_label:>10} | lost_mean | variance_mean | energy_mean")
    for p in result.points:
        axis = "none" if p.axis_value is None else f"{p.axis_value:g}"
        print(f"  {axis:>10} | {p.lost_mean:9.2f} | {p.variance_mean:13.4g} | {p.total_energy_mean:11.4g}")
    print()


params = ScenarioParams(
    node_count=6,
    region=(40.0, 40.0),
    path_loss_exponent=2.0,
    max_power=4000.0,
    bandwidth=12.0,
    request_rate=1.0,
    mean_demand=3.0,
    hop_bound=3,
    seed=11,
)

show(
    "fairness threshold sweep (5 replications each, None = no fairness constraint)",
    sweep_threshold(params, [200.0, 2000.0, None], replications=5),
    "threshold",
)

show(
    "mean demand sweep (5 replications each, bandwidth fixed at 12)",
    sweep_lambda(params, [1.0, 3.0, 8.0], replications=5),
    "demand",
)
