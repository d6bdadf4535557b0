"""Optimization models for load balancing and energy-aware topology control.

Two models over a :class:`~qostopo.network.NetworkModel` and a set of
traffic requests:

* a load-balancing LP that routes every demand fractionally over all node
  pairs and minimizes the worst per-node bandwidth utilization (a node's
  channel is occupied by the flow it forwards in either direction plus the
  demand it originates or terminates);
* a topology-control MILP that switches directed links on (respecting
  link symmetry and the broadcast property: reaching a node implies
  reaching every closer node), picks one unsplittable route per request,
  and minimizes the maximum per-link transmission energy subject to
  per-request hop bounds, per-node bandwidth, and — optionally — an
  energy-fairness cap that keeps every node's cumulative consumption
  within a threshold of the network average (counting the energy the
  candidate routes would add).

Solver output is decoded into plain topologies and node paths and then
re-validated from scratch against every constraint; a failed re-check is
reported as :class:`ValidationError`, signalling a bug rather than an
infeasible instance. Requests that admit no feasible route are "lost":
reported as such with zero energy committed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .milp import (
    FEASIBILITY_TOL,
    INTEGRALITY_TOL,
    MilpModel,
    ModelError,
    Solution,
    SolveLimits,
    Status,
    check_solution,
    solve,
)
from .network import NetworkModel

__all__ = [
    "Request",
    "EnergyLedger",
    "LoadLpResult",
    "TopologySolution",
    "ValidationError",
    "SolverLimitError",
    "build_load_lp",
    "solve_load_lp",
    "build_topology_milp",
    "solve_single_request",
    "decode_and_validate",
]


class ValidationError(Exception):
    """A decoded solution failed the independent constraint re-check.

    Raised for internal inconsistencies (solver output violating the model
    it was given), never for legitimately infeasible instances.
    """


class SolverLimitError(Exception):
    """The solver hit its node/iteration budget before reaching an answer."""


@dataclass(frozen=True)
class Request:
    """One unsplittable traffic demand from ``sender`` to ``receiver``.

    ``demand`` is the bandwidth the request occupies, ``hop_bound`` the
    maximum number of links its route may use.
    """

    sender: int
    receiver: int
    demand: float
    hop_bound: int

    def __post_init__(self):
        for label, node in (("sender", self.sender), ("receiver", self.receiver)):
            if not (isinstance(node, int) and node >= 0):
                raise ValueError(f"{label} must be a nonnegative integer, got {node!r}")
        if self.sender == self.receiver:
            raise ValueError("sender and receiver must differ")
        if not (isinstance(self.demand, (int, float)) and math.isfinite(self.demand) and self.demand > 0):
            raise ValueError(f"demand must be positive and finite, got {self.demand!r}")
        if not (isinstance(self.hop_bound, int) and self.hop_bound >= 1):
            raise ValueError(f"hop_bound must be an integer >= 1, got {self.hop_bound!r}")


class EnergyLedger:
    """Cumulative transmission energy spent by each node."""

    def __init__(self, consumed):
        arr = np.array(consumed, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("consumed must be a non-empty 1-d array")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("consumed entries must be finite and >= 0")
        self.consumed = arr

    @classmethod
    def empty(cls, node_count: int) -> "EnergyLedger":
        return cls(np.zeros(int(node_count)))

    @property
    def node_count(self) -> int:
        return self.consumed.size

    def average(self) -> float:
        return float(self.consumed.mean())

    def total(self) -> float:
        return float(self.consumed.sum())

    def charge(self, amounts) -> None:
        """Add per-node energy increments (all >= 0) to the ledger."""
        inc = np.asarray(amounts, dtype=float)
        if inc.shape != self.consumed.shape:
            raise ValueError(f"expected {self.consumed.shape[0]} increments, got shape {inc.shape}")
        if not np.all(np.isfinite(inc)) or np.any(inc < 0):
            raise ValueError("increments must be finite and >= 0")
        self.consumed = self.consumed + inc

    def copy(self) -> "EnergyLedger":
        return EnergyLedger(self.consumed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EnergyLedger):
            return NotImplemented
        return np.array_equal(self.consumed, other.consumed)

    def __repr__(self) -> str:
        return f"EnergyLedger({self.consumed.tolist()!r})"


@dataclass(eq=False)
class LoadLpResult:
    """Solved load LP: worst utilization plus the optimal flow assignment.

    ``flows`` maps each commodity (sender, receiver) to an n-by-n matrix of
    per-arc flow. ``max_utilization`` > 1 means some node needs more channel
    capacity than it has.
    """

    max_utilization: float
    flows: dict[tuple[int, int], np.ndarray]

    @property
    def overloaded(self) -> bool:
        return self.max_utilization > 1.0

    def flow(self, sender: int, receiver: int, i: int, j: int) -> float:
        return float(self.flows[(sender, receiver)][i, j])


@dataclass(eq=False)
class TopologySolution:
    """Decoded topology MILP output.

    ``links`` holds the enabled directed links, ``routes`` one node path per
    request (``None`` when the request is lost), ``node_energy`` the
    incremental transmission energy each node commits for these routes, and
    ``max_energy`` the minimized per-link transmission-energy cap.
    ``resource_limited`` distinguishes a loss forced by a solver budget from
    a genuinely infeasible request.
    """

    max_energy: float
    links: set[tuple[int, int]]
    routes: list[list[int] | None]
    node_energy: np.ndarray
    resource_limited: bool = False

    @property
    def lost(self) -> bool:
        return any(r is None for r in self.routes)


# ---------------------------------------------------------------------------
# shared layout helpers
#
# Both models index flow/indicator variables by ordered node pairs in
# lexicographic order; builders and the decoder below rely on this single
# definition staying put.


def _ordered_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def _check_requests(net: NetworkModel, requests: Iterable[Request]) -> list[Request]:
    reqs = list(requests)
    n = net.node_count
    for r in reqs:
        if not (0 <= r.sender < n and 0 <= r.receiver < n):
            raise ModelError(f"request endpoints ({r.sender}, {r.receiver}) outside 0..{n - 1}")
    return reqs


# ---------------------------------------------------------------------------
# load-balancing LP


def _merge_commodities(requests: list[Request]) -> list[tuple[int, int, float]]:
    # Fractional flow is additive, so same-endpoint requests pool into one
    # commodity with the summed demand.
    demand: dict[tuple[int, int], float] = {}
    for r in requests:
        key = (r.sender, r.receiver)
        demand[key] = demand.get(key, 0.0) + float(r.demand)
    return [(s, d, demand[(s, d)]) for (s, d) in sorted(demand)]


def build_load_lp(net: NetworkModel, requests: list[Request]) -> MilpModel:
    """Build the LP minimizing the worst per-node bandwidth utilization.

    Variables: one utilization bound, then per commodity (duplicate
    endpoint pairs merged) a flow variable per ordered node pair, with
    arcs into the sender and out of the receiver fixed to zero. Rows: flow
    conservation (net outflow = +demand at the sender, -demand at the
    receiver, 0 elsewhere) per commodity and node, then one load row per
    node: forwarded flow in both directions plus originated/terminated
    demand, at most bandwidth times the utilization bound.
    """
    reqs = _check_requests(net, requests)
    n = net.node_count
    pairs = _ordered_pairs(n)
    commodities = _merge_commodities(reqs)

    model = MilpModel()
    util = model.add_continuous(0.0, math.inf)
    model.set_objective({util: 1.0})

    flow_id: dict[tuple[int, int, int, int], int] = {}
    for s, d, _ in commodities:
        for i, j in pairs:
            blocked = j == s or i == d
            var = model.add_continuous(0.0, 0.0 if blocked else math.inf)
            flow_id[(s, d, i, j)] = var

    for s, d, lam in commodities:
        for v in range(n):
            coeffs: dict[int, float] = {}
            for j in range(n):
                if j == v:
                    continue
                coeffs[flow_id[(s, d, v, j)]] = 1.0
                coeffs[flow_id[(s, d, j, v)]] = -1.0
            rhs = lam if v == s else -lam if v == d else 0.0
            model.add_constraint(coeffs, "=", rhs)

    for v in range(n):
        coeffs = {}
        endpoint_demand = 0.0
        for s, d, lam in commodities:
            for j in range(n):
                if j == v:
                    continue
                coeffs[flow_id[(s, d, v, j)]] = 1.0
                coeffs[flow_id[(s, d, j, v)]] = 1.0
            if v == s:
                endpoint_demand += lam
            if v == d:
                endpoint_demand += lam
        coeffs[util] = -net.bandwidth
        model.add_constraint(coeffs, "<=", -endpoint_demand)

    return model


def solve_load_lp(
    net: NetworkModel,
    requests: list[Request],
    limits: SolveLimits | None = None,
) -> LoadLpResult:
    """Solve the load LP and decode per-commodity flow matrices.

    The solution is re-checked against every row before being returned.
    Raises :class:`SolverLimitError` if the iteration budget runs out and
    :class:`ValidationError` on any internal inconsistency (the LP is
    feasible and bounded for every valid input).
    """
    reqs = _check_requests(net, requests)
    model = build_load_lp(net, reqs)
    sol = solve(model, limits)
    if sol.status is Status.RESOURCE_LIMIT:
        raise SolverLimitError("load LP hit the iteration limit")
    if sol.status is not Status.OPTIMAL:
        raise ValidationError(f"load LP unexpectedly {sol.status.value}")
    problems = check_solution(model, sol.values)
    if problems:
        raise ValidationError("load LP solution failed re-check: " + "; ".join(problems))

    n = net.node_count
    commodities = _merge_commodities(reqs)
    flows: dict[tuple[int, int], np.ndarray] = {}
    offset = 1
    for s, d, _ in commodities:
        mat = np.zeros((n, n))
        for (i, j) in _ordered_pairs(n):
            mat[i, j] = sol.values[offset]
            offset += 1
        flows[(s, d)] = mat
    return LoadLpResult(max_utilization=float(sol.values[0]), flows=flows)


# ---------------------------------------------------------------------------
# topology-control MILP


def build_topology_milp(
    net: NetworkModel,
    requests: list[Request],
    ledger: EnergyLedger,
    threshold: float | None,
) -> MilpModel:
    """Build the MILP minimizing the maximum per-link transmission energy.

    Variables: the energy cap (continuous in [0, max_power]), one link
    indicator per ordered node pair, and one route-arc indicator per
    ordered pair per request. Rows, in order: link symmetry; the broadcast
    ordering (using a link forces every link from the same node to a
    nearer target); the cap dominating every enabled link's energy; per
    request a hop-count row, route-arc/link coupling, and unit route
    conservation; a per-node bandwidth row; and, when ``threshold`` is not
    None, a per-node fairness row keeping cumulative consumption (ledger
    plus the energy the candidate routes add) within ``threshold`` of the
    network average.
    """
    reqs = _check_requests(net, requests)
    n = net.node_count
    if ledger.node_count != n:
        raise ModelError(f"ledger covers {ledger.node_count} nodes, network has {n}")
    if threshold is not None and not math.isfinite(threshold):
        raise ModelError(f"threshold must be finite or None, got {threshold!r}")

    pairs = _ordered_pairs(n)
    dist = net.distance_matrix
    energy = net.energy_matrix

    model = MilpModel()
    cap = model.add_continuous(0.0, net.max_power)
    model.set_objective({cap: 1.0})
    link = {pair: model.add_binary() for pair in pairs}
    arc = [{pair: model.add_binary() for pair in pairs} for _ in reqs]

    for i in range(n):
        for j in range(i + 1, n):
            model.add_constraint({link[(i, j)]: 1.0, link[(j, i)]: -1.0}, "=", 0.0)

    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            for k in range(n):
                if k == i or k == j:
                    continue
                if dist[i, k] <= dist[i, j]:
                    model.add_constraint({link[(i, j)]: 1.0, link[(i, k)]: -1.0}, "<=", 0.0)

    for i in range(n):
        for j in range(i + 1, n):
            model.add_constraint({link[(i, j)]: energy[i, j], cap: -1.0}, "<=", 0.0)

    for r, req in enumerate(reqs):
        model.add_constraint({arc[r][pair]: 1.0 for pair in pairs}, "<=", float(req.hop_bound))
        for pair in pairs:
            model.add_constraint({arc[r][pair]: 1.0, link[pair]: -1.0}, "<=", 0.0)
        for v in range(n):
            coeffs = {}
            for j in range(n):
                if j == v:
                    continue
                coeffs[arc[r][(v, j)]] = 1.0
                coeffs[arc[r][(j, v)]] = -1.0
            rhs = 1.0 if v == req.sender else -1.0 if v == req.receiver else 0.0
            model.add_constraint(coeffs, "=", rhs)

    for v in range(n):
        coeffs = {}
        for r, req in enumerate(reqs):
            for j in range(n):
                if j == v:
                    continue
                coeffs[arc[r][(v, j)]] = coeffs.get(arc[r][(v, j)], 0.0) + req.demand
                coeffs[arc[r][(j, v)]] = coeffs.get(arc[r][(j, v)], 0.0) + req.demand
        model.add_constraint(coeffs, "<=", net.bandwidth)

    if threshold is not None:
        mean_consumed = ledger.average()
        for v in range(n):
            coeffs = {}
            for r, req in enumerate(reqs):
                for (i, j) in pairs:
                    weight = req.demand * energy[i, j]
                    share = (1.0 if i == v else 0.0) - 1.0 / n
                    coeffs[arc[r][(i, j)]] = coeffs.get(arc[r][(i, j)], 0.0) + weight * share
            rhs = threshold - float(ledger.consumed[v]) + mean_consumed
            model.add_constraint(coeffs, "<=", rhs)

    return model


def _bfs_path(n: int, arcs: set[tuple[int, int]], start: int, goal: int) -> list[int] | None:
    # Fewest-hop walk through the arc set; visiting order is deterministic
    # (ascending neighbors), and any off-path cycles are dropped implicitly.
    out: dict[int, list[int]] = {v: [] for v in range(n)}
    for i, j in sorted(arcs):
        out[i].append(j)
    parent: dict[int, int] = {start: start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w in out[v]:
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        if goal in parent:
            break
        frontier = nxt
    if goal not in parent:
        return None
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def decode_and_validate(
    net: NetworkModel,
    requests: list[Request],
    ledger: EnergyLedger,
    threshold: float | None,
    raw: Solution,
) -> TopologySolution:
    """Turn an optimal solver result into links and routes, then re-verify.

    Every structural constraint is re-checked directly from the decoded
    links and paths (not from solver values): symmetry, broadcast ordering,
    the energy cap, hop bounds before and after cycle stripping, arc/link
    coupling, exact unit conservation, bandwidth, and the fairness row.
    Raises :class:`ValidationError` with all violations on failure.
    """
    if raw.status is not Status.OPTIMAL:
        raise ValidationError(f"cannot decode a solution with status {raw.status.value}")
    reqs = _check_requests(net, requests)
    n = net.node_count
    pairs = _ordered_pairs(n)
    m = len(pairs)
    values = raw.values
    expected = 1 + m * (1 + len(reqs))
    if values is None or values.shape != (expected,):
        raise ValidationError("solution vector does not match the model layout")

    problems: list[str] = []
    for idx in range(1, expected):
        if min(abs(values[idx]), abs(values[idx] - 1.0)) > INTEGRALITY_TOL:
            problems.append(f"indicator variable {idx} = {values[idx]} is not integral")
    if problems:
        raise ValidationError("; ".join(problems))

    raw_cap = float(values[0])
    links = {pair for k, pair in enumerate(pairs) if values[1 + k] > 0.5}
    route_arcs = []
    for r in range(len(reqs)):
        base = 1 + m * (1 + r)
        route_arcs.append({pair for k, pair in enumerate(pairs) if values[base + k] > 0.5})

    dist = net.distance_matrix
    energy = net.energy_matrix

    for i in range(n):
        for j in range(i + 1, n):
            if ((i, j) in links) != ((j, i) in links):
                problems.append(f"link ({i},{j}) enabled in one direction only")
    for i, j in links:
        for k in range(n):
            if k != i and k != j and dist[i, k] <= dist[i, j] and (i, k) not in links:
                problems.append(f"link ({i},{j}) on but nearer ({i},{k}) off")

    # Report the energy cap recomputed exactly from the enabled links; the
    # solver's own objective value may sit a rounding error away. Tolerances
    # on re-checks with energy-scaled coefficients are relative to that scale.
    cap = max((float(energy[i, j]) for i, j in links), default=0.0)
    if abs(raw_cap - cap) > FEASIBILITY_TOL * max(1.0, cap):
        problems.append(f"solver cap {raw_cap} does not match enabled links (need {cap})")
    if cap > net.max_power + FEASIBILITY_TOL * max(1.0, net.max_power):
        problems.append(f"energy cap {cap} exceeds the power limit {net.max_power}")

    routes: list[list[int] | None] = []
    increments = np.zeros(n)
    for r, req in enumerate(reqs):
        arcs = route_arcs[r]
        if len(arcs) > req.hop_bound:
            problems.append(f"request {r}: {len(arcs)} route arcs exceed the hop bound {req.hop_bound}")
        missing = arcs - links
        if missing:
            problems.append(f"request {r}: route arcs {sorted(missing)} use disabled links")
        balance = np.zeros(n, dtype=int)
        for i, j in arcs:
            balance[i] += 1
            balance[j] -= 1
        for v in range(n):
            want = 1 if v == req.sender else -1 if v == req.receiver else 0
            if balance[v] != want:
                problems.append(f"request {r}: node {v} route balance {balance[v]} != {want}")
        path = _bfs_path(n, arcs, req.sender, req.receiver)
        if path is None:
            problems.append(f"request {r}: no walk from {req.sender} to {req.receiver} in its arcs")
            routes.append(None)
            continue
        if len(path) - 1 > req.hop_bound:
            problems.append(f"request {r}: decoded path has {len(path) - 1} hops > {req.hop_bound}")
        for i, j in zip(path, path[1:]):
            increments[i] += req.demand * energy[i, j]
        routes.append(path)

    occupancy = np.zeros(n)
    for req, path in zip(reqs, routes):
        if path is None:
            continue
        for i, j in zip(path, path[1:]):
            occupancy[i] += req.demand
            occupancy[j] += req.demand
    slack = FEASIBILITY_TOL * max(1.0, net.bandwidth)
    for v in range(n):
        if occupancy[v] > net.bandwidth + slack:
            problems.append(f"node {v} route occupancy {occupancy[v]} exceeds bandwidth {net.bandwidth}")

    if threshold is not None:
        # The fairness row certifies the full arc sets the solver returned,
        # stray cycles included (extra arcs raise the average too, so they
        # can be load-bearing for feasibility); re-check exactly that. The
        # committed routes are the stripped paths, which only remove energy.
        raw_increments = np.zeros(n)
        for r, req in enumerate(reqs):
            for i, j in route_arcs[r]:
                raw_increments[i] += req.demand * energy[i, j]
        combined = ledger.consumed + raw_increments
        slack = FEASIBILITY_TOL * max(1.0, abs(threshold), float(combined.max()))
        allowed = combined.mean() + threshold + slack
        for v in range(n):
            if combined[v] > allowed:
                problems.append(f"node {v} consumption {combined[v]} above average + threshold")

    if problems:
        raise ValidationError("; ".join(problems))
    return TopologySolution(
        max_energy=cap,
        links=links,
        routes=routes,
        node_energy=increments,
        resource_limited=False,
    )


def solve_single_request(
    net: NetworkModel,
    request: Request,
    ledger: EnergyLedger,
    threshold: float | None,
    limits: SolveLimits | None = None,
) -> TopologySolution:
    """Admit one request against the current ledger.

    Optimal: decoded, validated topology and route. Infeasible: the request
    is lost — no route, no energy committed. A solver budget stop is also a
    loss but flagged ``resource_limited`` so it is never mistaken for a
    proven-infeasible request.
    """
    model = build_topology_milp(net, [request], ledger, threshold)
    sol = solve(model, limits)
    if sol.status is Status.OPTIMAL:
        return decode_and_validate(net, [request], ledger, threshold, sol)
    if sol.status is Status.INFEASIBLE:
        return TopologySolution(0.0, set(), [None], np.zeros(net.node_count))
    if sol.status is Status.RESOURCE_LIMIT:
        return TopologySolution(0.0, set(), [None], np.zeros(net.node_count), resource_limited=True)
    raise ValidationError(f"topology model unexpectedly {sol.status.value}")
