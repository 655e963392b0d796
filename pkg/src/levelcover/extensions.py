"""Hypergraph set cover and the non-uniform unsplittable-demand variants.

Set cover reuses the level engine verbatim (edge level = max endpoint level,
per-vertex counts over *edge* levels).  Demands come in three flavours:

* static: load demand-weighted edges, run the drop-from-top greedy, extract;
* cluster: one independent dynamic scheme per power-of-two demand band
  (doubled alpha), every update routed to exactly one cluster;
* split: an edge of demand d becomes d unit replicas in a base scheme that
  permits parallel edges; extraction reassigns each original edge wholly to
  the endpoint owning the majority of its replicas (at most doubling cost).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import dynamic, extract, static_greedy
from .core import Mode, new_instance
from .errors import BudgetError, CertificateError, EdgeError, InstanceError


# -- capacitated set cover ------------------------------------------------------


def insert_hyperedge(state, endpoints, edge_id=None):
    """Insert a hyperedge over <= f endpoints; returns an UpdateReport."""
    if state.params.mode is not Mode.SET_COVER:
        raise InstanceError("hyperedges require set-cover mode")
    ends = tuple(sorted(endpoints))
    if len(ends) < 2 or len(set(ends)) != len(ends):
        raise EdgeError("hyperedge needs >= 2 distinct endpoints, got %r"
                        % (endpoints,))
    if len(ends) > state.params.f:
        raise EdgeError("hyperedge arity %d exceeds f=%d"
                        % (len(ends), state.params.f))
    if len(state.edges) >= state.params.size_budget:
        raise BudgetError("hyperedge budget %d exhausted"
                          % state.params.size_budget)
    return dynamic.insert_any(state, ends, 1, edge_id)


def delete_hyperedge(state, edge_id):
    if state.params.mode is not Mode.SET_COVER:
        raise InstanceError("hyperedges require set-cover mode")
    return dynamic.delete_edge_by_id(state, edge_id)


# -- static non-uniform demand ----------------------------------------------------


def build_demand_instance(vertices, demand_edges, beta, epsilon,
                          size_budget=None, cost_band=None):
    """A DemandStatic GraphState with edges loaded (no dynamic machinery)."""
    verts = list(vertices)
    state = new_instance(verts, beta, epsilon, Mode.DEMAND_STATIC,
                         size_budget or len(verts), cost_band=cost_band)
    for (u, v), d in demand_edges:
        if d < 1 or int(d) != d:
            raise EdgeError("demand must be a positive integer, got %r" % (d,))
    static_greedy.bulk_load(state, [(tuple(sorted((u, v))), int(d))
                                    for (u, v), d in demand_edges])
    return state


def solve_demand_static(state):
    """Greedy drop-from-top on demand-sum weights; returns (cover, certificate)."""
    if state.params.mode is not Mode.DEMAND_STATIC:
        raise InstanceError("expected a DemandStatic instance")
    static_greedy.solve_static(state)
    return extract.current_cover(state), extract.dual_certificate(state)


# -- clustered dynamic demand ------------------------------------------------------


def cluster_index(demand):
    """d=1 -> 0; otherwise the power-of-two band (2^(i-1), 2^i]."""
    if demand < 1 or int(demand) != demand:
        raise EdgeError("demand must be a positive integer, got %r" % (demand,))
    return (int(demand) - 1).bit_length()


class ClusterManager:
    """Independent per-band level schemes; one update touches one cluster."""

    def __init__(self, vertices, beta, epsilon, size_budget=None, cost_band=None):
        self.vertices = sorted(vertices, key=lambda a: a.id)
        self.beta = beta
        self.epsilon = epsilon
        self.size_budget = size_budget or len(self.vertices)
        self.cost_band = cost_band
        self.clusters = {}
        self.pair_cluster = {}
        self.updates_applied = 0

    def _cluster(self, idx):
        st = self.clusters.get(idx)
        if st is None:
            st = new_instance(self.vertices, self.beta, self.epsilon,
                              Mode.DEMAND_CLUSTER, self.size_budget,
                              cost_band=self.cost_band)
            self.clusters[idx] = st
        return st

    def insert(self, u, v, demand):
        pair = tuple(sorted((u, v)))
        if pair in self.pair_cluster:
            raise EdgeError("edge %r already present" % (pair,))
        idx = cluster_index(demand)
        report = dynamic.insert_edge(self._cluster(idx), u, v, demand)
        self.pair_cluster[pair] = idx
        self.updates_applied += 1
        return report

    def delete(self, u, v):
        pair = tuple(sorted((u, v)))
        idx = self.pair_cluster.pop(pair, None)
        if idx is None:
            raise EdgeError("edge %r not present" % (pair,))
        report = dynamic.delete_edge(self.clusters[idx], u, v)
        self.updates_applied += 1
        return report

    def active_clusters(self):
        return [i for i in sorted(self.clusters) if self.clusters[i].edges]

    def query_parts(self):
        """(cluster index, state, cover, certificate) per active cluster."""
        out = []
        for i in self.active_clusters():
            st = self.clusters[i]
            out.append((i, st, extract.current_cover(st),
                        extract.dual_certificate(st)))
        return out

    def total_cost(self):
        return sum(part[2].cost for part in self.query_parts())

    def all_demand_edges(self):
        out = []
        for i in sorted(self.clusters):
            st = self.clusters[i]
            for eid in sorted(st.edges):
                e = st.edges[eid]
                out.append((e.ends, e.demand))
        return out


# -- split dynamic demand -----------------------------------------------------------


@dataclass
class SplitParent:
    pid: int
    ends: tuple
    demand: int
    replicas: list


@dataclass
class SplitCover:
    cover: extract.CoverSolution      # per-parent assignment, demand loads
    replica_cover: extract.CoverSolution


class SplitState:
    """Demand-d edges expanded into d unit replicas over one base scheme."""

    def __init__(self, vertices, beta, epsilon, d_max, size_budget=None,
                 cost_band=None):
        verts = sorted(vertices, key=lambda a: a.id)
        self.base = new_instance(verts, beta, epsilon, Mode.DEMAND_SPLIT,
                                 size_budget or len(verts), d_max=d_max,
                                 cost_band=cost_band)
        self.d_max = d_max
        self.parents = {}
        self.pair_pid = {}
        self.next_pid = 0
        self.updates_applied = 0

    def insert(self, u, v, demand):
        if demand < 1 or int(demand) != demand:
            raise EdgeError("demand must be a positive integer, got %r"
                            % (demand,))
        demand = int(demand)
        if demand > self.d_max:
            raise EdgeError("demand %d exceeds declared cap %d"
                            % (demand, self.d_max))
        pair = tuple(sorted((u, v)))
        if pair in self.pair_pid:
            raise EdgeError("edge %r already present" % (pair,))
        pid = self.next_pid
        self.next_pid += 1
        report = None
        replicas = []
        for _ in range(demand):
            r = dynamic.insert_edge(self.base, u, v)
            replicas.append(self.base.next_eid - 1)
            report = r if report is None else report.merge(r)
        self.parents[pid] = SplitParent(pid, pair, demand, replicas)
        self.pair_pid[pair] = pid
        self.updates_applied += 1
        return report

    def delete(self, u, v):
        pair = tuple(sorted((u, v)))
        pid = self.pair_pid.pop(pair, None)
        if pid is None:
            raise EdgeError("edge %r not present" % (pair,))
        parent = self.parents.pop(pid)
        report = None
        for eid in parent.replicas:
            r = dynamic.delete_edge_by_id(self.base, eid)
            report = r if report is None else report.merge(r)
        self.updates_applied += 1
        return report


def demand_split_extract(split):
    """Majority reassignment of replicas; cost provably <= 2x the replica cover."""
    base = split.base
    replica_cover = extract.current_cover(base)
    loads = [0] * base.n
    assignment = {}
    for pid in sorted(split.parents):
        parent = split.parents[pid]
        tally = {}
        for eid in parent.replicas:
            o = base.edges[eid].owner
            tally[o] = tally.get(o, 0) + 1
        top = max(tally.values())
        owner = min(v for v, c in tally.items() if c == top)
        assignment[pid] = owner
        loads[owner] += parent.demand
    copies = [0] * base.n
    cost = 0.0
    for v in range(base.n):
        if loads[v]:
            copies[v] = -(-loads[v] // base.cap[v])
            cost += base.cost[v] * copies[v]
    if cost > 2.0 * replica_cover.cost + 1e-6:
        raise CertificateError(
            "split reassignment cost %.12g exceeds 2x replica cost %.12g"
            % (cost, replica_cover.cost))
    cover = extract.CoverSolution(copies, assignment, cost, base.version)
    return SplitCover(cover, replica_cover)


def demand_split_certificate(split):
    """Replica certificate aggregated per parent; feasible for the demand dual."""
    base = split.base
    cert = extract.dual_certificate(base)
    l = {}
    pi = {}
    for pid in sorted(split.parents):
        parent = split.parents[pid]
        total_pi = 0.0
        lsums = {}
        for eid in parent.replicas:
            total_pi += cert.pi[eid]
            for v in parent.ends:
                lv = cert.l.get((eid, v))
                if lv:
                    lsums[v] = lsums.get(v, 0.0) + lv
        pi[pid] = total_pi
        for v, s in lsums.items():
            l[(pid, v)] = s
    value = 0.0
    for pid in sorted(pi):
        value += pi[pid]
    return extract.DualCertificate(cert.q, l, pi, value, base.version)
