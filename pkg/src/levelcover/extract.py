"""Turn a quiescent level scheme into a primal cover and a dual certificate.

Certificates are rebuilt on demand from the current scheme (never maintained
incrementally): for a multi-copy vertex the per-copy price mu*beta**-level(v)
goes into q_v; otherwise the price of each incident edge goes into q_v when
the edge-level count saturates the capacity and into l_ev when it does not.
The resulting vertex constraint sums to exactly W_v <= c_v, so feasibility
is a theorem the oracle re-checks rather than an aspiration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Mode
from .errors import CertificateError, SchemeStateError


@dataclass
class CoverSolution:
    copies: list            # x_v per vertex
    assignment: dict        # eid -> owning vertex
    cost: float
    version: int = -1

    @property
    def support(self):
        return [v for v, x in enumerate(self.copies) if x > 0]


@dataclass
class DualCertificate:
    q: list                 # per-vertex global price
    l: dict                 # (eid, vertex) -> local price (zeros omitted)
    pi: dict                # eid -> packed value
    value: float = 0.0
    version: int = -1


def _require_quiescent(state):
    if not state.is_quiescent:
        raise SchemeStateError("scheme has unprocessed dirty vertices")


def vertex_copies(state, v):
    load = state.assigned_load[v]
    if load == 0:
        return 0
    if state.params.mode is Mode.WEIGHTED_VC:
        return 1
    return -(-load // state.cap[v])


def current_cover(state):
    """Copy counts ceil(load/k_v) plus the maintained edge assignment."""
    _require_quiescent(state)
    copies = [vertex_copies(state, v) for v in range(state.n)]
    assignment = {eid: state.edges[eid].owner for eid in sorted(state.edges)}
    cost = 0.0
    for v in range(state.n):
        if copies[v]:
            cost += state.cost[v] * copies[v]
    return CoverSolution(copies, assignment, cost, state.version)


def dual_certificate(state):
    """The constructive feasible dual; its value lower-bounds OPT."""
    _require_quiescent(state)
    p = state.params
    demand_form = state._demand_weighted
    lw = p.level_weight
    q = [0.0] * state.n
    l = {}
    pi = {}
    for v in range(state.n):
        if vertex_copies(state, v) > 1:
            q[v] = lw[state.level(v)]
            continue
        if p.mode is Mode.WEIGHTED_VC:
            continue                      # uncapacitated: q stays 0
        prof = state.profiles[v]
        cap = state.cap[v]
        acc = 0.0
        for i in range(p.levels, state.level(v) - 1, -1):
            c = prof.edge_level_count(i)
            saturated = (c >= cap) if demand_form else (c > cap)
            if c and saturated:
                acc += lw[i]
        q[v] = acc
    for eid in sorted(state.edges):
        e = state.edges[eid]
        price = lw[e.level]
        pi[eid] = e.demand * price if demand_form else price
        for v in e.ends:
            if vertex_copies(state, v) > 1:
                continue
            if p.mode is Mode.WEIGHTED_VC:
                l[(eid, v)] = price
                continue
            c = state.profiles[v].edge_level_count(e.level)
            cap = state.cap[v]
            saturated = (c >= cap) if demand_form else (c > cap)
            if not saturated:
                l[(eid, v)] = e.demand * price if demand_form else price
    value = 0.0
    for eid in sorted(pi):
        value += pi[eid]
    return DualCertificate(q, l, pi, value, state.version)


def bound_ratio(state):
    """A-priori cost/dual bound for this state's mode and tightness band."""
    p = state.params
    beta = p.beta
    tight = state.tight_factor
    if p.mode is Mode.WEIGHTED_VC:
        return 2.0 * tight
    if p.mode is Mode.SET_COVER:
        return tight * (2.0 * beta / (beta - 1.0) + (p.f - 1.0))
    return tight * (2.0 * beta / (beta - 1.0) + 1.0)


def empirical_ratio(cost, value):
    if value > 0.0:
        return cost / value
    return 1.0 if cost == 0.0 else math.inf


def ratio_report(state, cover, cert):
    """Cost vs. dual lower bound; raises if the a-priori bound is violated."""
    if cover.version != cert.version or cover.version != state.version:
        raise SchemeStateError("cover/certificate stamps do not match the state")
    theoretical = bound_ratio(state)
    if cover.cost > theoretical * cert.value + 1e-6:
        raise CertificateError(
            "cost %.12g exceeds %.6g x dual %.12g" %
            (cover.cost, theoretical, cert.value))
    return {
        "cost": cover.cost,
        "dual_lb": cert.value,
        "empirical_ratio": empirical_ratio(cover.cost, cert.value),
        "theoretical_ratio": theoretical,
    }
