"""Independent ground truth: exhaustive optima and scheme validators.

Everything here recomputes from raw instance data (vertex levels + edge
lists), never trusting the maintained buckets, so any disagreement points
at a real bug on exactly one side.
"""

from __future__ import annotations

import numpy as np

from .core import Mode
from .errors import OracleBudgetError

ABS_TOL = 1e-9
REL_TOL = 1e-9

_CHUNK = 1 << 16


def _ceil_div_arr(counts, caps):
    return -(-counts // caps)


def brute_force_orientations(costs, caps, edges):
    """Exact capacitated optimum over all 2^m edge orientations.

    ``edges`` is a list of ((u, v), demand).  The optimal copy vector is
    determined by the orientation via ceilings, so enumerating orientations
    (not copy vectors) is exhaustive.
    """
    m = len(edges)
    if m > 20:
        raise OracleBudgetError("2^%d orientations over budget (m <= 20)" % m)
    n = len(costs)
    costs = np.asarray(costs, dtype=np.float64)
    caps = np.asarray(caps, dtype=np.int64)
    if m == 0:
        return 0.0, []
    ends0 = np.array([e[0][0] for e in edges], dtype=np.int64)
    ends1 = np.array([e[0][1] for e in edges], dtype=np.int64)
    dem = np.array([d for _, d in edges], dtype=np.int64)
    total = 1 << m
    unit = bool((dem == 1).all())
    best_cost = np.inf
    best_orient = 0
    shifts = np.arange(m, dtype=np.uint64)
    if unit:
        # popcount path: per-vertex masks of incident edge bits
        mask1 = np.zeros(n, dtype=np.uint64)
        mask0 = np.zeros(n, dtype=np.uint64)
        base = np.zeros(n, dtype=np.int64)
        for j in range(m):
            mask1[ends1[j]] |= np.uint64(1 << j)
            mask0[ends0[j]] |= np.uint64(1 << j)
            base[ends0[j]] += 1
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        orient = np.arange(lo, hi, dtype=np.uint64)
        block_cost = np.zeros(hi - lo, dtype=np.float64)
        if unit:
            for v in range(n):
                cnt = base[v] - np.bitwise_count(orient & mask0[v]).astype(np.int64)
                cnt += np.bitwise_count(orient & mask1[v]).astype(np.int64)
                block_cost += costs[v] * _ceil_div_arr(cnt, caps[v])
        else:
            bits = ((orient[:, None] >> shifts) & np.uint64(1)).astype(np.int64)
            counts = np.zeros((hi - lo, n), dtype=np.int64)
            np.add.at(counts, (slice(None), ends1), bits * dem)
            np.add.at(counts, (slice(None), ends0), (1 - bits) * dem)
            block_cost = (_ceil_div_arr(counts, caps) * costs).sum(axis=1)
        k = int(np.argmin(block_cost))
        if block_cost[k] < best_cost:
            best_cost = float(block_cost[k])
            best_orient = lo + k
    witness = [edges[j][0][1] if (best_orient >> j) & 1 else edges[j][0][0]
               for j in range(m)]
    return best_cost, witness


def brute_force_subsets(costs, edges):
    """Exact weighted vertex cover over all 2^n vertex subsets."""
    n = len(costs)
    if n > 24:
        raise OracleBudgetError("2^%d subsets over budget (n <= 24)" % n)
    costs = np.asarray(costs, dtype=np.float64)
    pairs = [e[0] for e in edges]
    if not pairs:
        return 0.0, []
    total = 1 << n
    shifts = np.arange(n, dtype=np.uint64)
    best_cost = np.inf
    best_set = 0
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        subset = np.arange(lo, hi, dtype=np.uint64)
        ok = np.ones(hi - lo, dtype=bool)
        for (u, v) in pairs:
            ok &= ((subset >> np.uint64(u)) | (subset >> np.uint64(v))) & np.uint64(1) != 0
        if not ok.any():
            continue
        bits = ((subset[:, None] >> shifts) & np.uint64(1)).astype(np.float64)
        block_cost = bits @ costs
        block_cost[~ok] = np.inf
        k = int(np.argmin(block_cost))
        if block_cost[k] < best_cost:
            best_cost = float(block_cost[k])
            best_set = lo + k
    if best_cost == np.inf:
        raise OracleBudgetError("no covering subset found (impossible)")
    witness = [v for v in range(n) if (best_set >> v) & 1]
    return best_cost, witness


def brute_force_setcover(costs, caps, hyperedges):
    """Exact capacitated set cover by enumerating per-edge endpoint choices."""
    m = len(hyperedges)
    arities = [len(e[0]) for e in hyperedges]
    total = 1
    for r in arities:
        total *= r
    if total > 1 << 20:
        raise OracleBudgetError("%d assignments over budget (f^m <= 2^20)" % total)
    n = len(costs)
    costs = np.asarray(costs, dtype=np.float64)
    caps = np.asarray(caps, dtype=np.int64)
    if m == 0:
        return 0.0, []
    best_cost = np.inf
    best_idx = 0
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        counts = np.zeros((hi - lo, n), dtype=np.int64)
        div = 1
        for j in range(m):
            ends, d = hyperedges[j]
            digit = (idx // div) % arities[j]
            for c, v in enumerate(ends):
                counts[:, v] += np.where(digit == c, d, 0)
            div *= arities[j]
        block_cost = (_ceil_div_arr(counts, caps) * costs).sum(axis=1)
        k = int(np.argmin(block_cost))
        if block_cost[k] < best_cost:
            best_cost = float(block_cost[k])
            best_idx = lo + k
    witness = []
    rem = best_idx
    for j in range(m):
        witness.append(hyperedges[j][0][rem % arities[j]])
        rem //= arities[j]
    return best_cost, witness


def brute_force_opt(state):
    """Dispatch on the instance mode; returns {"cost", "witness"}."""
    verts, edges = state.instance_view()
    costs = [a.cost for a in verts]
    caps = [a.capacity for a in verts]
    mode = state.params.mode
    if mode is Mode.WEIGHTED_VC:
        cost, witness = brute_force_subsets(costs, edges)
    elif mode is Mode.SET_COVER:
        cost, witness = brute_force_setcover(costs, caps, edges)
    else:
        cost, witness = brute_force_orientations(costs, caps, edges)
    return {"cost": cost, "witness": witness}


# -- from-scratch recomputation ------------------------------------------------


def recompute_weight(state, v):
    """W_v rebuilt from raw edges and vertex levels, same summation order."""
    p = state.params
    counts = [0] * (p.levels + 1)
    for e in state.edges.values():
        if v in e.ends:
            lev = max(state.level(u) for u in e.ends)
            counts[lev] += e.demand if state._demand_weighted else 1
    lv = state.level(v)
    cap = -1 if p.mode is Mode.WEIGHTED_VC else state.cap[v]
    s = 0.0
    for j in range(p.levels, lv, -1):
        c = counts[j]
        if c:
            if 0 <= cap < c:
                c = cap
            s += c * p.level_weight[j]
    pref = sum(counts[: lv + 1])
    if 0 <= cap < pref:
        pref = cap
    return s + pref * p.level_weight[lv]


def weight_agreement(state):
    """Max relative disagreement between maintained and recomputed weights."""
    worst = 0.0
    for v in range(state.n):
        a = state.weight(v)
        b = recompute_weight(state, v)
        scale = max(abs(a), abs(b), 1.0)
        worst = max(worst, abs(a - b) / scale)
    return worst


def check_valid(state):
    """Vertices whose recomputed weight exceeds their cost."""
    out = []
    for v in range(state.n):
        w = recompute_weight(state, v)
        if w > state.cost[v] * (1.0 + REL_TOL):
            out.append((v, w, state.cost[v]))
    return out


def check_invariant1(state):
    """Violations of the maintenance band (lower part only above level 0)."""
    out = []
    p = state.params
    for v in range(state.n):
        w = recompute_weight(state, v)
        c = state.cost[v]
        if w > c * (1.0 + REL_TOL):
            out.append((v, "high", w, c))
        elif state.level(v) > 0 and w < p.c_star(c) * (1.0 - REL_TOL):
            out.append((v, "low", w, p.c_star(c)))
    return out


def check_tightness(state, factor):
    """True iff every edge-owning vertex has W_v in (c_v/factor, c_v].

    Set-cover mode widens the band by f, per its flexible-range adjustment.
    """
    lower_scale = factor
    if state.params.mode is Mode.SET_COVER:
        lower_scale *= state.params.f
    for v in range(state.n):
        if not state.assigned[v]:
            continue
        w = recompute_weight(state, v)
        c = state.cost[v]
        if w > c * (1.0 + REL_TOL):
            return False
        if w <= (c / lower_scale) * (1.0 - REL_TOL):
            return False
    return True


def check_cover_property(state):
    """Lemma-1 style structural facts: every edge sits above level 0 and is
    owned by an endpoint attaining its level."""
    out = []
    for eid in sorted(state.edges):
        e = state.edges[eid]
        lev = max(state.level(u) for u in e.ends)
        if lev != e.level:
            out.append((eid, "cached level %d != %d" % (e.level, lev)))
        if state.level(e.owner) != lev:
            out.append((eid, "owner %d below edge level" % e.owner))
        if lev == 0:
            out.append((eid, "edge at level 0"))
    return out


def check_dual_feasible_view(cert, costs, caps, edge_map, uncapacitated=False):
    """Verify both dual constraint families with absolute slack 1e-9.

    ``edge_map`` maps edge id -> (endpoints, demand); the edge constraint is
    the demand form q_v*d_e + l_ev >= pi_e (d_e = 1 in uniform modes).
    """
    n = len(costs)
    incident_l = [0.0] * n
    for (eid, v), lv in cert.l.items():
        if lv < -ABS_TOL:
            return False
        incident_l[v] += lv
    for v in range(n):
        qv = cert.q[v]
        if qv < -ABS_TOL:
            return False
        if uncapacitated:
            term = 0.0 if qv <= ABS_TOL else float("inf")
        else:
            term = caps[v] * qv
        if term + incident_l[v] > costs[v] + ABS_TOL:
            return False
    for eid, pi in cert.pi.items():
        if pi < -ABS_TOL:
            return False
        ends, d = edge_map[eid]
        for v in ends:
            if cert.q[v] * d + cert.l.get((eid, v), 0.0) < pi - ABS_TOL:
                return False
    return True


def check_dual_feasible(cert, state):
    """check_dual_feasible_view over a live GraphState."""
    edge_map = {eid: (e.ends, e.demand) for eid, e in state.edges.items()}
    return check_dual_feasible_view(
        cert, state.cost, state.cap, edge_map,
        uncapacitated=state.params.mode is Mode.WEIGHTED_VC)


def check_structure(state):
    """Bucket/membership/assignment bookkeeping agrees with raw edge data."""
    out = []
    n = state.n
    p = state.params
    counts = [[0] * (p.levels + 1) for _ in range(n)]
    owned = [set() for _ in range(n)]
    loads = [0] * n
    for eid, e in state.edges.items():
        for idx, u in enumerate(e.ends):
            peer = max(state.level(w) for w in e.ends if w != u)
            pos = e.pos[idx]
            # positions are exact above level(u), lazy (<= level(u)) below
            if peer > state.level(u):
                if pos != peer:
                    out.append(("pos", eid, u, pos, peer))
            elif pos > state.level(u):
                out.append(("pos-lazy", eid, u, pos, peer))
            counts[u][pos] += e.demand if state._demand_weighted else 1
            if eid not in state.membership[u][pos]:
                out.append(("membership", eid, u, pos))
        loads[e.owner] += e.demand
        owned[e.owner].add(eid)
    for v in range(n):
        prof = state.profiles[v]
        if list(prof.counts) != counts[v]:
            out.append(("counts", v, list(prof.counts), counts[v]))
        if prof.prefix != sum(counts[v][: prof.level + 1]):
            out.append(("prefix", v, prof.prefix))
        if prof.total != sum(counts[v]):
            out.append(("total", v, prof.total))
        if loads[v] != state.assigned_load[v]:
            out.append(("load", v, state.assigned_load[v], loads[v]))
        if set(state.assigned[v]) != owned[v]:
            out.append(("assigned-set", v))
        if not 0 <= prof.level <= p.levels:
            out.append(("level-range", v, prof.level))
    return out
