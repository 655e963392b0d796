"""Instance definition, parameter derivation, and the mutable level-scheme state.

The state is a hierarchical level assignment over vertices: every edge lives
at the max level of its endpoints, is owned by an endpoint attaining that
max, and contributes mu*beta**-level(e) to each endpoint's capacity-capped
weight.  All modes (plain graph, hypergraph, demand-weighted) share one
engine; per-vertex numeric state lives in a profile kernel selected at
import (compiled if available, pure Python otherwise).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .errors import BudgetError, CorruptionError, EdgeError, InstanceError

try:                                         # compiled hot path
    from ._kernel import LevelProfile as _CyProfile
except ImportError:                          # pragma: no cover
    _CyProfile = None
from ._profile_py import LevelProfile as _PyProfile

import os

_backend = os.environ.get("LEVELCOVER_BACKEND", "auto")
if _backend == "python" or (_backend == "auto" and _CyProfile is None):
    LevelProfile = _PyProfile
    BACKEND = "python"
elif _backend in ("auto", "cython"):
    if _CyProfile is None:
        raise ImportError("LEVELCOVER_BACKEND=cython but the compiled kernel is missing")
    LevelProfile = _CyProfile
    BACKEND = "cython"
else:
    raise ImportError("unknown LEVELCOVER_BACKEND %r" % _backend)


class Mode(str, Enum):
    CAPACITATED = "capacitated"
    WEIGHTED_VC = "weightedvc"
    SET_COVER = "setcover"
    DEMAND_STATIC = "demandstatic"
    DEMAND_CLUSTER = "demandcluster"
    DEMAND_SPLIT = "demandsplit"


# Modes whose bucket counts carry edge demand rather than unit edges.
DEMAND_WEIGHTED = frozenset({Mode.DEMAND_STATIC, Mode.DEMAND_CLUSTER})
# Modes where an unordered endpoint pair identifies at most one live edge.
PAIR_UNIQUE = frozenset(
    {Mode.CAPACITATED, Mode.WEIGHTED_VC, Mode.DEMAND_STATIC, Mode.DEMAND_CLUSTER}
)
# Dynamic modes that rely on the level-down multiplicity lemma.
_NEEDS_ALPHA_BOUND = frozenset(
    {Mode.CAPACITATED, Mode.SET_COVER, Mode.DEMAND_CLUSTER, Mode.DEMAND_SPLIT}
)


@dataclass(frozen=True)
class VertexAttrs:
    id: int
    cost: float
    capacity: int = 1


@dataclass(frozen=True)
class Parameters:
    """All scheme constants; derived once, immutable afterwards."""

    mode: Mode
    beta: float
    epsilon: float
    mu: float
    alpha: float
    levels: int
    c_min: float
    c_max: float
    size_budget: int
    f: int = 2
    d_max: int = 1
    k_max: int = 1
    level_weight: tuple = ()          # level_weight[j] = mu * beta**-j
    c_star_factor: float = 0.0        # c_v* = c_v * c_star_factor
    tight_factor: float = 0.0         # dynamic band: W_v in (c_v/tight_factor, c_v]

    def c_star(self, cost):
        return cost * self.c_star_factor


def derive_parameters(mode, beta, epsilon, size_budget, c_min, c_max,
                      k_max, f=2, d_max=1):
    """Fix every scheme constant from the declared instance bounds."""
    if not 0.0 < epsilon < 1.0:
        raise InstanceError("epsilon must be in (0, 1), got %r" % epsilon)
    mode = Mode(mode)
    if mode is Mode.WEIGHTED_VC:
        # beta is pinned to 1 + epsilon in this mode; the passed value is ignored.
        beta = 1.0 + epsilon
        alpha = 1.0 + 3.0 * epsilon
    else:
        if beta <= 1.0:
            raise InstanceError("beta must exceed 1, got %r" % beta)
        alpha = (2.0 * beta + 1.0) / beta + 2.0 * epsilon
        if mode is Mode.DEMAND_CLUSTER:
            alpha *= 2.0
    if c_min <= 0 or c_max < c_min:
        raise InstanceError("bad cost band [%r, %r]" % (c_min, c_max))
    mu = 2.0 * c_max

    if mode in (Mode.CAPACITATED, Mode.WEIGHTED_VC):
        scale = size_budget
    elif mode is Mode.SET_COVER:
        scale = size_budget                   # hyperedge budget m_max
    elif mode is Mode.DEMAND_SPLIT:
        scale = min(k_max, size_budget * d_max)
    else:                                     # demand static / cluster
        scale = k_max
    levels = math.ceil(math.log(scale * mu * alpha / c_min, beta))
    levels = max(levels, 1)

    if mode in _NEEDS_ALPHA_BOUND and alpha < beta / (beta - 1.0):
        raise InstanceError(
            "alpha=%.6g < beta/(beta-1)=%.6g; pick beta >= 1.62"
            % (alpha, beta / (beta - 1.0))
        )

    tight = alpha * (beta + 1.0)
    cstar = 1.0 / tight
    if mode is Mode.SET_COVER:
        tight *= f
        cstar /= f
    return Parameters(
        mode=mode, beta=beta, epsilon=epsilon, mu=mu, alpha=alpha,
        levels=levels, c_min=c_min, c_max=c_max, size_budget=size_budget,
        f=f, d_max=d_max, k_max=k_max,
        level_weight=tuple(mu * beta ** -j for j in range(levels + 1)),
        c_star_factor=cstar, tight_factor=tight,
    )


class Edge:
    """One (hyper)edge: endpoints, demand, cached level/owner, and per-endpoint
    bucket positions (the max level among the *other* endpoints)."""

    __slots__ = ("eid", "ends", "demand", "level", "owner", "pos")

    def __init__(self, eid, ends, demand, level, owner, pos):
        self.eid = eid
        self.ends = ends
        self.demand = demand
        self.level = level
        self.owner = owner
        self.pos = pos

    def __repr__(self):
        return "Edge(%d, ends=%r, d=%d, level=%d, owner=%d)" % (
            self.eid, self.ends, self.demand, self.level, self.owner)


class GraphState:
    """Mutable level scheme over one instance.  Single-threaded; independent
    instances may run on separate threads."""

    def __init__(self, params, vertices):
        self.params = params
        self.cost = []
        self.cap = []
        self.profiles = []
        self.membership = []     # v -> per-level ordered dict of incident eids
        self.assigned = []       # v -> ordered dict of owned eids
        self.assigned_load = []  # v -> sum of owned demand
        self.edges = {}
        self.pair_index = {}
        self.dirty = deque()
        self.in_dirty = []
        self.next_eid = 0
        self.updates_applied = 0
        self.touched_total = 0   # cumulative Count
        self.tracker = None
        self.version = 0
        self.tight_factor = params.tight_factor
        self._ops = 0
        self._demand_weighted = params.mode in DEMAND_WEIGHTED
        self._pair_unique = params.mode in PAIR_UNIQUE
        for attrs in vertices:
            self._register_vertex(attrs)

    # -- vertex registration -------------------------------------------------

    def _register_vertex(self, attrs):
        p = self.params
        if attrs.id != len(self.cost):
            raise InstanceError(
                "vertex ids must be dense; expected %d, got %d"
                % (len(self.cost), attrs.id))
        if len(self.cost) >= p.size_budget:
            raise BudgetError("vertex budget %d exhausted" % p.size_budget)
        if not (p.c_min <= attrs.cost <= p.c_max):
            raise InstanceError(
                "vertex %d cost %r outside declared band [%r, %r]"
                % (attrs.id, attrs.cost, p.c_min, p.c_max))
        if attrs.capacity < 1:
            raise InstanceError("vertex %d capacity must be >= 1" % attrs.id)
        if p.mode in (Mode.DEMAND_STATIC, Mode.DEMAND_CLUSTER, Mode.DEMAND_SPLIT) \
                and attrs.capacity > p.k_max:
            raise InstanceError(
                "vertex %d capacity %d exceeds declared k_max %d"
                % (attrs.id, attrs.capacity, p.k_max))
        cap = -1 if p.mode is Mode.WEIGHTED_VC else attrs.capacity
        self.cost.append(attrs.cost)
        self.cap.append(attrs.capacity)
        self.profiles.append(LevelProfile(
            p.levels, attrs.cost, cap, p.level_weight, p.c_star(attrs.cost)))
        self.membership.append([{} for _ in range(p.levels + 1)])
        self.assigned.append({})
        self.assigned_load.append(0)
        self.in_dirty.append(False)

    @property
    def n(self):
        return len(self.cost)

    def level(self, v):
        return self.profiles[v].level

    def weight(self, v):
        return self.profiles[v].weight

    def degree(self, v):
        return self.profiles[v].total

    def weight_at(self, v, lvl):
        """Hypothetical W_v with v at ``lvl`` and everyone else fixed.

        Rebuilt from true peer levels (stored low-bucket positions are lazy,
        so the kernel's own counts cannot answer this for lvl != level(v)).
        """
        p = self.params
        counts = [0] * (p.levels + 1)
        profiles = self.profiles
        for j in range(p.levels + 1):
            for eid in self.membership[v][j]:
                e = self.edges[eid]
                peer = max(profiles[w].level for w in e.ends if w != v)
                counts[max(peer, lvl)] += e.demand if self._demand_weighted else 1
        cap = -1 if p.mode is Mode.WEIGHTED_VC else self.cap[v]
        s = 0.0
        for j in range(p.levels, lvl, -1):
            c = counts[j]
            if c:
                if 0 <= cap < c:
                    c = cap
                s += c * p.level_weight[j]
        pref = counts[lvl]
        if 0 <= cap < pref:
            pref = cap
        return s + pref * p.level_weight[lvl]

    @property
    def is_quiescent(self):
        return not self.dirty

    def vertex_attrs(self, v):
        return VertexAttrs(v, self.cost[v], self.cap[v])

    def instance_view(self):
        """(vertex attrs, [(ends, demand)]) snapshot for the oracles."""
        verts = [self.vertex_attrs(v) for v in range(self.n)]
        eids = sorted(self.edges)
        return verts, [(self.edges[k].ends, self.edges[k].demand) for k in eids]

    # -- engine primitives ----------------------------------------------------

    def _check_endpoint(self, u):
        if not 0 <= u < self.n:
            raise EdgeError("unknown vertex %r" % (u,))

    def insert_edge_raw(self, ends, demand=1, eid=None):
        """Register an edge at the current levels.  No dirtiness processing."""
        ends = tuple(sorted(ends))
        if len(set(ends)) != len(ends):
            raise EdgeError("repeated endpoint in %r" % (ends,))
        for u in ends:
            self._check_endpoint(u)
        if self._pair_unique:
            if ends in self.pair_index:
                raise EdgeError("edge %r already present" % (ends,))
        if eid is None:
            eid = self.next_eid
            self.next_eid += 1
        elif eid in self.edges:
            raise EdgeError("edge id %d already present" % eid)
        else:
            self.next_eid = max(self.next_eid, eid + 1)
        profiles = self.profiles
        levels = [profiles[u].level for u in ends]
        lev = max(levels)
        owner = min(u for u, l in zip(ends, levels) if l == lev)
        pos = [max(l for w, l in zip(ends, levels) if w != u) for u in ends]
        e = Edge(eid, ends, demand, lev, owner, pos)
        self.edges[eid] = e
        if self._pair_unique:
            self.pair_index[ends] = eid
        unit = demand if self._demand_weighted else 1
        for idx, u in enumerate(ends):
            self.membership[u][pos[idx]][eid] = None
            profiles[u].add(pos[idx], unit)
            self._ops += 2
        self.assigned[owner][eid] = None
        self.assigned_load[owner] += demand
        self._ops += 1
        t = self.tracker
        if t is not None:
            t.edge_added(lev)
            for u in ends:
                t.psi_refresh(u)
        return e

    def remove_edge_raw(self, eid):
        e = self.edges.pop(eid, None)
        if e is None:
            raise EdgeError("edge %r not present" % (eid,))
        if self._pair_unique:
            del self.pair_index[e.ends]
        unit = e.demand if self._demand_weighted else 1
        for idx, u in enumerate(e.ends):
            bucket = self.membership[u][e.pos[idx]]
            if eid not in bucket:
                raise CorruptionError(
                    "edge %d missing from bucket %d of vertex %d"
                    % (eid, e.pos[idx], u))
            del bucket[eid]
            self.profiles[u].remove(e.pos[idx], unit)
            self._ops += 2
        del self.assigned[e.owner][eid]
        self.assigned_load[e.owner] -= e.demand
        self._ops += 1
        t = self.tracker
        if t is not None:
            t.edge_removed(e.level)
            for u in e.ends:
                t.psi_refresh(u)
        return e

    def _set_owner(self, e, new_owner):
        del self.assigned[e.owner][e.eid]
        self.assigned_load[e.owner] -= e.demand
        self.assigned[new_owner][e.eid] = None
        self.assigned_load[new_owner] += e.demand
        e.owner = new_owner
        self._ops += 1

    def _pick_owner(self, e):
        profiles = self.profiles
        lev = e.level
        return min(u for u in e.ends if profiles[u].level == lev)

    def _collect_low_buckets(self, v, i):
        """Sorted eids of edges at edge level exactly i = level(v).

        Bucket positions are exact above the holder's level and lazy at or
        below it, so buckets 0..i hold precisely the edges whose other
        endpoints all sit at levels <= i.
        """
        out = []
        mem = self.membership[v]
        for j in range(i + 1):
            out.extend(mem[j])
        out.sort()
        return out

    def _move_entry(self, u, e, idx, newp, journal):
        oldp = e.pos[idx]
        mem = self.membership[u]
        del mem[oldp][e.eid]
        mem[newp][e.eid] = None
        self.profiles[u].move(oldp, newp, e.demand if self._demand_weighted else 1)
        e.pos[idx] = newp
        if journal is not None:
            journal.append(("pos", e.eid, idx, oldp))
        self._ops += 2

    def shift_up(self, v, journal=None):
        """Raise v one level; returns (touched edge count, {u: pre-weight}).

        Touches exactly the edges at edge level i = level(v): they rise with
        v, v takes their ownership, and each co-endpoint's entry moves to the
        (now exact) bucket i+1.  v's own entries stay in the lazy low region.
        """
        profiles = self.profiles
        prof = profiles[v]
        i = prof.level
        if i >= self.params.levels:
            raise CorruptionError("vertex %d cannot rise above level %d" % (v, i))
        moved = self._collect_low_buckets(v, i)
        if journal is not None:
            journal.append(("vlevel", v, i))
        prof.set_level(i + 1)
        self._ops += 1
        tracker = self.tracker
        pre_w = {}
        new_level = i + 1
        for eid in moved:
            e = self.edges[eid]
            if journal is not None:
                journal.append(("elevel", eid, e.level))
            if tracker is not None:
                tracker.edge_level_changed(e.level, new_level)
            e.level = new_level
            if e.owner != v:
                if journal is not None:
                    journal.append(("owner", eid, e.owner))
                self._set_owner(e, v)
            ends = e.ends
            for idx in range(len(ends)):
                u = ends[idx]
                if u == v:
                    continue
                if u not in pre_w:
                    pre_w[u] = profiles[u].weight
                self._move_entry(u, e, idx, new_level, journal)
        if tracker is not None:
            tracker.psi_refresh(v)
            for u in pre_w:
                tracker.psi_refresh(u)
        return len(moved), pre_w

    def shift_down(self, v, journal=None):
        """Lower v one level; same contract as shift_up.

        The touched edges (edge level i) are re-sorted by their true peer
        level first -- the split of the lazy low region the drop forces --
        then edges pinned by a level-i peer keep their level and are
        re-owned, while the rest drop to i-1 with v.
        """
        profiles = self.profiles
        prof = profiles[v]
        i = prof.level
        if i <= 0:
            raise CorruptionError("vertex %d already at level 0" % v)
        moved = self._collect_low_buckets(v, i)
        mem_v = self.membership[v]
        infos = []
        for eid in moved:
            e = self.edges[eid]
            ends = e.ends
            v_idx = ends.index(v)
            peer = max(profiles[w].level for w in ends if w != v)
            infos.append((e, v_idx, peer))
            if e.pos[v_idx] != peer:
                # exact placement; stays within the current prefix region
                self._move_entry(v, e, v_idx, peer, journal)
        if journal is not None:
            journal.append(("vlevel", v, i))
        prof.set_level(i - 1)
        self._ops += 1
        tracker = self.tracker
        pre_w = {}
        for e, v_idx, peer in infos:
            new_lev = i if peer == i else i - 1
            if new_lev != e.level:
                if journal is not None:
                    journal.append(("elevel", e.eid, e.level))
                if tracker is not None:
                    tracker.edge_level_changed(e.level, new_lev)
                e.level = new_lev
            new_owner = self._pick_owner(e)
            if new_owner != e.owner:
                if journal is not None:
                    journal.append(("owner", e.eid, e.owner))
                self._set_owner(e, new_owner)
            ends = e.ends
            for idx in range(len(ends)):
                u = ends[idx]
                if u == v:
                    continue
                newp = max(profiles[w].level for w in ends if w != u)
                oldp = e.pos[idx]
                if newp == oldp:
                    continue
                lu = profiles[u].level
                if newp <= lu and oldp <= lu:
                    continue          # both in u's lazy region; no-op
                if u not in pre_w:
                    pre_w[u] = profiles[u].weight
                self._move_entry(u, e, idx, newp, journal)
        if tracker is not None:
            tracker.psi_refresh(v)
            for u in pre_w:
                tracker.psi_refresh(u)
        return len(moved), pre_w

    def undo(self, journal):
        """Exactly reverse a journal produced by shift_up/shift_down."""
        profiles = self.profiles
        for entry in reversed(journal):
            kind = entry[0]
            if kind == "pos":
                _, eid, idx, oldp = entry
                e = self.edges[eid]
                u = e.ends[idx]
                cur = e.pos[idx]
                mem = self.membership[u]
                del mem[cur][eid]
                mem[oldp][eid] = None
                profiles[u].move(cur, oldp, e.demand if self._demand_weighted else 1)
                e.pos[idx] = oldp
            elif kind == "owner":
                _, eid, old_owner = entry
                self._set_owner(self.edges[eid], old_owner)
            elif kind == "elevel":
                _, eid, old = entry
                self.edges[eid].level = old
            elif kind == "vlevel":
                _, v, old = entry
                profiles[v].set_level(old)
            else:                               # pragma: no cover
                raise CorruptionError("bad journal entry %r" % (entry,))

    # -- dirtiness ------------------------------------------------------------

    def rescreen(self, v):
        if not self.in_dirty[v] and self.profiles[v].dirty_dir() != 0:
            self.in_dirty[v] = True
            self.dirty.append(v)

    def pop_dirty(self):
        v = self.dirty.popleft()
        self.in_dirty[v] = False
        return v


def new_instance(vertices, beta, epsilon, mode, size_budget, *,
                 f=None, d_max=None, cost_band=None):
    """Build an empty-edge GraphState with all scheme constants derived.

    ``size_budget`` is the vertex budget (hyperedge budget m_max in set-cover
    mode).  ``cost_band`` optionally widens the declared [c_min, c_max] beyond
    the initial vertices' costs; vertices added later must fit the band.
    """
    mode = Mode(mode)
    verts = list(vertices)
    if not verts:
        raise InstanceError("instance needs at least one vertex")
    ids = sorted(v.id for v in verts)
    if ids != list(range(len(verts))):
        raise InstanceError("vertex ids must be exactly 0..n-1 without repeats")
    if size_budget < len(verts):
        raise BudgetError(
            "size budget %d below vertex count %d" % (size_budget, len(verts)))
    costs = [v.cost for v in verts]
    if min(costs) <= 0:
        raise InstanceError("vertex costs must be positive")
    if cost_band is None:
        c_min, c_max = min(costs), max(costs)
    else:
        c_min, c_max = cost_band
        if not (c_min <= min(costs) and max(costs) <= c_max):
            raise InstanceError("initial costs fall outside declared band")
    k_max = max(v.capacity for v in verts)
    if mode is Mode.SET_COVER:
        if f is None or f < 2:
            raise InstanceError("set-cover mode needs f >= 2")
    else:
        f = 2
    if mode is Mode.DEMAND_SPLIT:
        if d_max is None or d_max < 1:
            raise InstanceError("split mode needs a positive d_max cap")
    else:
        d_max = d_max or 1
    params = derive_parameters(mode, beta, epsilon, size_budget,
                               c_min, c_max, k_max, f=f, d_max=d_max)
    return GraphState(params, sorted(verts, key=lambda a: a.id))


def add_vertex(state, attrs):
    """Register one more vertex at level 0 (must fit the declared bounds)."""
    state._register_vertex(attrs)


def theoretical_ratio(params):
    """A-priori approximation bound for the dynamic capacitated scheme."""
    if params.mode is not Mode.CAPACITATED:
        raise InstanceError("theoretical_ratio is defined for capacitated mode")
    beta = params.beta
    tau = params.alpha * (beta + 1.0)
    return tau * (2.0 * beta / (beta - 1.0) + 1.0)
