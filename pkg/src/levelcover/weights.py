"""Vertex-weight queries over the maintained level-degree profiles.

The profile kernel keeps the min-merged form
W_v = min{k_v, prefix} * mu*beta**-level(v) + sum_{i>level(v)} min{k_v, D_v(i)} * mu*beta**-i
summed highest level first; these are thin, stable query wrappers plus the
single-neighbor bucket move used by the graph modes.
"""

from __future__ import annotations

from .core import BACKEND, LevelProfile  # noqa: F401  (re-exported kernel)
from .errors import CorruptionError, EdgeError


def vertex_weight(state, v):
    """Current W_v (cached; recomputed from integer counts on every change)."""
    return state.profiles[v].weight


def external_component(state, v):
    """Weight contributed by incident edges strictly above level(v)."""
    return state.profiles[v].external()


def external_bound(state, v):
    """The guaranteed cap on the external component: k_v*mu*beta**-l / (beta-1)."""
    p = state.params
    cap = state.cap[v]
    return cap * p.level_weight[state.level(v)] / (p.beta - 1.0)


def edge_level_degree(state, v, i):
    """Number of incident edge units whose *edge* level is exactly i."""
    if not 0 <= i <= state.params.levels:
        raise EdgeError("level %d outside [0, %d]" % (i, state.params.levels))
    return state.profiles[v].edge_level_count(i)


def weight_at_level(state, v, lvl):
    """Hypothetical W_v with v moved to ``lvl``, everything else fixed."""
    return state.weight_at(v, lvl)


def on_neighbor_level_change(state, v, u, old_level, new_level):
    """Move neighbor u between v's buckets after u changed level (graph modes).

    The level events apply these moves in bulk internally; this is the
    single-edge form, verifying membership before touching anything.
    """
    if old_level == new_level:
        return
    eid = state.pair_index.get(tuple(sorted((u, v))))
    if eid is None:
        raise EdgeError("no edge between %d and %d" % (u, v))
    e = state.edges[eid]
    idx = e.ends.index(v)
    if e.pos[idx] != old_level or eid not in state.membership[v][old_level]:
        raise CorruptionError(
            "edge %d recorded at bucket %d of vertex %d, expected %d"
            % (eid, e.pos[idx], v, old_level))
    mem = state.membership[v]
    del mem[old_level][eid]
    mem[new_level][eid] = None
    state.profiles[v].move(old_level, new_level, 1)
    e.pos[idx] = new_level
    state._ops += 2
    if state.tracker is not None:
        state.tracker.psi_refresh(v)
