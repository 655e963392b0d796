"""Static warm-up solver: start every vertex at the top level and greedily
drop levels while the scheme stays valid.

The fixpoint is non-improvable (no single vertex can drop and keep every
weight within cost), which pins each edge-owning vertex's weight within a
(beta+1) band of its cost."""

from __future__ import annotations

from ._profile_py import GUARD
from .core import Mode
from .errors import InstanceError, SchemeStateError


def bulk_load(state, edges):
    """Register edges without running FIX (static construction only)."""
    for ends, demand in edges:
        state.insert_edge_raw(ends, demand)


def _weight_ok(state, v):
    return state.weight(v) <= state.cost[v] * (1.0 + GUARD)


def can_drop(state, v):
    """True iff v could sit one level lower with every weight still valid.

    Evaluated as a scoped trial mutation with exact rollback, so it runs the
    same bucket paths the dynamic module uses.
    """
    if state.level(v) <= 0:
        raise SchemeStateError("vertex %d is already at level 0" % v)
    journal = []
    _, pre_w = state.shift_down(v, journal)
    ok = _weight_ok(state, v) and all(_weight_ok(state, u) for u in pre_w)
    state.undo(journal)
    return ok


def _reset_to_top(state):
    lvl = state.params.levels
    for v in range(state.n):
        state.profiles[v].set_level(lvl)
    for eid in sorted(state.edges):
        e = state.edges[eid]
        for idx, u in enumerate(e.ends):
            oldp = e.pos[idx]
            if oldp != lvl:
                mem = state.membership[u]
                del mem[oldp][eid]
                mem[lvl][eid] = None
                e.pos[idx] = lvl
        # counts moved wholesale below; fix profiles after membership
        e.level = lvl
        owner = min(e.ends)
        if e.owner != owner:
            state._set_owner(e, owner)
    for v in range(state.n):
        prof = state.profiles[v]
        total = prof.total
        unit_counts = [0] * (state.params.levels + 1)
        for j, c in enumerate(prof.counts):
            unit_counts[j] = c
        for j in range(state.params.levels):
            c = unit_counts[j]
            if c:
                prof.move(j, lvl, c)
        assert prof.total == total


def solve_static(state):
    """Drop-from-top greedy; returns the same state, now valid and tight."""
    if state.tracker is not None:
        raise InstanceError("potential tracking is a dynamic-mode feature")
    state.dirty.clear()
    for v in range(state.n):
        state.in_dirty[v] = False
    _reset_to_top(state)
    for v in range(state.n):
        if not _weight_ok(state, v):
            raise InstanceError(
                "instance invalid at top level; declared bounds violated")
    changed = True
    while changed:
        changed = False
        for v in range(state.n):
            while state.level(v) > 0 and can_drop(state, v):
                state.shift_down(v)
                changed = True
    tight = state.params.beta + 1.0
    if state.params.mode is Mode.SET_COVER:
        tight *= state.params.f
    state.tight_factor = tight
    state.version += 1
    return state
