"""Edge insertion/deletion and the FIX repair loop.

An update adjusts the touched endpoints' weights, then FIX moves dirty
vertices one level at a time (FIFO) until the maintenance band
c_v* <= W_v <= c_v holds for every vertex above level 0.  Updates are
atomic from the caller's view: no partially-fixed state is observable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EdgeError, FixBudgetError

# Safety valve: elementary ops a single FIX may spend before we call it a bug.
FIX_OP_BUDGET = 10 ** 9


@dataclass
class UpdateReport:
    """Per-update accounting.

    touched_edges is the Count delta (edge records written, including the
    inserted/deleted edge itself); wall_ops counts elementary bucket, weight,
    and assignment operations, so touched_edges <= wall_ops always.
    """

    touched_edges: int = 0
    level_ups: list = field(default_factory=list)
    level_downs: list = field(default_factory=list)
    dirty_peak: int = 0
    wall_ops: int = 0
    multiplicity_violations: list = field(default_factory=list)

    def merge(self, other):
        self.touched_edges += other.touched_edges
        self.level_ups.extend(other.level_ups)
        self.level_downs.extend(other.level_downs)
        self.dirty_peak = max(self.dirty_peak, other.dirty_peak)
        self.wall_ops += other.wall_ops
        self.multiplicity_violations.extend(other.multiplicity_violations)
        return self


def _rescreen_changed(state, pre_w):
    profiles = state.profiles
    for u in sorted(pre_w):
        if profiles[u].weight != pre_w[u]:
            state.rescreen(u)


def level_up(state, v, report):
    i = state.level(v)
    count, pre_w = state.shift_up(v)
    report.level_ups.append((v, i, i + 1))
    report.touched_edges += count
    state.touched_total += count
    if state.tracker is not None:
        state.tracker.on_level_event(state, v, +1, i, count)
    state.rescreen(v)
    _rescreen_changed(state, pre_w)


def level_down(state, v, report):
    i = state.level(v)
    cap = state.cap[v]
    copies = -(-state.assigned_load[v] // cap) if cap > 0 else (
        1 if state.assigned_load[v] else 0)
    if copies > 1:
        # Lemma-12 band: with alpha >= beta/(beta-1) a vertex never levels
        # down while holding more than one copy.  Recorded, not raised.
        report.multiplicity_violations.append((v, copies))
    count, pre_w = state.shift_down(v)
    report.level_downs.append((v, i, i - 1))
    report.touched_edges += count
    state.touched_total += count
    if state.tracker is not None:
        state.tracker.on_level_event(state, v, -1, i, count)
    state.rescreen(v)
    _rescreen_changed(state, pre_w)


def fix(state, report=None):
    """Drain the dirty queue; returns the (possibly fresh) report."""
    if report is None:
        report = UpdateReport()
    start_ops = state._ops
    dirty = state.dirty
    profiles = state.profiles
    while dirty:
        if len(dirty) > report.dirty_peak:
            report.dirty_peak = len(dirty)
        v = state.pop_dirty()
        d = profiles[v].dirty_dir()
        if d > 0:
            level_up(state, v, report)
        elif d < 0 and profiles[v].level > 0:
            level_down(state, v, report)
        if state._ops - start_ops > FIX_OP_BUDGET:
            raise FixBudgetError(
                "FIX exceeded %d elementary ops; parameters violated or bug"
                % FIX_OP_BUDGET)
    return report


def _finish(state, report, ops_before):
    report.wall_ops = state._ops - ops_before
    state.updates_applied += 1
    state.version += 1
    if state.tracker is not None:
        state.tracker.on_update_end(state)
    return report


def insert_any(state, ends, demand=1, eid=None):
    """Shared insert path for plain edges and hyperedges."""
    ops_before = state._ops
    if state.tracker is not None:
        state.tracker.on_update_begin(state)
    e = state.insert_edge_raw(ends, demand, eid)
    report = UpdateReport(touched_edges=1)
    state.touched_total += 1
    if state.tracker is not None:
        state.tracker.on_adjusted(state, "insert")
    for w in e.ends:
        state.rescreen(w)
    fix(state, report)
    return _finish(state, report, ops_before)


def insert_edge(state, u, v, demand=1):
    """Insert edge (u, v) and restore the invariant; returns an UpdateReport."""
    if u == v:
        raise EdgeError("self-loop (%r, %r)" % (u, v))
    if demand != 1 and not state._demand_weighted:
        raise EdgeError("demand %r only allowed in demand modes" % demand)
    if demand < 1 or int(demand) != demand:
        raise EdgeError("demand must be a positive integer")
    return insert_any(state, (u, v), demand)


def delete_edge(state, u, v):
    """Delete edge (u, v) and restore the invariant."""
    eid = state.pair_index.get(tuple(sorted((u, v))))
    if eid is None:
        raise EdgeError("edge (%r, %r) not present" % (u, v))
    return delete_edge_by_id(state, eid)


def delete_edge_by_id(state, eid):
    if eid not in state.edges:
        raise EdgeError("edge %r not present" % (eid,))
    ops_before = state._ops
    if state.tracker is not None:
        state.tracker.on_update_begin(state)
    e = state.remove_edge_raw(eid)
    report = UpdateReport(touched_edges=1)
    state.touched_total += 1
    if state.tracker is not None:
        state.tracker.on_adjusted(state, "delete")
    for w in e.ends:
        state.rescreen(w)
    fix(state, report)
    return _finish(state, report, ops_before)
