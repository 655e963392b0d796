"""Bank-account instrumentation for the amortized-cost argument.

The bank B = (1/eps) * (sum phi(e) + sum psi(v)) is deposited into by each
update's adjustment step and drained by level events; per-event accounting
inequalities are research-grade checks, so failures are collected with their
traces rather than raised.

phi is kept as an exact integer unit count times the slope; psi is cached
per vertex and re-derived from the maintained weight whenever it changes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Mode
from .errors import InstanceError

CHECK_TOL = 1e-6

_SUPPORTED = frozenset({Mode.CAPACITATED, Mode.WEIGHTED_VC, Mode.SET_COVER})


@dataclass
class PotentialSnapshot:
    phi_sum: float
    psi_sum: float
    bank: float


@dataclass
class CheckResult:
    kind: str          # insert-deposit | delete-deposit | level-up | level-down
    passed: bool
    margin: float      # slack left in the binding inequality
    detail: dict


def phi_slope(params):
    if params.mode is Mode.WEIGHTED_VC:
        return 1.0 + params.epsilon
    return params.beta / (params.beta - 1.0) + params.epsilon


def phi(edge_level, params):
    """Per-edge potential: slope * (L - level(e))."""
    if not 0 <= edge_level <= params.levels:
        raise InstanceError("edge level %r outside [0, %d]"
                            % (edge_level, params.levels))
    return phi_slope(params) * (params.levels - edge_level)


def _psi_prefactor(params, level):
    pref = params.beta ** (level + 1) / (params.mu * (params.beta - 1.0))
    if params.mode is Mode.SET_COVER:
        pref /= params.f
    return pref


def psi(state, v):
    """Per-vertex potential; zero for passive (degree-0) vertices.

    The threshold alpha*c_v* equals c_v/(beta+1) in every supported mode
    (the set-cover f cancels between the band and the threshold).
    """
    prof = state.profiles[v]
    if prof.total == 0:
        return 0.0
    short = state.cost[v] / (state.params.beta + 1.0) - prof.weight
    if short <= 0.0:
        return 0.0
    return _psi_prefactor(state.params, prof.level) * short


def compute_snapshot(state):
    """From-scratch B; the incremental tracker must agree to 1e-9 relative."""
    p = state.params
    slope = phi_slope(p)
    phi_sum = 0.0
    for eid in sorted(state.edges):
        phi_sum += slope * (p.levels - state.edges[eid].level)
    psi_sum = 0.0
    for v in range(state.n):
        psi_sum += psi(state, v)
    return PotentialSnapshot(phi_sum, psi_sum, (phi_sum + psi_sum) / p.epsilon)


class PotentialTracker:
    """Opt-in incremental bank with per-event accounting checks.

    Attach with ``PotentialTracker.attach(state)`` before any update; it
    costs O(degree) per event, so timing runs leave it off.
    """

    def __init__(self, state):
        p = state.params
        if p.mode not in _SUPPORTED:
            raise InstanceError(
                "potential tracking supports capacitated/weightedvc/setcover")
        self.state = state
        self.params = p
        self.eps = p.epsilon
        self.slope = phi_slope(p)
        self._pref = [_psi_prefactor(p, l) for l in range(p.levels + 1)]
        self.phi_units = 0
        for e in state.edges.values():
            self.phi_units += p.levels - e.level
        self._psi = [0.0] * state.n
        self.psi_sum = 0.0
        for v in range(state.n):
            val = psi(state, v)
            self._psi[v] = val
            self.psi_sum += val
        self.deposits_total = 0.0
        self.event_count = 0
        self.results = []             # failures only; drained by the harness
        self.failures_total = 0
        self._b_mark = self.bank()
        self._b_update_start = self._b_mark
        # Lemma-5 deposit ceilings, taken at face value per mode.
        jump = p.beta / (p.beta - 1.0)
        self.insert_bound = (self.slope * p.levels + jump) / self.eps
        self.delete_bound = jump / self.eps

    @classmethod
    def attach(cls, state):
        tracker = cls(state)
        state.tracker = tracker
        return tracker

    # -- incremental maintenance (called by the engine) ------------------------

    def edge_added(self, level):
        self.phi_units += self.params.levels - level

    def edge_removed(self, level):
        self.phi_units -= self.params.levels - level

    def edge_level_changed(self, old, new):
        self.phi_units += old - new

    def psi_refresh(self, v):
        state = self.state
        prof = state.profiles[v]
        if prof.total == 0:
            val = 0.0
        else:
            short = state.cost[v] / (self.params.beta + 1.0) - prof.weight
            val = self._pref[prof.level] * short if short > 0.0 else 0.0
        old = self._psi[v]
        if val != old:
            self._psi[v] = val
            self.psi_sum += val - old

    def bank(self):
        return (self.slope * self.phi_units + self.psi_sum) / self.eps

    def snapshot(self):
        return PotentialSnapshot(
            self.slope * self.phi_units, self.psi_sum, self.bank())

    # -- accounting checks ------------------------------------------------------

    def _record(self, kind, passed, margin, detail):
        self.event_count += 1
        if not passed:
            self.failures_total += 1
            self.results.append(CheckResult(kind, passed, margin, detail))

    def on_update_begin(self, state):
        self._b_update_start = self.bank()

    def on_adjusted(self, state, kind):
        b = self.bank()
        deposit = b - self._b_update_start
        self.deposits_total += max(deposit, 0.0)
        bound = self.insert_bound if kind == "insert" else self.delete_bound
        self._record(
            "%s-deposit" % kind,
            deposit <= bound + CHECK_TOL,
            bound - deposit,
            {"deposit": deposit, "bound": bound, "t": state.updates_applied},
        )
        self._b_mark = b

    def on_level_event(self, state, v, direction, from_level, count):
        b = self.bank()
        drop = self._b_mark - b
        self._b_mark = b
        p = self.params
        if direction > 0:
            passed = drop >= count - CHECK_TOL
            margin = drop - count
            kind = "level-up"
            detail = {"v": v, "from": from_level, "count": count,
                      "drop": drop, "t": state.updates_applied}
        else:
            passed = drop >= count - CHECK_TOL
            margin = drop - count
            kind = "level-down"
            detail = {"v": v, "from": from_level, "count": count,
                      "drop": drop, "t": state.updates_applied}
            if state.profiles[v].total > 0:
                # strong form; a passive vertex has psi pinned at 0, moves no
                # edges, and pays nothing, so only active drops owe this much
                mid = p.c_star(state.cost[v]) * p.beta ** from_level / p.mu
                detail["mid_bound"] = mid
                passed = passed and drop >= mid - CHECK_TOL \
                    and mid >= count - CHECK_TOL
                margin = min(margin, drop - mid, mid - count)
        self._record(kind, passed, margin, detail)

    def on_update_end(self, state):
        pass

    def drain_failures(self):
        out = self.results
        self.results = []
        return out


def assert_event_accounting(tracker, state, v, direction, from_level, count):
    """One-shot form of the per-event check (testing hook)."""
    before = len(tracker.results)
    tracker.on_level_event(state, v, direction, from_level, count)
    new = tracker.results[before:]
    return new[0] if new else CheckResult(
        "level-up" if direction > 0 else "level-down", True, 0.0, {})
