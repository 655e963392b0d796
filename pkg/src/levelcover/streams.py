"""Deterministic synthetic update streams and random instances.

Same (family, params, seed) always yields the same ops; the erdos-churn
family keeps the live edge count small enough for the exhaustive oracle.
"""

from __future__ import annotations

import random

from .core import Mode, VertexAttrs
from .errors import InstanceError
from .formats import InstanceSpec, StreamOp

FAMILIES = ("erdos-churn", "sliding-window", "star-adversary")

# Live-edge ceiling for oracle-friendly churn streams (2^20 orientations).
CHURN_LIVE_CAP = 16


def random_instance(n, seed, mode=Mode.CAPACITATED, beta=2.43, epsilon=0.01,
                    cost_lo=1.0, cost_hi=4.0, cap_hi=3, budget=None,
                    f=None, d_max=None):
    rng = random.Random(seed)
    spec = InstanceSpec()
    spec.beta = beta
    spec.epsilon = epsilon
    spec.mode = Mode(mode)
    spec.f = f
    spec.d_max = d_max
    if budget is not None:
        spec.budget = budget
    elif spec.mode is Mode.SET_COVER:
        spec.budget = max(n, 24)      # hyperedge budget m_max
    else:
        spec.budget = n
    spec.vertices = [
        VertexAttrs(i, round(rng.uniform(cost_lo, cost_hi), 6),
                    rng.randint(1, cap_hi))
        for i in range(n)
    ]
    return spec


def _op(kind, payload):
    return StreamOp(kind, payload, 0)


def erdos_churn(n, T, seed, query_every=0, live_cap=CHURN_LIVE_CAP,
                demand_max=1, hyper_f=0):
    """Random insert/delete churn with a bounded live set.

    ``hyper_f > 0`` emits hyperedges with arities 2..hyper_f instead of
    plain edges; ``demand_max > 1`` attaches random demands.
    """
    rng = random.Random(seed)
    ops = []
    live = {}
    next_id = 0
    cap = min(live_cap, n * (n - 1) // 2)
    for t in range(1, T + 1):
        do_delete = live and (len(live) >= cap or rng.random() < 0.45)
        if do_delete:
            key = rng.choice(sorted(live))
            ends = live.pop(key)
            if hyper_f:
                ops.append(_op("deletehyper", (key,)))
            else:
                ops.append(_op("delete", ends))
        else:
            while True:
                if hyper_f:
                    arity = rng.randint(2, hyper_f)
                    ends = tuple(sorted(rng.sample(range(n), arity)))
                else:
                    u = rng.randrange(n)
                    v = rng.randrange(n)
                    if u == v:
                        continue
                    ends = (min(u, v), max(u, v))
                if ends not in live.values():
                    break
            if hyper_f:
                key = next_id
                next_id += 1
                live[key] = ends
                ops.append(_op("inserthyper", (key, ends)))
            else:
                live[ends] = ends
                d = rng.randint(1, demand_max) if demand_max > 1 else 1
                ops.append(_op("insert", (ends[0], ends[1], d)))
        if query_every and t % query_every == 0:
            ops.append(_op("query", ()))
    return ops


def sliding_window(n, T, window, seed, demand_max=1):
    """T generation steps; step t inserts a fresh edge and, once past the
    window, also deletes the edge inserted at step t - window."""
    rng = random.Random(seed)
    ops = []
    live = set()
    history = []
    for t in range(1, T + 1):
        while True:
            u = rng.randrange(n)
            v = rng.randrange(n)
            if u == v:
                continue
            ends = (min(u, v), max(u, v))
            if ends not in live:
                break
        live.add(ends)
        history.append(ends)
        d = rng.randint(1, demand_max) if demand_max > 1 else 1
        ops.append(_op("insert", (ends[0], ends[1], d)))
        if t > window:
            old = history[t - window - 1]
            live.discard(old)
            ops.append(_op("delete", old))
    return ops


def star_adversary(n, T, seed, query_every=0):
    """Fill and drain a hub's star to force repeated level events."""
    if n < 3:
        raise InstanceError("star family needs n >= 3")
    rng = random.Random(seed)
    ops = []
    leaves = list(range(1, n))
    attached = []
    t = 0
    while t < T:
        rng.shuffle(leaves)
        for leaf in leaves:
            if t >= T:
                break
            ops.append(_op("insert", (0, leaf, 1)))
            attached.append(leaf)
            t += 1
            if query_every and t % query_every == 0:
                ops.append(_op("query", ()))
        while attached and t < T:
            leaf = attached.pop()
            ops.append(_op("delete", (min(0, leaf), max(0, leaf))))
            t += 1
            if query_every and t % query_every == 0:
                ops.append(_op("query", ()))
    return ops


def generate(family, seed, *, n, T, window=None, query_every=0,
             demand_max=1, hyper_f=0, live_cap=CHURN_LIVE_CAP):
    if family == "erdos-churn":
        return erdos_churn(n, T, seed, query_every=query_every,
                           live_cap=live_cap, demand_max=demand_max,
                           hyper_f=hyper_f)
    if family == "sliding-window":
        if not window:
            raise InstanceError("sliding-window needs --window")
        return sliding_window(n, T, window, seed, demand_max=demand_max)
    if family == "star-adversary":
        return star_adversary(n, T, seed, query_every=query_every)
    raise InstanceError("unknown stream family %r (have: %s)"
                        % (family, ", ".join(FAMILIES)))
