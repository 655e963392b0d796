import random

import pytest

from levelcover.core import VertexAttrs, new_instance
from levelcover.dynamic import delete_edge, insert_edge


def random_vertices(rng, n, cost_lo=1.0, cost_hi=4.0, cap_hi=3):
    return [VertexAttrs(i, rng.uniform(cost_lo, cost_hi), rng.randint(1, cap_hi))
            for i in range(n)]


def random_edge_set(rng, n, m):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return [((u, v), 1) for (u, v) in rng.sample(pairs, min(m, len(pairs)))]


def churn(state, rng, steps, live_cap=16, on_update=None):
    """Random insert/delete mix through the dynamic path."""
    n = state.n
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    live = set()
    for t in range(steps):
        if live and (len(live) >= live_cap or rng.random() < 0.45):
            e = rng.choice(sorted(live))
            live.discard(e)
            report = delete_edge(state, *e)
        else:
            free = [p for p in pairs if p not in live]
            if not free:
                continue
            e = rng.choice(free)
            live.add(e)
            report = insert_edge(state, *e)
        if on_update is not None:
            on_update(t, report)
    return live


@pytest.fixture
def unit_pair_state():
    """The canonical two-vertex instance: c=1, k=1, beta=2, eps=0.05."""
    verts = [VertexAttrs(0, 1.0, 1), VertexAttrs(1, 1.0, 1)]
    return new_instance(verts, 2.0, 0.05, "capacitated", 2)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
