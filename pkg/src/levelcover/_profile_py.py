"""Pure-Python per-vertex level profile (fallback for the compiled kernel).

A profile holds, for one vertex, the integer count of incident edge units
(demand-weighted in demand modes) per *peer level* -- the highest level
among the edge's other endpoints.  The capacity-capped vertex weight is
recomputed from these integers on every mutation, never accumulated
incrementally, so it carries no float drift.
"""

from __future__ import annotations

# Relative guard band applied to both dirtiness thresholds so rounding
# cannot oscillate a vertex across a boundary.
GUARD = 1e-12


class LevelProfile:
    """Level-degree counts and cached weight for a single vertex.

    ``capacity < 0`` means uncapacitated (the min-cap is skipped).
    ``level_weight[j]`` must equal mu * beta**-j for j in 0..levels.
    """

    __slots__ = (
        "levels", "cost", "capacity", "level_weight", "c_star",
        "level", "counts", "prefix", "total", "weight", "_top",
        "_hi", "_lo",
    )

    def __init__(self, levels, cost, capacity, level_weight, c_star):
        self.levels = levels
        self.cost = cost
        self.capacity = capacity
        self.level_weight = level_weight
        self.c_star = c_star
        self.level = 0
        self.counts = [0] * (levels + 1)
        self.prefix = 0          # sum of counts[0..level]
        self.total = 0           # degree in edge units; 0 <=> passive
        self.weight = 0.0
        self._top = 0            # highest j with counts[j] > 0
        self._hi = cost * (1.0 + GUARD)
        self._lo = c_star * (1.0 - GUARD)

    def add(self, j, d):
        self.counts[j] += d
        self.total += d
        if j <= self.level:
            self.prefix += d
        if j > self._top:
            self._top = j
        self._recompute()

    def remove(self, j, d):
        c = self.counts[j] - d
        if c < 0:
            raise ValueError("bucket underflow at level %d" % j)
        self.counts[j] = c
        self.total -= d
        if j <= self.level:
            self.prefix -= d
        top = self._top
        counts = self.counts
        while top > 0 and counts[top] == 0:
            top -= 1
        self._top = top
        self._recompute()

    def move(self, a, b, d):
        """Shift d units from bucket a to bucket b."""
        if a == b:
            return
        counts = self.counts
        if counts[a] < d:
            raise ValueError("bucket underflow moving %d -> %d" % (a, b))
        counts[a] -= d
        counts[b] += d
        lvl = self.level
        if a <= lvl:
            self.prefix -= d
        if b <= lvl:
            self.prefix += d
        if b > self._top:
            self._top = b
        else:
            top = self._top
            while top > 0 and counts[top] == 0:
                top -= 1
            self._top = top
        self._recompute()

    def set_level(self, new_level):
        self.level = new_level
        self.prefix = sum(self.counts[: new_level + 1])
        self._recompute()

    def _recompute(self):
        # High levels first: smallest terms enter the sum first.
        counts = self.counts
        lw = self.level_weight
        cap = self.capacity
        lvl = self.level
        s = 0.0
        j = self._top
        if cap < 0:
            while j > lvl:
                c = counts[j]
                if c:
                    s += c * lw[j]
                j -= 1
            s += self.prefix * lw[lvl]
        else:
            while j > lvl:
                c = counts[j]
                if c:
                    s += (c if c < cap else cap) * lw[j]
                j -= 1
            p = self.prefix
            s += (p if p < cap else cap) * lw[lvl]
        self.weight = s

    def external(self):
        """Weight contributed by edges strictly above the vertex level."""
        counts = self.counts
        lw = self.level_weight
        cap = self.capacity
        s = 0.0
        for j in range(self._top, self.level, -1):
            c = counts[j]
            if c:
                if cap >= 0 and c > cap:
                    c = cap
                s += c * lw[j]
        return s

    def weight_at(self, lvl):
        """Hypothetical weight if this vertex sat at ``lvl`` (no mutation)."""
        counts = self.counts
        lw = self.level_weight
        cap = self.capacity
        s = 0.0
        for j in range(max(self._top, lvl), lvl, -1):
            c = counts[j]
            if c:
                if cap >= 0 and c > cap:
                    c = cap
                s += c * lw[j]
        p = sum(counts[: lvl + 1])
        if cap >= 0 and p > cap:
            p = cap
        return s + p * lw[lvl]

    def count_at(self, j):
        return self.counts[j]

    def edge_level_count(self, i):
        """Incident units at *edge level* i: prefix at the own level, raw above."""
        if i < self.level:
            return 0
        if i == self.level:
            return self.prefix
        return self.counts[i]

    def dirty_dir(self):
        """+1 weight too high, -1 too low (level > 0 only), 0 clean."""
        w = self.weight
        if w > self._hi:
            return 1
        if self.level > 0 and w < self._lo:
            return -1
        return 0
