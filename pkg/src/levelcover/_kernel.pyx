# cython: language_level=3
"""Compiled per-vertex level profile.

Mirrors the API of ``levelcover._profile_py.LevelProfile`` exactly; the
weight evaluation and bucket arithmetic here are the hot inner loop of
every graph update.
"""

from libc.stdlib cimport calloc, free

cdef double GUARD = 1e-12


cdef class LevelProfile:
    cdef public int levels
    cdef public double cost
    cdef public long capacity
    cdef public double c_star
    cdef public int level
    cdef public long prefix
    cdef public long total
    cdef public double weight
    cdef long *_counts
    cdef double *_lw
    cdef int _top
    cdef double _hi
    cdef double _lo

    def __cinit__(self, int levels, double cost, long capacity,
                  level_weight, double c_star):
        cdef int j
        self.levels = levels
        self.cost = cost
        self.capacity = capacity
        self.c_star = c_star
        self.level = 0
        self.prefix = 0
        self.total = 0
        self.weight = 0.0
        self._top = 0
        self._hi = cost * (1.0 + GUARD)
        self._lo = c_star * (1.0 - GUARD)
        self._counts = <long *>calloc(levels + 1, sizeof(long))
        self._lw = <double *>calloc(levels + 1, sizeof(double))
        if self._counts == NULL or self._lw == NULL:
            raise MemoryError()
        for j in range(levels + 1):
            self._lw[j] = level_weight[j]

    def __dealloc__(self):
        if self._counts != NULL:
            free(self._counts)
        if self._lw != NULL:
            free(self._lw)

    @property
    def counts(self):
        return [self._counts[j] for j in range(self.levels + 1)]

    @property
    def level_weight(self):
        return [self._lw[j] for j in range(self.levels + 1)]

    cdef void _recompute(self):
        cdef double s = 0.0
        cdef long c, p
        cdef long cap = self.capacity
        cdef int lvl = self.level
        cdef int j = self._top
        if cap < 0:
            while j > lvl:
                c = self._counts[j]
                if c:
                    s += c * self._lw[j]
                j -= 1
            s += self.prefix * self._lw[lvl]
        else:
            while j > lvl:
                c = self._counts[j]
                if c:
                    if c > cap:
                        c = cap
                    s += c * self._lw[j]
                j -= 1
            p = self.prefix
            if p > cap:
                p = cap
            s += p * self._lw[lvl]
        self.weight = s

    cpdef add(self, int j, long d):
        self._counts[j] += d
        self.total += d
        if j <= self.level:
            self.prefix += d
        if j > self._top:
            self._top = j
        self._recompute()

    cpdef remove(self, int j, long d):
        cdef long c = self._counts[j] - d
        cdef int top
        if c < 0:
            raise ValueError("bucket underflow at level %d" % j)
        self._counts[j] = c
        self.total -= d
        if j <= self.level:
            self.prefix -= d
        top = self._top
        while top > 0 and self._counts[top] == 0:
            top -= 1
        self._top = top
        self._recompute()

    cpdef move(self, int a, int b, long d):
        cdef int lvl, top
        if a == b:
            return
        if self._counts[a] < d:
            raise ValueError("bucket underflow moving %d -> %d" % (a, b))
        self._counts[a] -= d
        self._counts[b] += d
        lvl = self.level
        if a <= lvl:
            self.prefix -= d
        if b <= lvl:
            self.prefix += d
        if b > self._top:
            self._top = b
        else:
            top = self._top
            while top > 0 and self._counts[top] == 0:
                top -= 1
            self._top = top
        self._recompute()

    cpdef set_level(self, int new_level):
        cdef long p = 0
        cdef int j
        self.level = new_level
        for j in range(new_level + 1):
            p += self._counts[j]
        self.prefix = p
        self._recompute()

    cpdef double external(self):
        cdef double s = 0.0
        cdef long c
        cdef long cap = self.capacity
        cdef int j
        for j in range(self._top, self.level, -1):
            c = self._counts[j]
            if c:
                if cap >= 0 and c > cap:
                    c = cap
                s += c * self._lw[j]
        return s

    cpdef double weight_at(self, int lvl):
        cdef double s = 0.0
        cdef long c, p
        cdef long cap = self.capacity
        cdef int j, start
        start = self._top if self._top > lvl else lvl
        for j in range(start, lvl, -1):
            c = self._counts[j]
            if c:
                if cap >= 0 and c > cap:
                    c = cap
                s += c * self._lw[j]
        p = 0
        for j in range(lvl + 1):
            p += self._counts[j]
        if cap >= 0 and p > cap:
            p = cap
        return s + p * self._lw[lvl]

    cpdef long count_at(self, int j):
        return self._counts[j]

    cpdef long edge_level_count(self, int i):
        if i < self.level:
            return 0
        if i == self.level:
            return self.prefix
        return self._counts[i]

    cpdef int dirty_dir(self):
        cdef double w = self.weight
        if w > self._hi:
            return 1
        if self.level > 0 and w < self._lo:
            return -1
        return 0
