# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled one-pass k-cluster kernel, same interface as ``_kernel_py.OnePass``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline Py_ssize_t _root(Py_ssize_t[::1] parent, Py_ssize_t v) noexcept nogil:
    while parent[v] != v:
        v = parent[v]
    return v


cdef class OnePass:
    cdef readonly Py_ssize_t n, k, n_pts, n_msf
    cdef bint keep_diagonal
    cdef Py_ssize_t[::1] parent, size, first_child, next_sib, stack, rep
    cdef double[::1] tau, birth, births, deaths
    cdef cnp.int64_t[::1] reps, msf
    cdef object _tau, _birth, _births, _deaths, _reps, _msf

    def __init__(self, Py_ssize_t n, Py_ssize_t k, bint keep_diagonal=False):
        self.n = n
        self.k = k
        self.keep_diagonal = keep_diagonal
        self.parent = np.arange(n, dtype=np.intp)
        self.size = np.ones(n, dtype=np.intp)
        self.first_child = np.full(n, -1, dtype=np.intp)
        self.next_sib = np.full(n, -1, dtype=np.intp)
        self.stack = np.empty(max(n, 1), dtype=np.intp)
        self.rep = np.arange(n, dtype=np.intp)
        init = 0.0 if k <= 1 else np.inf
        self._tau = np.full(n, init, dtype=np.float64)
        self._birth = np.full(n, init, dtype=np.float64)
        self.tau = self._tau
        self.birth = self._birth
        cap = max(n, 1)
        self._births = np.empty(cap, dtype=np.float64)
        self._deaths = np.empty(cap, dtype=np.float64)
        self._reps = np.empty(cap, dtype=np.int64)
        self._msf = np.empty(cap, dtype=np.int64)
        self.births = self._births
        self.deaths = self._deaths
        self.reps = self._reps
        self.msf = self._msf
        self.n_pts = 0
        self.n_msf = 0

    cdef Py_ssize_t _activate(self, Py_ssize_t root, double w) noexcept nogil:
        # depth-first walk of the tree under root; returns the smallest member id
        cdef Py_ssize_t top = 1, x, c, lo = root
        self.stack[0] = root
        while top > 0:
            top -= 1
            x = self.stack[top]
            self.tau[x] = w
            if x < lo:
                lo = x
            c = self.first_child[x]
            while c >= 0:
                self.stack[top] = c
                top += 1
                c = self.next_sib[c]
        self.birth[root] = w
        return lo

    def feed(self, cnp.int64_t[::1] su, cnp.int64_t[::1] sv, double[::1] sw, cnp.int64_t[::1] idx):
        cdef Py_ssize_t m = sw.shape[0], i, ra, rb, sa, sb, big, small, yrep = 0, erep = 0
        cdef Py_ssize_t k = self.k, full = self.n - 1
        cdef double w, ybirth = 0, ebirth = 0
        with nogil:
            for i in range(m):
                if self.n_msf >= full:
                    break
                ra = _root(self.parent, su[i])
                rb = _root(self.parent, sv[i])
                if ra == rb:
                    continue
                self.msf[self.n_msf] = idx[i]
                self.n_msf += 1
                w = sw[i]
                sa = self.size[ra]
                sb = self.size[rb]
                if sa + sb >= k:
                    if sa < k:
                        self.rep[ra] = self._activate(ra, w)
                    if sb < k:
                        self.rep[rb] = self._activate(rb, w)
                    if self.birth[ra] < self.birth[rb] or (
                        self.birth[ra] == self.birth[rb] and self.rep[ra] < self.rep[rb]
                    ):
                        ebirth = self.birth[ra]; erep = self.rep[ra]
                        ybirth = self.birth[rb]; yrep = self.rep[rb]
                    else:
                        ebirth = self.birth[rb]; erep = self.rep[rb]
                        ybirth = self.birth[ra]; yrep = self.rep[ra]
                    if sa >= k and sb >= k and (self.keep_diagonal or ybirth < w):
                        self.births[self.n_pts] = ybirth
                        self.deaths[self.n_pts] = w
                        self.reps[self.n_pts] = yrep
                        self.n_pts += 1
                # union by size, ties to the smaller root id
                if sa > sb or (sa == sb and ra < rb):
                    big = ra; small = rb
                else:
                    big = rb; small = ra
                self.parent[small] = big
                self.size[big] = sa + sb
                self.next_sib[small] = self.first_child[big]
                self.first_child[big] = small
                if sa + sb >= k:
                    self.birth[big] = ebirth
                    self.rep[big] = erep
        return self.n_msf >= full

    def result(self):
        cdef Py_ssize_t r
        ess = sorted(
            (self._birth[r], self.rep[r])
            for r in range(self.n)
            if self.parent[r] == r and self.size[r] >= self.k
        )
        return (
            self._tau.copy(),
            self._births[: self.n_pts].copy(),
            self._deaths[: self.n_pts].copy(),
            self._reps[: self.n_pts].copy(),
            np.array([e[0] for e in ess], dtype=np.float64),
            np.array([e[1] for e in ess], dtype=np.int64),
            self._msf[: self.n_msf].copy(),
        )
