"""Pure-Python one-pass k-cluster kernel (fallback for the Cython build)."""

import numpy as np

from .graph import AugmentedUnionFind

INF = float("inf")


class OnePass:
    """Incremental k-cluster sweep.

    Feed edge batches in globally sorted order; ``feed`` returns True once
    the spanning forest has n - 1 edges, after which later edges cannot
    change anything.
    """

    def __init__(self, n, k, keep_diagonal=False):
        self.n = n
        self.k = k
        self.keep_diagonal = keep_diagonal
        self.uf = AugmentedUnionFind(n)
        self.tau = [INF] * n
        if k <= 1:
            self.tau = [0.0] * n
            self.uf.birth = [0.0] * n
        self.births, self.deaths, self.reps, self.msf = [], [], [], []

    def _activate(self, root, w):
        members = self.uf.component(root)
        for x in members:
            self.tau[x] = w
        self.uf.birth[root] = w
        self.uf.rep[root] = min(members)

    def feed(self, su, sv, sw, idx):
        uf, k = self.uf, self.k
        size, birth, rep = uf.size, uf.birth, uf.rep
        for a, b, w, e in zip(su.tolist(), sv.tolist(), sw.tolist(), idx.tolist()):
            if len(self.msf) == self.n - 1:
                break
            ra, rb = uf.root(a), uf.root(b)
            if ra == rb:
                continue
            self.msf.append(e)
            sa, sb = size[ra], size[rb]
            if sa + sb < k:
                uf.merge(ra, rb)
                continue
            if sa < k:
                self._activate(ra, w)
            if sb < k:
                self._activate(rb, w)
            ka, kb = (birth[ra], rep[ra]), (birth[rb], rep[rb])
            elder, younger = (ka, kb) if ka < kb else (kb, ka)
            if sa >= k and sb >= k and (self.keep_diagonal or younger[0] < w):
                self.births.append(younger[0])
                self.deaths.append(w)
                self.reps.append(younger[1])
            r = uf.merge(ra, rb)
            birth[r], rep[r] = elder
        return len(self.msf) >= self.n - 1

    def result(self):
        uf = self.uf
        ess = sorted((uf.birth[r], uf.rep[r]) for r in uf.roots() if uf.size[r] >= self.k)
        return (
            np.array(self.tau, dtype=np.float64),
            np.array(self.births, dtype=np.float64),
            np.array(self.deaths, dtype=np.float64),
            np.array(self.reps, dtype=np.int64),
            np.array([e[0] for e in ess], dtype=np.float64),
            np.array([e[1] for e in ess], dtype=np.int64),
            np.array(self.msf, dtype=np.int64),
        )
