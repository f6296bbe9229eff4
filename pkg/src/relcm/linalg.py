"""Exact sparse linear algebra over a field.

Vectors are dicts ``{index: coefficient}`` with integer indices.  A linear map
is described by the list of images of the source basis vectors.
"""

from __future__ import annotations

import heapq
from typing import Sequence


def _axpy(v: dict, c, w: dict):
    """v -= c * w  (in place); returns the keys that appeared."""
    new = []
    for k, x in w.items():
        y = v.get(k)
        if y is None:
            v[k] = -c * x
            new.append(k)
        else:
            y = y - c * x
            if y == 0:
                del v[k]
            else:
                v[k] = y
    return new


class Echelon:
    """Incrementally built echelon basis of a subspace.

    Each stored row has pivot = its smallest index, normalised to 1.  With
    ``track=True`` every row remembers its expression in terms of the vectors
    passed to :meth:`add`, which yields kernels and preimages.
    """

    def __init__(self, track: bool = False):
        self.rows: dict = {}
        self.combs: dict = {}
        self.track = track
        self.count = 0
        self.kernel: list = []

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self):
        return len(self.rows)

    def _reduce(self, v: dict, comb: dict | None):
        v = dict(v)
        heap = [k for k in v if k in self.rows]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            c = v.get(k)
            if c is None:
                continue
            row = self.rows[k]
            for nk in _axpy(v, c, row):
                if nk in self.rows:
                    heapq.heappush(heap, nk)
            if comb is not None:
                _axpy(comb, c, self.combs[k])
        return v

    def reduce(self, v: dict) -> dict:
        return self._reduce(v, None)

    def contains(self, v: dict) -> bool:
        return not self._reduce(v, None)

    def add(self, v: dict) -> bool:
        """Add ``v``; returns True when it enlarged the span."""
        comb = {self.count: 1} if self.track else None
        self.count += 1
        r = self._reduce(v, comb)
        if not r:
            if self.track:
                self.kernel.append(comb)
            return False
        p = min(r)
        inv = 1 / r[p]
        self.rows[p] = {k: x * inv for k, x in r.items()}
        if self.track:
            self.combs[p] = {k: x * inv for k, x in comb.items()}
        return True

    def solve(self, v: dict):
        """Coefficients over the added vectors expressing ``v``, or None."""
        if not self.track:
            raise ValueError("solve needs track=True")
        comb: dict = {}
        r = self._reduce(v, comb)
        if r:
            return None
        return {k: -x for k, x in comb.items()}

    def basis(self) -> list:
        return [self.rows[k] for k in sorted(self.rows)]


def rank(vectors: Sequence[dict]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.dim


def kernel(images: Sequence[dict]) -> list:
    """Basis of {c : sum c_j images[j] = 0} as vectors indexed by j."""
    e = Echelon(track=True)
    for v in images:
        e.add(v)
    # the collected combinations are independent: each has a distinct newest index
    return e.kernel


def span(vectors: Sequence[dict]) -> Echelon:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e


def apply(images: Sequence[dict], v: dict) -> dict:
    """Image of ``v`` under the map with the given column images."""
    out: dict = {}
    for j, c in v.items():
        _axpy(out, -c, images[j])
    return out


def compose(outer: Sequence[dict], inner: Sequence[dict]) -> list:
    return [apply(outer, v) for v in inner]


def is_zero_map(images: Sequence[dict]) -> bool:
    return all(not v for v in images)


def homology_dim(d_in: Sequence[dict], d_out: Sequence[dict], dim: int) -> int:
    """dim ker(d_out) - rank(d_in) for maps into / out of a space of dimension ``dim``."""
    return dim - rank(d_out) - rank(d_in)


def induced_rank(f: Sequence[dict], cycles: Sequence[dict], boundaries_target: Sequence[dict]) -> int:
    """Rank of the map on homology induced by ``f`` on the given cycle basis."""
    e = span(boundaries_target)
    base = e.dim
    for z in cycles:
        e.add(apply(f, z))
    return e.dim - base
