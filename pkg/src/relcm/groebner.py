"""Groebner bases for submodules of free modules over a polynomial ring.

Vectors are sparse dicts ``{(position, exponent): coefficient}``; an ideal is
the rank-1 case.  Terms are ordered position-over-term: a smaller position
index dominates, ties broken by the ring's monomial order.  Syzygies and
cofactor lifts come from running Buchberger on generators tagged with extra
unit coordinates placed after every real position, so the tag columns record
the reduction trace.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from .ring import Poly, RingContext


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _esub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _eadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _elcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class TermOrder:
    """Position-over-term order on module terms ``(pos, exp)``."""

    def __init__(self, ring: RingContext):
        self.ring = ring
        self._mkey = ring.monomial_key
        self._cache: dict = {}

    def key(self, t):
        k = self._cache.get(t)
        if k is None:
            k = (-t[0], self._mkey(t[1]))
            self._cache[t] = k
        return k

    def lead(self, vec):
        return max(vec, key=self.key)


_ORDERS: dict = {}


def term_order(ring: RingContext) -> TermOrder:
    o = _ORDERS.get(ring.key)
    if o is None:
        o = TermOrder(ring)
        _ORDERS[ring.key] = o
    return o


def _scale_shift_sub(f, g, q, shift):
    """f -= q * x^shift * g  (in place)."""
    for (gp, ge), gc in g.items():
        t = (gp, _eadd(ge, shift))
        v = f.get(t)
        if v is None:
            f[t] = -q * gc
        else:
            v = v - q * gc
            if v == 0:
                del f[t]
            else:
                f[t] = v


class _Basis:
    """Monic reducers indexed by leading position."""

    def __init__(self, order: TermOrder):
        self.order = order
        self.by_pos: dict = {}

    def add(self, lt, vec):
        self.by_pos.setdefault(lt[0], []).append((lt[1], vec))

    def find(self, t):
        for le, g in self.by_pos.get(t[0], ()):
            if _divides(le, t[1]):
                return le, g
        return None


def reduce_vector(vec: dict, basis: "_Basis", full: bool = True) -> dict:
    """Remainder of ``vec`` on division by the (monic) reducers in ``basis``."""
    f = dict(vec)
    rem = {}
    key = basis.order.key
    while f:
        lt = max(f, key=key)
        c = f[lt]
        hit = basis.find(lt)
        if hit is None:
            rem[lt] = c
            del f[lt]
            if not full:
                rem.update(f)
                break
            continue
        le, g = hit
        _scale_shift_sub(f, g, c, _esub(lt[1], le))
    return rem


def _monic(vec, lt):
    c = vec[lt]
    if c == 1:
        return vec
    inv = 1 / c
    return {t: v * inv for t, v in vec.items()}


def make_basis(vecs: Iterable[dict], ring: RingContext) -> _Basis:
    order = term_order(ring)
    b = _Basis(order)
    for v in vecs:
        if v:
            lt = order.lead(v)
            b.add(lt, _monic(v, lt))
    return b


def groebner(vecs: Sequence[dict], ring: RingContext, product_criterion: bool = False,
             reduced: bool = True) -> list:
    """Groebner basis (reduced by default) of the submodule spanned by ``vecs``.

    ``product_criterion`` is only valid for rank-1 input without tags.
    """
    order = term_order(ring)
    key = order.key
    wdeg = ring.degree_of
    G: list = []
    leads: list = []
    basis = _Basis(order)
    pending: set = set()
    heap: list = []
    counter = 0

    def add(v):
        nonlocal counter
        lt = order.lead(v)
        v = _monic(v, lt)
        idx = len(G)
        G.append(v)
        leads.append(lt)
        basis.add(lt, v)
        for j in range(idx):
            lj = leads[j]
            if lj[0] != lt[0]:
                continue
            if product_criterion and _coprime(lj[1], lt[1]):
                continue
            m = _elcm(lj[1], lt[1])
            pending.add((j, idx))
            counter += 1
            heapq.heappush(heap, (wdeg(m), ring.monomial_key(m), counter, j, idx))

    for v in vecs:
        if not v:
            continue
        r = reduce_vector(v, basis) if G else dict(v)
        if r:
            add(r)

    while heap:
        _, _, _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        li, lj = leads[i], leads[j]
        m = _elcm(li[1], lj[1])
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            lk = leads[k]
            if lk[0] != li[0] or not _divides(lk[1], m):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                skip = True
                break
        if skip:
            continue
        s = {}
        _scale_shift_sub(s, G[i], -1, _esub(m, li[1]))
        _scale_shift_sub(s, G[j], 1, _esub(m, lj[1]))
        if not s:
            continue
        r = reduce_vector(s, basis)
        if r:
            add(r)

    if not reduced:
        return G
    return interreduce(G, ring)


def interreduce(G: Sequence[dict], ring: RingContext) -> list:
    """Reduced Groebner basis from any Groebner basis ``G``."""
    order = term_order(ring)
    items = []
    for v in G:
        if v:
            lt = order.lead(v)
            items.append((lt, _monic(v, lt)))
    items.sort(key=lambda it: order.key(it[0]))
    minimal = []
    for idx, (lt, v) in enumerate(items):
        redundant = False
        for lt2, _ in items[:idx]:
            if lt2[0] == lt[0] and _divides(lt2[1], lt[1]):
                redundant = True
                break
        if not redundant:
            minimal.append((lt, v))
    out = []
    for idx, (lt, v) in enumerate(minimal):
        b = make_basis([w for k, (_, w) in enumerate(minimal) if k != idx], ring)
        tail = dict(v)
        c = tail.pop(lt)
        r = reduce_vector(tail, b)
        r[lt] = c
        out.append(_monic(r, lt))
    out.sort(key=lambda v: order.key(order.lead(v)), reverse=True)
    return out


def tag(vecs: Sequence[dict], rank: int, ring: RingContext) -> list:
    z = ring.zero_exp
    one = ring.field.one
    out = []
    for i, v in enumerate(vecs):
        w = dict(v)
        w[(rank + i, z)] = one
        out.append(w)
    return out


def split(vec: dict, rank: int):
    """Split a tagged vector into (real part, tag part)."""
    a, b = {}, {}
    for (p, e), c in vec.items():
        if p < rank:
            a[(p, e)] = c
        else:
            b[(p - rank, e)] = c
    return a, b


def syzygies(vecs: Sequence[dict], rank: int, ring: RingContext) -> list:
    """Generators of the syzygy module of ``vecs`` (as vectors in R^len(vecs))."""
    if not vecs:
        return []
    G = groebner(tag(vecs, rank, ring), ring)
    order = term_order(ring)
    out = []
    for g in G:
        if order.lead(g)[0] >= rank:
            out.append(split(g, rank)[1])
    return out


class TracedBasis:
    """Groebner basis of span(vecs) remembering how each element arose."""

    def __init__(self, vecs: Sequence[dict], rank: int, ring: RingContext):
        self.rank = rank
        self.ring = ring
        self.ngens = len(vecs)
        G = groebner(tag(vecs, rank, ring), ring) if vecs else []
        order = term_order(ring)
        self.tagged = [g for g in G if order.lead(g)[0] < rank]
        self.syz = [split(g, rank)[1] for g in G if order.lead(g)[0] >= rank]
        self._basis = make_basis(self.tagged, ring)

    def lift(self, vec: dict):
        """Coefficients ``c`` with ``vec = sum c_i vecs[i]``, or None if not a member."""
        r = reduce_vector(vec, self._basis)
        real, tags = split(r, self.rank)
        if real:
            return None
        return {t: -c for t, c in tags.items()}


# -- polynomial-level convenience ----------------------------------------

def poly_to_vec(f: Poly, pos: int = 0) -> dict:
    return {(pos, e): c for e, c in f.terms.items()}


def vec_to_poly(v: dict, ring: RingContext) -> Poly:
    return Poly(ring, {e: c for (_, e), c in v.items()})


def _check_ring(ring, polys):
    for f in polys:
        ring.check(f.ring)


def normal_form(f: Poly, basis: Sequence[Poly], ring: RingContext | None = None) -> Poly:
    """Remainder of multivariate division of ``f`` by ``basis``.

    When ``basis`` is a Groebner basis the remainder is zero exactly for
    members of the ideal it generates.
    """
    ring = ring or f.ring
    _check_ring(ring, [f, *basis])
    if not basis:
        raise ValueError("basis must be nonempty")
    b = make_basis([poly_to_vec(g) for g in basis], ring)
    return vec_to_poly(reduce_vector(poly_to_vec(f), b), ring)


def buchberger(gens: Sequence[Poly], ring: RingContext | None = None) -> list:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    ring = ring or (gens[0].ring if gens else None)
    _check_ring(ring, gens)
    G = groebner([poly_to_vec(g) for g in gens if not g.is_zero()], ring, product_criterion=True)
    return [vec_to_poly(g, ring) for g in G]


def syzygy_matrix(gens: Sequence[Poly], ring: RingContext | None = None) -> list:
    """Columns generating all syzygies of ``gens``: list of columns, each a list of Polys."""
    gens = list(gens)
    ring = ring or gens[0].ring
    _check_ring(ring, gens)
    k = len(gens)
    cols = []
    for s in syzygies([poly_to_vec(g) for g in gens], 1, ring):
        col = [ring.zero()] * k
        parts: dict = {}
        for (p, e), c in s.items():
            parts.setdefault(p, {})[e] = c
        for p, t in parts.items():
            col[p] = Poly(ring, t)
        cols.append(col)
    return cols


def lift_poly(f: Poly, gens: Sequence[Poly]):
    """Cofactors ``c`` with ``f = sum c_i gens_i`` or None."""
    ring = f.ring
    tb = TracedBasis([poly_to_vec(g) for g in gens], 1, ring)
    c = tb.lift(poly_to_vec(f))
    if c is None:
        return None
    out = [ring.zero() for _ in gens]
    parts: dict = {}
    for (p, e), v in c.items():
        parts.setdefault(p, {})[e] = v
    for p, t in parts.items():
        out[p] = Poly(ring, t)
    return out
