"""Ideals with cached Groebner data and the basic ideal-theoretic operations."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .groebner import (groebner, make_basis, poly_to_vec, reduce_vector, syzygies,
                       vec_to_poly)
from .ring import Poly, RingContext


class IdealHandle:
    """Ideal of a (quotient) ring given by generators.

    Over a quotient S/J all computations run on the preimage I + J in S.
    """

    def __init__(self, ring: RingContext, gens: Iterable = ()):
        self.ring = ring
        out = []
        for g in gens:
            g = ring.coerce(g)
            if not g.is_zero():
                out.append(g)
        self.gens = tuple(out)
        self._gb = None
        self._basis = None

    # -- Groebner data -----------------------------------------------------
    @property
    def groebner_basis(self) -> list:
        if self._gb is None:
            vecs = [poly_to_vec(g) for g in self.gens + self.ring.defining_ideal]
            G = groebner(vecs, self.ring, product_criterion=True)
            self._gb = [vec_to_poly(v, self.ring) for v in G]
            self._basis = make_basis(G, self.ring)
        return self._gb

    def reduce(self, f) -> Poly:
        f = self.ring.coerce(f)
        self.groebner_basis
        return vec_to_poly(reduce_vector(poly_to_vec(f), self._basis), self.ring)

    def contains(self, f) -> bool:
        return self.reduce(f).is_zero()

    __contains__ = contains

    def is_unit(self) -> bool:
        G = self.groebner_basis
        return len(G) == 1 and G[0].is_constant()

    def is_zero(self) -> bool:
        """True when the ideal is zero in the (quotient) ring."""
        J = IdealHandle(self.ring, ())
        return all(J.contains(g) for g in self.gens)

    def issubset(self, other: "IdealHandle") -> bool:
        self.ring.check(other.ring)
        return all(other.contains(g) for g in self.gens)

    def equals(self, other: "IdealHandle") -> bool:
        return self.issubset(other) and other.issubset(self)

    def __eq__(self, other):
        return isinstance(other, IdealHandle) and self.equals(other)

    def __hash__(self):
        return hash(tuple(self.groebner_basis))

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.gens)

    # -- constructions -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, IdealHandle):
            return IdealHandle(self.ring, self.gens + other.gens)
        return IdealHandle(self.ring, self.gens + tuple(other))

    def __mul__(self, other: "IdealHandle"):
        return IdealHandle(self.ring, [f * g for f in self.gens for g in other.gens])

    def power(self, k: int) -> "IdealHandle":
        if k == 0:
            return IdealHandle(self.ring, [self.ring.one()])
        out = self
        for _ in range(k - 1):
            out = IdealHandle(self.ring, _dedupe(out * self).gens)
        return out

    def minimal_gens(self):
        return self.gens

    def colon(self, f) -> "IdealHandle":
        return colon_ideal(self, f)

    def colon_ideal(self, other: "IdealHandle") -> "IdealHandle":
        out = IdealHandle(self.ring, [self.ring.one()])
        for g in other.gens:
            out = out.intersect(colon_ideal(self, g))
        return out

    def saturate(self, other: "IdealHandle") -> "IdealHandle":
        return saturate_ideal(self, other)

    def intersect(self, other: "IdealHandle") -> "IdealHandle":
        return intersect_ideals(self, other)

    def radical_contains(self, f) -> bool:
        return radical_membership(f, self)

    def radical_issubset(self, other: "IdealHandle") -> bool:
        return all(radical_membership(g, other) for g in self.gens)

    def radical_equals(self, other: "IdealHandle") -> bool:
        return self.radical_issubset(other) and other.radical_issubset(self)

    def dimension(self) -> int:
        return krull_dimension_of_quotient(self)

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.gens) + ">"

    def __repr__(self):
        return f"IdealHandle({self})"


def _dedupe(I: IdealHandle) -> IdealHandle:
    seen, out = set(), []
    for g in I.gens:
        m = g.monic()
        if m not in seen:
            seen.add(m)
            out.append(g)
    return IdealHandle(I.ring, out)


def ideal(ring: RingContext, gens) -> IdealHandle:
    return IdealHandle(ring, gens)


def maximal_ideal(ring: RingContext) -> IdealHandle:
    """The irrelevant ideal generated by all variables."""
    return IdealHandle(ring, ring.gens)


def _ring_of(I, ring):
    if ring is not None:
        ring.check(I.ring)
    return I.ring


def colon_ideal(I: IdealHandle, f, ring: RingContext | None = None) -> IdealHandle:
    """I : f = {g : g f in I}."""
    R = _ring_of(I, ring)
    f = R.coerce(f)
    if f.is_zero():
        raise ValueError("colon by zero")
    if I.contains(f):
        return IdealHandle(R, [R.one()])
    if f.is_constant():
        return IdealHandle(R, I.gens)
    vecs = [poly_to_vec(f)] + [poly_to_vec(g) for g in I.groebner_basis]
    out = []
    for s in syzygies(vecs, 1, R):
        c = {e: x for (p, e), x in s.items() if p == 0}
        if c:
            out.append(Poly(R, c))
    return IdealHandle(R, list(I.gens) + out)


def intersect_ideals(I: IdealHandle, K: IdealHandle) -> IdealHandle:
    R = I.ring
    R.check(K.ring)
    if I.is_unit():
        return IdealHandle(R, K.gens)
    if K.is_unit():
        return IdealHandle(R, I.gens)
    A = I.groebner_basis
    B = K.groebner_basis
    vecs = [poly_to_vec(g) for g in A] + [poly_to_vec(g) for g in B]
    out = []
    for s in syzygies(vecs, 1, R):
        h = R.zero()
        for (p, e), x in s.items():
            if p < len(A):
                h = h + A[p] * R.monomial(e, x)
        if not h.is_zero():
            out.append(h)
    return IdealHandle(R, out)


def saturate_ideal(I: IdealHandle, J: IdealHandle, ring: RingContext | None = None) -> IdealHandle:
    """I : J^infinity, as the intersection over generators j of I : j^infinity."""
    R = _ring_of(I, ring)
    if not J.gens:
        raise ValueError("saturation by the zero ideal")
    out = None
    for j in J.gens:
        cur = I
        while True:
            nxt = colon_ideal(cur, j)
            if nxt.issubset(cur):
                break
            cur = nxt
        out = cur if out is None else out.intersect(cur)
    return out


def radical_membership(f, I: IdealHandle, ring: RingContext | None = None) -> bool:
    """f in Rad(I), via 1 in I + <1 - t f> over a ring with one extra variable."""
    R = _ring_of(I, ring)
    f = R.coerce(f)
    if f.is_zero() or I.contains(f):
        return True
    name = "t_"
    while name in R.variables:
        name += "_"
    T = R.extended(name)
    t = T.gens[-1]
    gens = [R.embed(g, T) for g in I.gens + R.defining_ideal]
    gens.append(T.one() - t * R.embed(f, T))
    return IdealHandle(T, gens).is_unit()


def krull_dimension_of_quotient(I: IdealHandle, ring: RingContext | None = None) -> int:
    """dim S/I from the leading-term ideal; -1 for the unit ideal."""
    R = _ring_of(I, ring)
    G = I.groebner_basis
    if any(g.is_constant() for g in G):
        return -1
    supports = [frozenset(i for i, a in enumerate(g.lead_exp()) if a) for g in G]
    n = R.n
    for size in range(n, -1, -1):
        for Y in combinations(range(n), size):
            Ys = set(Y)
            if all(not s <= Ys for s in supports):
                return size
    return 0


def ideals_from_strings(ring: RingContext, gens: Sequence[str]) -> IdealHandle:
    return IdealHandle(ring, [ring.parse(g) for g in gens])
