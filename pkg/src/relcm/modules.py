"""Finitely presented graded modules, submodules and module maps.

A module is ``F / U`` with ``F`` a graded free module (``twists[p]`` is the
degree of the basis vector ``e_p``) and ``U`` spanned by relation vectors.
Over a quotient ring S/J the relations ``J e_p`` are added implicitly.
Elements are sparse vectors ``{(p, exp): coeff}`` of ``F``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .groebner import groebner, make_basis, reduce_vector, syzygies, term_order
from .ideals import IdealHandle, intersect_ideals
from .ring import Poly, RingContext


# -- vector helpers ----------------------------------------------------------

def vec_add(a: dict, b: dict, c=1) -> dict:
    """a + c*b."""
    out = dict(a)
    for t, x in b.items():
        y = out.get(t)
        y = c * x if y is None else y + c * x
        if y == 0:
            out.pop(t, None)
        else:
            out[t] = y
    return out


def vec_mul(f: Poly, v: dict) -> dict:
    """f * v for a polynomial f."""
    out: dict = {}
    for fe, fc in f.terms.items():
        for (p, e), c in v.items():
            t = (p, tuple(a + b for a, b in zip(fe, e)))
            y = out.get(t)
            y = fc * c if y is None else y + fc * c
            if y == 0:
                del out[t]
            else:
                out[t] = y
    return out


def vec_term_mul(e0, c0, v: dict) -> dict:
    return {(p, tuple(a + b for a, b in zip(e0, e))): c0 * c for (p, e), c in v.items()}


def vec_scale(c, v: dict) -> dict:
    if c == 0:
        return {}
    return {t: c * x for t, x in v.items()}


def vec_from_polys(polys: Sequence[Poly]) -> dict:
    out = {}
    for p, f in enumerate(polys):
        for e, c in f.terms.items():
            out[(p, e)] = c
    return out


def vec_to_polys(v: dict, ring: RingContext, rank: int) -> list:
    parts: list = [dict() for _ in range(rank)]
    for (p, e), c in v.items():
        parts[p][e] = c
    return [Poly(ring, t) for t in parts]


def vec_component(v: dict, p: int, ring: RingContext) -> Poly:
    return Poly(ring, {e: c for (q, e), c in v.items() if q == p})


def vec_project(v: dict, keep: int) -> dict:
    """Restrict to positions < keep."""
    return {t: c for t, c in v.items() if t[0] < keep}


def vec_shift(v: dict, offset: int) -> dict:
    return {(p + offset, e): c for (p, e), c in v.items()}


def vec_degree(v: dict, ring: RingContext, twists: Sequence[int]):
    """Degree of a homogeneous vector; None if inhomogeneous, and None for zero."""
    d = None
    for (p, e) in v:
        k = ring.degree_of(e) + twists[p]
        if d is None:
            d = k
        elif d != k:
            return None
    return d


def is_homogeneous_vec(v: dict, ring: RingContext, twists) -> bool:
    return not v or vec_degree(v, ring, twists) is not None


def basis_vector(ring: RingContext, p: int) -> dict:
    return {(p, ring.zero_exp): ring.field.one}


def vec_str(v: dict, ring: RingContext, rank: int) -> str:
    return "(" + ", ".join(str(f) for f in vec_to_polys(v, ring, rank)) + ")"


@lru_cache(maxsize=None)
def _monomials(weights: tuple, d: int) -> tuple:
    n = len(weights)
    if d < 0:
        return ()
    out = []

    def rec(i, rem, cur):
        if i == n - 1:
            if rem % weights[i] == 0:
                out.append(tuple(cur + [rem // weights[i]]))
            return
        for a in range(rem // weights[i], -1, -1):
            rec(i + 1, rem - a * weights[i], cur + [a])

    if n == 0:
        return ((),) if d == 0 else ()
    rec(0, d, [])
    return tuple(out)


def monomials_of_degree(ring: RingContext, d: int) -> tuple:
    return _monomials(ring.weights, d)


# -- graded pieces -----------------------------------------------------------

class GradedPiece:
    """Field basis of M_d given by standard terms, with coordinate map."""

    def __init__(self, module: "ModulePresentation", d: int):
        self.module = module
        self.degree = d
        ring = module.ring
        basis = module._basis
        terms = []
        for p, t in enumerate(module.twists):
            leads = [le for le, _ in basis.by_pos.get(p, ())]
            for e in monomials_of_degree(ring, d - t):
                if any(all(a <= b for a, b in zip(le, e)) for le in leads):
                    continue
                terms.append((p, e))
        terms.sort(key=term_order(ring).key, reverse=True)
        self.terms = terms
        self.index = {t: i for i, t in enumerate(terms)}

    @property
    def dim(self) -> int:
        return len(self.terms)

    def coords(self, v: dict) -> dict:
        """Coordinates of (the normal form of) a degree-d vector."""
        r = self.module.reduce(v)
        out = {}
        for t, c in r.items():
            i = self.index.get(t)
            if i is None:
                raise ValueError("vector is not homogeneous of the piece degree")
            out[i] = c
        return out

    def element(self, coords: dict) -> dict:
        return {self.terms[i]: c for i, c in coords.items()}


# -- presentations -----------------------------------------------------------

class ModulePresentation:
    """Cokernel of a map of graded free modules: M = F / U."""

    def __init__(self, ring: RingContext, twists: Sequence[int], relations: Iterable[dict] = ()):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)
        self.rank = len(self.twists)
        rels = []
        for v in relations:
            if isinstance(v, (list, tuple)):
                v = vec_from_polys([ring.coerce(f) for f in v])
            v = {t: c for t, c in v.items() if c != 0}
            if any(p >= self.rank for p, _ in v):
                raise ValueError("relation has an entry beyond the module rank")
            if v:
                rels.append(v)
        self.relations = rels
        self.graded = all(is_homogeneous_vec(v, ring, self.twists) for v in rels)
        self._gb = None
        self._basis_obj = None
        self._pieces: dict = {}
        self._mult: dict = {}
        self._ann = None

    # constructors
    @classmethod
    def free(cls, ring: RingContext, twists) -> "ModulePresentation":
        if isinstance(twists, int):
            twists = [0] * twists
        return cls(ring, twists, [])

    @classmethod
    def cyclic(cls, ring: RingContext, ideal, twist: int = 0) -> "ModulePresentation":
        """S/I (or R/I over a quotient ring R)."""
        gens = ideal.gens if isinstance(ideal, IdealHandle) else [ring.coerce(g) for g in ideal]
        return cls(ring, [twist], [{(0, e): c for e, c in g.terms.items()} for g in gens])

    @classmethod
    def from_matrix(cls, ring: RingContext, rows: Sequence[Sequence], twists=None) -> "ModulePresentation":
        """Cokernel of a matrix given as rows; columns are the relations."""
        rows = [[ring.coerce(f) for f in r] for r in rows]
        rank = len(rows)
        ncols = len(rows[0]) if rows else 0
        if twists is None:
            twists = [0] * rank
        rels = [vec_from_polys([rows[i][j] for i in range(rank)]) for j in range(ncols)]
        return cls(ring, twists, rels)

    def direct_sum(self, other: "ModulePresentation") -> "ModulePresentation":
        self.ring.check(other.ring)
        rels = list(self.relations) + [vec_shift(v, self.rank) for v in other.relations]
        return ModulePresentation(self.ring, self.twists + other.twists, rels)

    def twisted(self, k: int) -> "ModulePresentation":
        """M(k): degrees lowered by k."""
        return ModulePresentation(self.ring, [t - k for t in self.twists], self.relations)

    # Groebner data
    @property
    def all_relations(self) -> list:
        out = list(self.relations)
        z = self.ring
        for p in range(self.rank):
            for g in z.defining_ideal:
                out.append({(p, e): c for e, c in g.terms.items()})
        return out

    @property
    def gb(self) -> list:
        if self._gb is None:
            self._gb = groebner(self.all_relations, self.ring) if self.all_relations else []
            self._basis_obj = make_basis(self._gb, self.ring)
        return self._gb

    @property
    def _basis(self):
        self.gb
        return self._basis_obj

    def reduce(self, v: dict) -> dict:
        return reduce_vector(v, self._basis)

    def is_zero_element(self, v: dict) -> bool:
        return not self.reduce(v)

    def is_zero(self) -> bool:
        return all(self.is_zero_element(basis_vector(self.ring, p)) for p in range(self.rank))

    def degree(self, v: dict):
        return vec_degree(v, self.ring, self.twists)

    # graded structure
    def piece(self, d: int) -> GradedPiece:
        if not self.graded:
            raise ValueError("graded pieces need a graded presentation")
        P = self._pieces.get(d)
        if P is None:
            P = GradedPiece(self, d)
            self._pieces[d] = P
        return P

    def hilbert(self, d: int) -> int:
        return self.piece(d).dim

    def hilbert_window(self, lo: int, hi: int) -> dict:
        return {d: self.hilbert(d) for d in range(lo, hi + 1)}

    def mult_images(self, f: Poly, d: int) -> list:
        """Matrix of multiplication by homogeneous f from M_d to M_{d+deg f} (column images)."""
        key = (f, d)
        hit = self._mult.get(key)
        if hit is not None:
            return hit
        src = self.piece(d)
        tgt = self.piece(d + f.degree())
        out = []
        for (p, e) in src.terms:
            v = vec_mul(f, {(p, e): self.ring.field.one})
            out.append(tgt.coords(v))
        self._mult[key] = out
        return out

    # module-theoretic data
    def annihilator(self) -> IdealHandle:
        return annihilator(self)

    def dimension(self) -> int:
        return dimension_of_module(self)

    def submodule(self, gens) -> "Submodule":
        return Submodule(self, gens)

    def whole(self) -> "Submodule":
        return Submodule(self, [basis_vector(self.ring, p) for p in range(self.rank)])

    def zero_submodule(self) -> "Submodule":
        return Submodule(self, [])

    def ideal_times(self, I: IdealHandle) -> "Submodule":
        """The submodule I*M."""
        gens = []
        for g in I.gens:
            for p in range(self.rank):
                gens.append(vec_mul(g, basis_vector(self.ring, p)))
        return Submodule(self, gens)

    def quotient_by_ideal(self, I: IdealHandle) -> "ModulePresentation":
        return self.ideal_times(I).quotient_module()

    def __repr__(self):
        return f"ModulePresentation(rank={self.rank}, twists={list(self.twists)}, relations={len(self.relations)})"

    def describe(self) -> str:
        rows = []
        for v in self.relations:
            rows.append(vec_str(v, self.ring, self.rank))
        return f"coker of {len(self.relations)} relations in rank {self.rank} twists {list(self.twists)}: " + "; ".join(rows)


class Submodule:
    """Submodule (N + U)/U of M = F/U, given by generator vectors of F."""

    def __init__(self, module: ModulePresentation, gens: Iterable):
        self.module = module
        ring = module.ring
        out = []
        for v in gens:
            if isinstance(v, (list, tuple)):
                v = vec_from_polys([ring.coerce(f) for f in v])
            if v:
                out.append(dict(v))
        self.gens = out
        self._gb = None
        self._basis_obj = None

    @property
    def ring(self):
        return self.module.ring

    @property
    def _basis(self):
        if self._basis_obj is None:
            vecs = self.gens + self.module.all_relations
            self._gb = groebner(vecs, self.ring) if vecs else []
            self._basis_obj = make_basis(self._gb, self.ring)
        return self._basis_obj

    def contains(self, v: dict) -> bool:
        return not reduce_vector(v, self._basis)

    def reduce(self, v: dict) -> dict:
        return reduce_vector(v, self._basis)

    def issubset(self, other: "Submodule") -> bool:
        return all(other.contains(g) for g in self.gens)

    def equals(self, other: "Submodule") -> bool:
        return self.issubset(other) and other.issubset(self)

    def is_zero(self) -> bool:
        return all(self.module.is_zero_element(g) for g in self.gens)

    def is_whole(self) -> bool:
        return all(self.contains(basis_vector(self.ring, p)) for p in range(self.module.rank))

    def nonmember_witness(self, other: "Submodule"):
        """A generator of self outside other, or None."""
        for g in self.gens:
            if not other.contains(g):
                return g
        return None

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule(self.module, self.gens + other.gens)

    def ideal_times(self, I: IdealHandle) -> "Submodule":
        return Submodule(self.module, [vec_mul(f, g) for f in I.gens for g in self.gens])

    def colon(self, f) -> "Submodule":
        return colon_module(self, f)

    def colon_ideal(self, I: IdealHandle) -> "Submodule":
        out = None
        for g in I.gens:
            c = colon_module(self, g)
            out = c if out is None else out.intersect(c)
        return out if out is not None else self.module.whole()

    def saturate(self, I: IdealHandle) -> "Submodule":
        return saturate_module(self, I)

    def intersect(self, other: "Submodule") -> "Submodule":
        return intersect_submodules(self, other)

    def quotient_module(self) -> ModulePresentation:
        """M / N with the same generators."""
        return ModulePresentation(self.ring, self.module.twists, self.module.relations + self.gens)

    def presentation(self):
        return present_subquotient(self.gens, self.module)

    def piece_span(self, d: int):
        """Coordinates (in M_d) spanning the degree-d part of the submodule."""
        M = self.module
        P = M.piece(d)
        out = []
        for g in self.gens:
            k = M.degree(g)
            if k is None:
                raise ValueError("graded pieces need homogeneous generators")
            for e in monomials_of_degree(self.ring, d - k):
                c = P.coords(vec_term_mul(e, self.ring.field.one, g))
                if c:
                    out.append(c)
        return out

    def __repr__(self):
        return f"Submodule({len(self.gens)} generators in {self.module!r})"


# -- operations --------------------------------------------------------------

def _scaled_basis(module: ModulePresentation, f: Poly) -> list:
    return [vec_mul(f, basis_vector(module.ring, p)) for p in range(module.rank)]


def colon_module(N: Submodule, f) -> Submodule:
    """N :_M f = {m in M : f m in N}."""
    M = N.module
    ring = M.ring
    f = ring.coerce(f)
    if f.is_zero():
        raise ValueError("colon by zero")
    if f.is_constant():
        return Submodule(M, N.gens)
    r = M.rank
    vecs = _scaled_basis(M, f) + N.gens + M.all_relations
    out = list(N.gens)
    for s in syzygies(vecs, r, ring):
        c = {(p, e): x for (p, e), x in s.items() if p < r}
        if c:
            out.append(c)
    return Submodule(M, out)


def intersect_submodules(A: Submodule, B: Submodule) -> Submodule:
    M = A.module
    if not A.gens or not B.gens:
        return Submodule(M, [])
    ring = M.ring
    k = len(A.gens)
    vecs = A.gens + B.gens + M.all_relations
    out = []
    for s in syzygies(vecs, M.rank, ring):
        h: dict = {}
        for (p, e), x in s.items():
            if p < k:
                h = vec_add(h, vec_term_mul(e, x, A.gens[p]))
        if h:
            out.append(h)
    return Submodule(M, out)


def saturate_module(N: Submodule, I: IdealHandle) -> Submodule:
    """N :_M I^infinity."""
    if not I.gens:
        raise ValueError("saturation by the zero ideal")
    out = None
    for g in I.gens:
        cur = N
        while True:
            nxt = colon_module(cur, g)
            if nxt.issubset(cur):
                break
            cur = nxt
        out = cur if out is None else out.intersect(cur)
    return out


def annihilator(M: ModulePresentation) -> IdealHandle:
    """Ann(M) as an ideal of the ambient ring (contains the defining ideal)."""
    if M._ann is not None:
        return M._ann
    ring = M.ring
    rels = M.all_relations
    out = IdealHandle(ring, [ring.one()])
    for p in range(M.rank):
        e = basis_vector(ring, p)
        gens = []
        for s in syzygies([e] + rels, M.rank, ring):
            c = Poly(ring, {ex: x for (q, ex), x in s.items() if q == 0})
            if not c.is_zero():
                gens.append(c)
        out = intersect_ideals(out, IdealHandle(ring, gens))
        if not out.gens:
            break
    M._ann = out
    return out


def dimension_of_module(M: ModulePresentation) -> int:
    """Krull dimension dim S/Ann(M); -1 for the zero module."""
    return annihilator(M).dimension()


def _prune_units(gens: list, rels: list, ring: RingContext):
    """Drop generators made redundant by relations with a constant entry."""
    gens = list(gens)
    rels = [dict(v) for v in rels if v]
    alive = list(range(len(gens)))
    while True:
        hit = None
        for ri, v in enumerate(rels):
            for (p, e), c in v.items():
                if not any(e):
                    hit = (ri, p, c)
                    break
            if hit:
                break
        if hit is None:
            break
        ri, p, c = hit
        r = rels.pop(ri)
        inv = 1 / c
        new = []
        for v in rels:
            comp = Poly(ring, {e: x for (q, e), x in v.items() if q == p})
            if not comp.is_zero():
                v = vec_add(v, vec_mul(comp * inv, r), -1)
            v = {t: x for t, x in v.items() if t[0] != p}
            if v:
                new.append(v)
        rels = new
        alive.remove(p)
    index = {p: i for i, p in enumerate(alive)}
    rels = [{(index[p], e): x for (p, e), x in v.items()} for v in rels]
    return [gens[p] for p in alive], rels, alive


def present_subquotient(gens: Sequence[dict], relations_from: ModulePresentation):
    """Presentation of the submodule of ``relations_from`` spanned by ``gens``.

    Returns ``(presentation, generator_vectors)``; the presentation has one
    basis vector per returned generator and no constant relation entries.
    """
    M = relations_from
    ring = M.ring
    gens = [dict(g) for g in gens if not M.is_zero_element(g)]
    k = len(gens)
    twists = []
    graded = True
    for g in gens:
        d = M.degree(g)
        if d is None:
            graded = False
            d = 0
        twists.append(d)
    rels = []
    if k:
        for s in syzygies(gens + M.all_relations, M.rank, ring):
            c = {(p, e): x for (p, e), x in s.items() if p < k}
            if c:
                rels.append(c)
    gens2, rels2, alive = _prune_units(gens, rels, ring)
    twists2 = [twists[p] for p in alive]
    if graded:
        rels2 = minimal_generators(rels2, ring, twists2)
    P = ModulePresentation(ring, twists2, rels2)
    return P, gens2


def minimal_generators(vecs: Sequence[dict], ring: RingContext, twists: Sequence[int],
                       relations: Sequence[dict] = ()) -> list:
    """A minimal generating subset of homogeneous ``vecs`` (modulo ``relations``)."""
    vecs = [v for v in vecs if v]
    if any(vec_degree(v, ring, twists) is None for v in vecs):
        return list(vecs)
    order = sorted(range(len(vecs)), key=lambda i: (vec_degree(vecs[i], ring, twists), i))
    kept: list = []
    rels = list(relations)
    basis = make_basis(groebner(rels, ring), ring) if rels else make_basis([], ring)
    for i in order:
        v = vecs[i]
        if reduce_vector(v, basis):
            kept.append(v)
            basis = make_basis(groebner(kept + rels, ring), ring)
    return kept


class ModuleMap:
    """Homomorphism source -> target given by images of the source generators."""

    def __init__(self, source: ModulePresentation, target: ModulePresentation, images: Sequence[dict],
                 check: bool = True):
        if len(images) != source.rank:
            raise ValueError("one image per source generator required")
        self.source = source
        self.target = target
        self.images = [dict(v) for v in images]
        self.well_defined = None
        if check:
            self.well_defined = self.check_well_defined()
            if not self.well_defined:
                raise ValueError("map does not carry relations to relations")

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for (p, e), c in v.items():
            out = vec_add(out, vec_term_mul(e, c, self.images[p]))
        return out

    def check_well_defined(self) -> bool:
        T = self.target
        return all(T.is_zero_element(self.apply(r)) for r in self.source.all_relations)

    def kernel(self) -> Submodule:
        S, T = self.source, self.target
        m = S.rank
        out = []
        if m:
            for s in syzygies(self.images + T.all_relations, T.rank, S.ring):
                c = {(p, e): x for (p, e), x in s.items() if p < m}
                if c:
                    out.append(c)
        return Submodule(S, out)

    def image(self) -> Submodule:
        return Submodule(self.target, self.images)

    def piece_images(self, d: int) -> list:
        """Matrix of the map on degree-d pieces (column images)."""
        Ps = self.source.piece(d)
        Pt = self.target.piece(d)
        one = self.source.ring.field.one
        return [Pt.coords(self.apply({t: one})) for t in Ps.terms]

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        return ModuleMap(inner.source, self.target, [self.apply(v) for v in inner.images], check=False)
