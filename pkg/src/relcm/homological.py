"""Free resolutions, Ext modules and grade."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .groebner import syzygies
from .ideals import IdealHandle
from .modules import (ModuleMap, ModulePresentation, Submodule, _prune_units, basis_vector,
                      minimal_generators, present_subquotient, vec_degree, vec_term_mul)

INFINITY = math.inf


@dataclass
class ChainComplexRep:
    """Chain complex ... -> C_1 -> C_0 with ``differentials[i]: C_{i+1} -> C_i``.

    ``differentials[i]`` lists, for every generator of ``terms[i+1]``, its image
    as a vector of ``terms[i]``.  ``convention`` is "homological" or
    "cohomological"; in the latter case index i refers to C^i and
    ``differentials[i]: C^i -> C^{i+1}``.
    """
    terms: list
    differentials: list
    convention: str = "homological"
    truncated: bool = False
    labels: list = field(default_factory=list)

    @property
    def ranks(self) -> list:
        return [T.rank for T in self.terms]

    def differential_map(self, i: int) -> ModuleMap:
        if self.convention == "homological":
            return ModuleMap(self.terms[i + 1], self.terms[i], self.differentials[i], check=False)
        return ModuleMap(self.terms[i], self.terms[i + 1], self.differentials[i], check=False)

    def composes_to_zero(self) -> bool:
        for i in range(len(self.differentials) - 1):
            a = self.differential_map(i)
            b = self.differential_map(i + 1)
            if self.convention == "homological":
                outer, inner = a, b
            else:
                outer, inner = b, a
            for v in inner.images:
                if not outer.target.is_zero_element(outer.apply(v)):
                    return False
        return True

    def graded_betti(self) -> list:
        """Per homological degree, a dict twist -> multiplicity."""
        out = []
        for T in self.terms:
            row: dict = {}
            for t in T.twists:
                row[t] = row.get(t, 0) + 1
            out.append(dict(sorted(row.items())))
        return out


def _minimal_presentation(M: ModulePresentation):
    """Isomorphic presentation with no constant entries and minimal relations."""
    ring = M.ring
    gens = [basis_vector(ring, p) for p in range(M.rank)]
    _, rels, alive = _prune_units(gens, M.all_relations, ring)
    twists = [M.twists[p] for p in alive]
    if M.graded:
        rels = minimal_generators(rels, ring, twists)
    return twists, rels


def free_resolution(M: ModulePresentation, length: int, minimal: bool = True) -> ChainComplexRep:
    """Free resolution F_length -> ... -> F_0 -> M over the ambient polynomial ring."""
    if length < 0:
        raise ValueError("length must be non-negative")
    key = (length, minimal)
    cache = getattr(M, "_res_cache", None)
    if cache is None:
        cache = M._res_cache = {}
    if key in cache:
        return cache[key]
    S = M.ring.ambient()
    if minimal:
        twists, rels = _minimal_presentation(M)
    else:
        twists, rels = list(M.twists), M.all_relations
    graded = M.graded
    terms = [ModulePresentation.free(S, twists)]
    diffs = []
    current, cur_twists = rels, twists
    truncated = False
    for i in range(1, length + 1):
        if not current:
            break
        new_twists = []
        for v in current:
            d = vec_degree(v, S, cur_twists) if graded else None
            new_twists.append(d if d is not None else 0)
        terms.append(ModulePresentation.free(S, new_twists))
        diffs.append(current)
        syz = syzygies(current, len(cur_twists), S)
        if graded and minimal:
            syz = minimal_generators(syz, S, new_twists)
        current, cur_twists = syz, new_twists
    else:
        truncated = bool(current)
    res = ChainComplexRep(terms, diffs, "homological", truncated)
    cache[key] = res
    return res


def hom_into(F: ModulePresentation, B: ModulePresentation) -> ModulePresentation:
    """Hom(F, B) for a free module F, as a block sum of twisted copies of B."""
    S = B.ring.ambient()
    rb = B.rank
    twists = []
    rels = []
    for p, t in enumerate(F.twists):
        twists.extend(s - t for s in B.twists)
        off = p * rb
        for v in B.all_relations:
            rels.append({(q + off, e): c for (q, e), c in v.items()})
    return ModulePresentation(S, twists, rels)


def hom_dual_map(D: Sequence[dict], rank_prev: int, B: ModulePresentation) -> list:
    """Images of the generators of Hom(F_{j-1}, B) under precomposition with D: F_j -> F_{j-1}."""
    rb = B.rank
    cols: list = [[] for _ in range(rank_prev)]
    for k, col in enumerate(D):
        for (p, e), c in col.items():
            cols[p].append((k, e, c))
    out = []
    for p in range(rank_prev):
        for q in range(rb):
            img = {}
            for k, e, c in cols[p]:
                t = (k * rb + q, e)
                img[t] = img.get(t, 0) + c
            out.append({t: c for t, c in img.items() if c != 0})
    return out


@dataclass
class ExtData:
    index: int
    module: ModulePresentation
    generators: list
    ambient: ModulePresentation

    def is_zero(self) -> bool:
        return self.module.rank == 0 or self.module.is_zero()


def ext_module(i: int, A: ModulePresentation, B: ModulePresentation) -> ExtData:
    """Ext^i_S(A, B) over the ambient polynomial ring S."""
    return ext_modules(A, B, [i])[i]


def ext_modules(A: ModulePresentation, B: ModulePresentation, indices) -> dict:
    indices = sorted(set(indices))
    if indices and indices[0] < 0:
        raise ValueError("Ext index must be non-negative")
    top = max(indices) + 1 if indices else 0
    res = free_resolution(A, top)
    homs = [hom_into(T, B) for T in res.terms]
    out = {}
    for i in indices:
        if i >= len(res.terms):
            Z = ModulePresentation.free(B.ring.ambient(), [])
            out[i] = ExtData(i, Z, [], Z)
            continue
        H = homs[i]
        rels = list(H.relations)
        if i >= 1:
            rels += hom_dual_map(res.differentials[i - 1], res.terms[i - 1].rank, B)
        Q = ModulePresentation(H.ring, H.twists, rels)
        if i + 1 < len(res.terms):
            nxt = homs[i + 1]
            delta = hom_dual_map(res.differentials[i], res.terms[i].rank, B)
            ker = ModuleMap(H, nxt, delta, check=False).kernel().gens
        else:
            ker = [basis_vector(H.ring, p) for p in range(H.rank)]
        P, gens = present_subquotient(ker, Q)
        out[i] = ExtData(i, P, gens, Q)
    return out


def is_a_times_m_whole(a: IdealHandle, M: ModulePresentation) -> bool:
    """True when aM = M."""
    return M.ideal_times(a).is_whole()


def grade(a: IdealHandle, M: ModulePresentation):
    """min{i : Ext^i(S/a, M) != 0}; math.inf when aM = M."""
    if is_a_times_m_whole(a, M):
        return INFINITY
    A = ModulePresentation.cyclic(M.ring, a)
    n = M.ring.n
    exts = ext_modules(A, M, range(n + 1))
    for i in range(n + 1):
        if not exts[i].is_zero():
            return i
    raise RuntimeError("no nonvanishing Ext found below the number of variables")
