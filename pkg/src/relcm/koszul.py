"""Koszul complexes, their homology, the transition maps between powers and
the canonical maps into local cohomology.

Two equivalent shapes of the complex are used:

* the homological complex ``K_p = sum over p-subsets I of M e_I`` with
  ``d(m e_I) = sum_r (-1)^(r-1) x_{i_r} m e_{I minus i_r}``; and
* the cohomological (Hom) complex ``C^i = sum over i-subsets A of M`` with
  ``(delta phi)_A = sum_r (-1)^(r-1) x_{a_r} phi_{A minus a_r}``.

``K_{n-i}`` and ``C^i`` are identified by sending the block ``A`` of ``C^i``
to the block labelled by the complement of ``A`` with the sign of the
shuffle (A, complement).  The cohomological form is graded so that the
block ``A`` of ``C^i(x^u, M)`` in degree ``d`` is ``M_{d + u deg x_A}``; in
that grading the transition maps (multiplication of block ``A`` by
``x_A^{v-u}``) preserve degree and the colimit in each degree is the
corresponding graded piece of local cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from . import linalg
from .groebner import TracedBasis, poly_to_vec
from .homological import ChainComplexRep, free_resolution
from .ideals import IdealHandle
from .modules import (ModuleMap, ModulePresentation, Submodule, basis_vector, present_subquotient,
                      vec_degree, vec_mul, vec_str)
from .ring import Poly


def subsets(n: int, p: int) -> list:
    return list(combinations(range(n), p))


def complement(I, n: int) -> tuple:
    s = set(I)
    return tuple(i for i in range(n) if i not in s)


def shuffle_sign(A, n: int) -> int:
    """Sign of the permutation listing A then its complement."""
    B = complement(A, n)
    inv = sum(1 for a in A for b in B if a > b)
    return -1 if inv % 2 else 1


def label(I) -> tuple:
    """1-based label e_{i_1}...e_{i_p} of a 0-based index tuple."""
    return tuple(i + 1 for i in I)


def _prod(polys, ring) -> Poly:
    out = ring.one()
    for f in polys:
        out = out * f
    return out


class KoszulComplex:
    """K_.(x^u, M) with materialised labels and the sign rule (-1)^(r-1)."""

    def __init__(self, x: Sequence, M: ModulePresentation, u: int = 1):
        ring = M.ring
        self.ring = ring
        self.x = [ring.coerce(f) for f in x]
        if not self.x:
            raise ValueError("Koszul complex needs a nonempty sequence")
        if u < 1:
            raise ValueError("exponent must be positive")
        self.M = M
        self.n = len(self.x)
        self.u = u
        self.powers = [f ** u for f in self.x]
        self.labels = {p: subsets(self.n, p) for p in range(self.n + 1)}
        self.index = {p: {I: k for k, I in enumerate(self.labels[p])} for p in self.labels}
        self.graded = M.graded and all(f.is_homogeneous() for f in self.x)
        self.xdeg = [f.degree() if f.is_homogeneous() else 0 for f in self.x]
        self._terms: dict = {}
        self._diffs: dict = {}
        self._piece_diffs: dict = {}

    # -- module level -------------------------------------------------------
    def label_degree(self, I) -> int:
        return self.u * sum(self.xdeg[i] for i in I)

    def term(self, p: int) -> ModulePresentation:
        """K_p as a direct sum of twisted copies of M."""
        if p < 0 or p > self.n:
            return ModulePresentation.free(self.ring, [])
        T = self._terms.get(p)
        if T is None:
            r = self.M.rank
            twists, rels = [], []
            for k, I in enumerate(self.labels[p]):
                twists.extend(t + self.label_degree(I) for t in self.M.twists)
                for v in self.M.relations:
                    rels.append({(q + k * r, e): c for (q, e), c in v.items()})
            T = ModulePresentation(self.ring, twists, rels)
            self._terms[p] = T
        return T

    def differential(self, p: int) -> list:
        """Images in K_{p-1} of the generators of K_p (block by block)."""
        if p in self._diffs:
            return self._diffs[p]
        r = self.M.rank
        out = []
        if 1 <= p <= self.n:
            tgt = self.index[p - 1]
            for I in self.labels[p]:
                for q in range(r):
                    img: dict = {}
                    for pos, i in enumerate(I):
                        sign = 1 if pos % 2 == 0 else -1
                        J = I[:pos] + I[pos + 1:]
                        e = basis_vector(self.ring, q + tgt[J] * r)
                        for t, c in vec_mul(self.powers[i], e).items():
                            img[t] = img.get(t, 0) + sign * c
                    out.append({t: c for t, c in img.items() if c != 0})
        self._diffs[p] = out
        return out

    def differential_map(self, p: int) -> ModuleMap:
        return ModuleMap(self.term(p), self.term(p - 1), self.differential(p), check=False)

    def chain_complex(self) -> ChainComplexRep:
        terms = [self.term(p) for p in range(self.n + 1)]
        diffs = [self.differential(p) for p in range(1, self.n + 1)]
        labels = [[label(I) for I in self.labels[p]] for p in range(self.n + 1)]
        return ChainComplexRep(terms, diffs, "homological", False, labels)

    def d_squared_is_zero(self) -> bool:
        for p in range(2, self.n + 1):
            T = self.term(p - 2)
            dm = self.differential_map(p - 1)
            for v in self.differential(p):
                if not T.is_zero_element(dm.apply(v)):
                    return False
        return True

    def cycles(self, j: int) -> Submodule:
        if j == 0:
            return self.term(0).whole()
        if j < 0 or j > self.n:
            return self.term(j).zero_submodule()
        return self.differential_map(j).kernel()

    def boundaries(self, j: int) -> Submodule:
        if j + 1 > self.n:
            return self.term(j).zero_submodule()
        return Submodule(self.term(j), self.differential(j + 1))

    def homology(self, j: int):
        """H_j as (presentation, generator vectors in K_j)."""
        T = self.term(j)
        Q = ModulePresentation(self.ring, T.twists, T.relations + self.boundaries(j).gens)
        return present_subquotient(self.cycles(j).gens, Q)

    # -- degree pieces -------------------------------------------------------
    def _require_graded(self):
        if not self.graded:
            raise ValueError("degree pieces need homogeneous data")

    def piece_blocks(self, p: int, d: int):
        """[(label, M-degree, offset, dim)] for K_p in degree d."""
        self._require_graded()
        out, off = [], 0
        for I in self.labels.get(p, []):
            md = d - self.label_degree(I)
            dim = self.M.hilbert(md)
            out.append((I, md, off, dim))
            off += dim
        return out

    def piece_dim(self, p: int, d: int) -> int:
        return sum(b[3] for b in self.piece_blocks(p, d))

    def piece_differential(self, p: int, d: int) -> list:
        """Column images of d_p: (K_p)_d -> (K_{p-1})_d."""
        key = (p, d)
        if key in self._piece_diffs:
            return self._piece_diffs[key]
        out = []
        if 1 <= p <= self.n:
            tgt = {b[0]: b for b in self.piece_blocks(p - 1, d)}
            for I, md, off, dim in self.piece_blocks(p, d):
                mats = []
                for pos, i in enumerate(I):
                    J = I[:pos] + I[pos + 1:]
                    sign = 1 if pos % 2 == 0 else -1
                    mats.append((sign, tgt[J][2], self.M.mult_images(self.powers[i], md)))
                for k in range(dim):
                    col: dict = {}
                    for sign, toff, mat in mats:
                        for idx, c in mat[k].items():
                            key2 = idx + toff
                            y = col.get(key2, 0) + sign * c
                            if y == 0:
                                col.pop(key2, None)
                            else:
                                col[key2] = y
                    out.append(col)
        else:
            out = [{} for _ in range(self.piece_dim(p, d))]
        self._piece_diffs[key] = out
        return out

    def homology_dim(self, j: int, d: int) -> int:
        dim = self.piece_dim(j, d)
        if dim == 0:
            return 0
        out_rank = linalg.rank(self.piece_differential(j, d)) if j >= 1 else 0
        in_rank = linalg.rank(self.piece_differential(j + 1, d)) if j + 1 <= self.n else 0
        return dim - out_rank - in_rank


def build_koszul_complex(x: Sequence, M: ModulePresentation) -> KoszulComplex:
    return KoszulComplex(x, M, 1)


def koszul_homology(j: int, x: Sequence, M: ModulePresentation):
    """H_j(x, M) as (presentation, generators in K_j)."""
    return KoszulComplex(x, M, 1).homology(j)


def psi_chain_map(u: int, v: int, x: Sequence, M: ModulePresentation) -> list:
    """Components (psi_u^v)_k, k = 0..n, as ModuleMaps K_k(x^u) -> K_k(x^v)."""
    if u < 1 or u > v:
        raise ValueError("need 1 <= u <= v")
    Ku, Kv = KoszulComplex(x, M, u), KoszulComplex(x, M, v)
    n, r = Ku.n, M.rank
    out = []
    for k in range(n + 1):
        imgs = []
        for I in Ku.labels[k]:
            J = complement(I, n)
            f = _prod([Ku.x[j] for j in J], Ku.ring) ** (v - u)
            blk = Kv.index[k][I]
            for q in range(r):
                imgs.append(vec_mul(f, basis_vector(Ku.ring, q + blk * r)))
        out.append(ModuleMap(Ku.term(k), Kv.term(k), imgs, check=False))
    return out


def is_chain_map(maps: Sequence[ModuleMap], src: KoszulComplex, tgt: KoszulComplex) -> bool:
    """d_tgt o f_k == f_{k-1} o d_src for all k."""
    for k in range(1, src.n + 1):
        ds, dt = src.differential_map(k), tgt.differential_map(k)
        T = tgt.term(k - 1)
        for gi, g in enumerate(src.differential(k)):
            a = maps[k - 1].apply(g)
            b = dt.apply(maps[k].images[gi])
            diff = {t: c for t, c in a.items()}
            for t, c in b.items():
                y = diff.get(t, 0) - c
                if y == 0:
                    diff.pop(t, None)
                else:
                    diff[t] = y
            if not T.is_zero_element(diff):
                return False
    return True


# -- cohomological stages ----------------------------------------------------

class CohomologyStage:
    """Degree pieces of C^.(x^u, M) in the local-cohomology grading."""

    def __init__(self, x: Sequence[Poly], M: ModulePresentation, u: int):
        self.x = list(x)
        self.M = M
        self.u = u
        self.n = len(self.x)
        self.xdeg = [f.degree() for f in self.x]
        self.powers = [f ** u for f in self.x]
        self.labels = {i: subsets(self.n, i) for i in range(self.n + 1)}
        self._blocks: dict = {}
        self._delta: dict = {}
        self._coh: dict = {}

    def blocks(self, i: int, d: int):
        key = (i, d)
        hit = self._blocks.get(key)
        if hit is None:
            hit, off = {}, 0
            for A in self.labels.get(i, []):
                md = d + self.u * sum(self.xdeg[a] for a in A)
                dim = self.M.hilbert(md)
                hit[A] = (md, off, dim)
                off += dim
            self._blocks[key] = hit
        return hit

    def dim(self, i: int, d: int) -> int:
        return sum(b[2] for b in self.blocks(i, d).values())

    def delta(self, i: int, d: int) -> list:
        """Column images of C^i_d -> C^{i+1}_d."""
        key = (i, d)
        if key in self._delta:
            return self._delta[key]
        src = self.blocks(i, d)
        out: list = [dict() for _ in range(self.dim(i, d))]
        if 0 <= i < self.n:
            tgt = self.blocks(i + 1, d)
            for A, (md, off, dim) in src.items():
                if not dim:
                    continue
                for b in range(self.n):
                    if b in A:
                        continue
                    B = tuple(sorted(A + (b,)))
                    pos = B.index(b)
                    sign = 1 if pos % 2 == 0 else -1
                    toff = tgt[B][1]
                    mat = self.M.mult_images(self.powers[b], md)
                    for k in range(dim):
                        col = out[off + k]
                        for idx, c in mat[k].items():
                            kk = idx + toff
                            y = col.get(kk, 0) + sign * c
                            if y == 0:
                                col.pop(kk, None)
                            else:
                                col[kk] = y
        self._delta[key] = out
        return out

    def cohomology(self, i: int, d: int):
        """(cycle basis, echelon of boundaries, dimension) of H^i in degree d."""
        key = (i, d)
        hit = self._coh.get(key)
        if hit is None:
            dim = self.dim(i, d)
            cyc = linalg.kernel(self.delta(i, d)) if dim else []
            bnd = linalg.span(self.delta(i - 1, d)) if i >= 1 else linalg.Echelon()
            h = len(cyc) - bnd.dim
            hit = (cyc, bnd, h)
            self._coh[key] = hit
        return hit

    def transition(self, other: "CohomologyStage", i: int, d: int) -> list:
        """Matrix of psi from this stage to a later one on C^i_d."""
        k = other.u - self.u
        src = self.blocks(i, d)
        tgt = other.blocks(i, d)
        out: list = [dict() for _ in range(self.dim(i, d))]
        for A, (md, off, dim) in src.items():
            if not dim:
                continue
            f = _prod([self.x[a] for a in A], self.M.ring) ** k
            mat = self.M.mult_images(f, md)
            toff = tgt[A][1]
            for j in range(dim):
                out[off + j] = {idx + toff: c for idx, c in mat[j].items()}
        return out

    def element_str(self, i: int, d: int, coords: dict) -> str:
        parts = []
        ring = self.M.ring
        for A, (md, off, dim) in self.blocks(i, d).items():
            sub = {k - off: c for k, c in coords.items() if off <= k < off + dim}
            if sub:
                vec = self.M.piece(md).element(sub)
                parts.append(f"[{','.join(str(a + 1) for a in A)}] {vec_str(vec, ring, self.M.rank)}")
        return "; ".join(parts) if parts else "0"


def induced_rank(src: CohomologyStage, tgt: CohomologyStage, i: int, d: int) -> int:
    """Rank of the map H^i(src)_d -> H^i(tgt)_d induced by the transition."""
    cyc, _, _ = src.cohomology(i, d)
    if not cyc:
        return 0
    T = src.transition(tgt, i, d) if tgt.u != src.u else None
    return _image_rank([linalg.apply(T, z) if T else z for z in cyc], tgt.cohomology(i, d)[1])


def _image_rank(vectors, boundaries: linalg.Echelon) -> int:
    e = linalg.Echelon()
    e.rows = dict(boundaries.rows)
    base = e.dim
    for v in vectors:
        e.add(v)
    return e.dim - base


def _outside(vectors, cycles, boundaries: linalg.Echelon):
    """A cycle not in span(vectors) + boundaries, or None."""
    e = linalg.Echelon()
    e.rows = dict(boundaries.rows)
    for v in vectors:
        e.add(v)
    for z in cycles:
        if not e.contains(z):
            return z
    return None


@dataclass
class ColimitPiece:
    degree: int
    value: int | None
    stage: int
    stage_dims: list
    status: str  # "stable" or "inconclusive"

    def to_json(self):
        return {"degree": self.degree, "dim": self.value, "stage": self.stage,
                "stageDims": self.stage_dims, "status": self.status}


class KoszulStages:
    """The direct system C^.(x^u, M), u = 1, 2, ..., evaluated degree by degree.

    A colimit piece is declared stable once two consecutive transitions are
    isomorphisms, searching from a start stage chosen so that every block
    with a nonempty label sits beyond the generator and relation degrees of M.
    After ``extra_stages`` further stages without stability the piece is
    reported inconclusive.
    """

    def __init__(self, x: Sequence, M: ModulePresentation, extra_stages: int = 6):
        ring = M.ring
        self.x = [ring.coerce(f) for f in x]
        if not self.x or any(f.is_zero() for f in self.x):
            raise ValueError("need a nonempty sequence of nonzero elements")
        if not M.graded or not all(f.is_homogeneous() for f in self.x):
            raise ValueError("colimit windows need homogeneous data")
        if not all(f.degree() > 0 for f in self.x):
            raise ValueError("sequence elements must have positive degree")
        self.M = M
        self.n = len(self.x)
        self.extra_stages = extra_stages
        degs = [abs(t) for t in M.twists]
        for v in M.relations:
            dv = vec_degree(v, ring, M.twists)
            if dv is not None:
                degs.append(abs(dv))
        self.reach = max(degs, default=0)
        self._stages: dict = {}
        self._pieces: dict = {}

    def stage(self, u: int) -> CohomologyStage:
        s = self._stages.get(u)
        if s is None:
            s = CohomologyStage(self.x, self.M, u)
            self._stages[u] = s
        return s

    def start_stage(self, d: int) -> int:
        low = min(f.degree() for f in self.x)
        need = max(0, -d) + self.reach + 1
        return max(1, -(-need // low))

    def colimit_piece(self, i: int, d: int) -> ColimitPiece:
        """Dimension of colim_u H^i(x^u, M)_d."""
        key = (i, d)
        if key in self._pieces:
            return self._pieces[key]
        u0 = self.start_stage(d)
        dims, isos, result = [], 0, None
        for u in range(u0, u0 + self.extra_stages + 1):
            h = self.stage(u).cohomology(i, d)[2]
            dims.append(h)
            if u > u0:
                rk = induced_rank(self.stage(u - 1), self.stage(u), i, d)
                isos = isos + 1 if rk == dims[-2] == h else 0
                if isos >= 2:
                    result = ColimitPiece(d, h, u, dims, "stable")
                    break
        if result is None:
            result = ColimitPiece(d, None, u0 + self.extra_stages, dims, "inconclusive")
        self._pieces[key] = result
        return result

    def image_rank(self, i: int, d: int, stage: int) -> int:
        """Rank of H^i(x, M)_d -> H^i(x^stage, M)_d."""
        return induced_rank(self.stage(1), self.stage(stage), i, d)

    def image_witness(self, i: int, d: int, stage: int):
        s1, su = self.stage(1), self.stage(stage)
        imgs = s1.cohomology(i, d)[0]
        if stage != 1:
            T = s1.transition(su, i, d)
            imgs = [linalg.apply(T, z) for z in imgs]
        cyc, bnd, _ = su.cohomology(i, d)
        z = _outside(imgs, cyc, bnd)
        return None if z is None else su.element_str(i, d, z)


@dataclass
class LambdaReport:
    index: int
    verdict: str
    degrees: list
    witness: dict | None = None
    stage_bound: int = 0
    route: str = "koszul-stage-image"
    notes: list = field(default_factory=list)

    def to_json(self):
        return {"index": self.index, "verdict": self.verdict, "route": self.route,
                "stageBound": self.stage_bound, "degrees": self.degrees,
                "witness": self.witness, "notes": self.notes}


def _surjectivity_verdict(index, rows, stage_bound, route, exact, witness_fn) -> LambdaReport:
    failing = None
    undecided = False
    for row in rows:
        target = row["targetDim"]
        if target is None:
            undecided = True
        elif row["imageDim"] < target and failing is None:
            failing = {"degree": row["degree"], "imageDim": row["imageDim"], "targetDim": target,
                       "element": witness_fn(row["degree"])}
    notes = []
    if failing is not None:
        verdict = "not-surjective"
        if not exact:
            notes.append("target dimensions come from colimit windows only")
    elif undecided:
        verdict = "inconclusive"
    else:
        verdict = "surjective-within-bounds"
    if not exact:
        route += "+colimit-window"
    return LambdaReport(index, verdict, rows, failing, stage_bound, route, notes)


def lambda_to_local_cohomology(i: int, x: Sequence, M: ModulePresentation, stage_bound: int = 3,
                               window=(-3, 3), exact_dims: dict | None = None,
                               stages: KoszulStages | None = None) -> LambdaReport:
    """Compare the image of H^i(x, M) with H^i_<x>(M) in each degree of ``window``.

    The image of H^i(x, M) in the colimit has dimension at most its image at
    any finite stage, so a deficit against ``exact_dims`` (degree -> dim of
    the local cohomology piece from an independent exact route) is rigorous.
    Without exact data the target is the stabilised colimit window.
    """
    if stage_bound < 1:
        raise ValueError("stage bound must be at least 1")
    if i == 0:
        return _lambda_zero(x, M)
    st = stages or KoszulStages(x, M)
    rows = []
    for d in range(window[0], window[1] + 1):
        rk = st.image_rank(i, d, stage_bound)
        row = {"degree": d, "imageDim": rk}
        if exact_dims is not None:
            row["targetDim"] = exact_dims.get(d, 0)
        else:
            cp = st.colimit_piece(i, d)
            row["targetDim"] = cp.value
            row["colimit"] = cp.to_json()
        rows.append(row)
    return _surjectivity_verdict(i, rows, stage_bound, "koszul-stage-image", exact_dims is not None,
                                 lambda d: st.image_witness(i, d, stage_bound))


def _lambda_zero(x: Sequence, M: ModulePresentation) -> LambdaReport:
    """H^0(x, M) = 0 :_M <x> maps onto Gamma_<x>(M) exactly when the two agree."""
    ring = M.ring
    I = IdealHandle(ring, x)
    ann = M.zero_submodule().colon_ideal(I)
    tors = M.zero_submodule().saturate(I)
    wit = tors.nonmember_witness(ann)
    if wit is None:
        return LambdaReport(0, "surjective", [], None, 0, "exact-colon")
    return LambdaReport(0, "not-surjective", [], {"element": vec_str(wit, ring, M.rank)}, 0, "exact-colon")


# -- Ext(S/a, M) -> Koszul cohomology ------------------------------------------

def hom_piece_matrix(M: ModulePresentation, src_twists, tgt_twists, columns, d: int) -> list:
    """Matrix of Hom(F, M)_d -> Hom(G, M)_d dual to G -> F.

    ``columns[k]`` maps generator k of G (twist ``tgt_twists[k]``) to
    ``{p: poly}`` over generators of F (twists ``src_twists``).  Block p of
    Hom(F, M)_d is M_{d + src_twists[p]}.
    """
    soff, off = [], 0
    for t in src_twists:
        soff.append(off)
        off += M.hilbert(d + t)
    toff, off2 = [], 0
    for t in tgt_twists:
        toff.append(off2)
        off2 += M.hilbert(d + t)
    out: list = [dict() for _ in range(off)]
    for k, col in enumerate(columns):
        for p, f in col.items():
            dim = M.hilbert(d + src_twists[p])
            if not dim or f.is_zero():
                continue
            mat = M.mult_images(f, d + src_twists[p])
            for j in range(dim):
                tgt = out[soff[p] + j]
                for idx, c in mat[j].items():
                    kk = idx + toff[k]
                    y = tgt.get(kk, 0) + c
                    if y == 0:
                        tgt.pop(kk, None)
                    else:
                        tgt[kk] = y
    return out


def _vec_columns(vectors, ring) -> list:
    """Free-module vectors {(p, e): c} as columns {p: Poly}."""
    out = []
    for v in vectors:
        col: dict = {}
        for (p, e), c in v.items():
            col.setdefault(p, {})[e] = c
        out.append({p: Poly(ring, t) for p, t in col.items()})
    return out


def koszul_comparison(x: Sequence[Poly], ideal_gens: Sequence[Poly], length: int):
    """Free resolution F of S/a and a chain map K.(x) -> F over the identity of S/a.

    Returns (resolution, [alpha_p as column lists]) for p = 0..length.
    """
    S = x[0].ring.ambient()
    x = [S.coerce(f) for f in x]
    A = ModulePresentation.cyclic(S, IdealHandle(S, ideal_gens))
    res = free_resolution(A, length, minimal=True)
    if res.terms[0].rank != 1:
        raise ValueError("ideal must be proper")
    K = KoszulComplex(x, ModulePresentation.free(S, [0]))
    alphas = [[{(0, S.zero_exp): S.field.one}]]
    for p in range(1, length + 1):
        if p > K.n:
            break
        if p - 1 >= len(res.differentials):
            alphas.append([dict() for _ in K.labels[p]])
            continue
        tb = TracedBasis(res.differentials[p - 1], res.terms[p - 1].rank, S)
        prev = alphas[p - 1]
        cur = []
        for v in K.differential(p):
            img: dict = {}
            for (q, e), c in v.items():
                for (r, e2), c2 in prev[q].items():
                    ee = tuple(a + b for a, b in zip(e, e2))
                    key = (r, ee)
                    y = img.get(key, 0) + c * c2
                    if y == 0:
                        img.pop(key, None)
                    else:
                        img[key] = y
            if not img:
                cur.append({})
                continue
            lift = tb.lift(img)
            if lift is None:
                raise RuntimeError("Koszul image not in the image of the resolution")
            target_deg = vec_degree(img, S, res.terms[p - 1].twists)
            tw = res.terms[p].twists
            lift = {(q, e): c for (q, e), c in lift.items()
                    if target_deg is None or S.degree_of(e) + tw[q] == target_deg}
            cur.append(lift)
        alphas.append(cur)
    return res, alphas


def phi_to_local_cohomology(i: int, a_gens: Sequence, M: ModulePresentation, stage_bound: int = 3,
                            window=(-3, 3), exact_dims: dict | None = None,
                            stages: KoszulStages | None = None) -> LambdaReport:
    """Image of Ext^i(S/a, M) in H^i_a(M), through Ext -> H^i(x, M) -> colimit stage.

    ``x`` is the given generating list of a; the first map is dual to a
    comparison K.(x) -> F of the Koszul complex with a free resolution of S/a.
    """
    ring = M.ring
    x = [ring.coerce(f) for f in a_gens]
    st = stages or KoszulStages(x, M)
    S = ring.ambient()
    res, alphas = koszul_comparison(x, x, i + 1)
    s1 = st.stage(1)
    K = KoszulComplex(x, ModulePresentation.free(S, [0]))
    rows = []
    witness_cache = {}
    for d in range(window[0], window[1] + 1):
        if i >= len(res.terms):
            ext_cycles = []
        else:
            Fi = res.terms[i].twists
            if i + 1 < len(res.terms):
                delta = hom_piece_matrix(M, Fi, res.terms[i + 1].twists,
                                         _vec_columns(res.differentials[i], S), d)
                ext_cycles = linalg.kernel(delta) if delta else []
            else:
                dim = sum(M.hilbert(d + t) for t in Fi)
                ext_cycles = [{k: ring.field.one} for k in range(dim)]
        kt = [K.label_degree(I) for I in K.labels[i]]
        alpha = hom_piece_matrix(M, res.terms[i].twists if i < len(res.terms) else [], kt,
                                 _vec_columns(alphas[i], S), d) if i < len(res.terms) else []
        imgs = [linalg.apply(alpha, z) for z in ext_cycles]
        if stage_bound != 1:
            T = s1.transition(st.stage(stage_bound), i, d)
            imgs = [linalg.apply(T, z) for z in imgs]
        su = st.stage(stage_bound)
        cyc, bnd, _ = su.cohomology(i, d)
        rk = _image_rank(imgs, bnd)
        row = {"degree": d, "imageDim": rk}
        if exact_dims is not None:
            row["targetDim"] = exact_dims.get(d, 0)
        else:
            cp = st.colimit_piece(i, d)
            row["targetDim"] = cp.value
            row["colimit"] = cp.to_json()
        rows.append(row)
        z = _outside(imgs, cyc, bnd)
        witness_cache[d] = None if z is None else su.element_str(i, d, z)
    return _surjectivity_verdict(i, rows, stage_bound, "ext-koszul-stage-image", exact_dims is not None,
                                 witness_cache.get)


# -- long exact sequence ---------------------------------------------------------

def _block_map(f: ModuleMap, src: KoszulComplex, tgt: KoszulComplex, p: int, d: int) -> list:
    """Degree-d piece of the map K_p(x, A) -> K_p(x, B) induced blockwise by f."""
    sb = src.piece_blocks(p, d)
    tb = {b[0]: b for b in tgt.piece_blocks(p, d)}
    out: list = []
    for I, md, off, dim in sb:
        if not dim:
            continue
        toff = tb[I][2]
        for col in f.piece_images(md):
            out.append({k + toff: c for k, c in col.items()})
    return out


def _cycles_and_boundaries(K: KoszulComplex, p: int, d: int):
    dim = K.piece_dim(p, d)
    if dim == 0:
        return [], linalg.Echelon()
    cyc = linalg.kernel(K.piece_differential(p, d)) if p >= 1 else \
        [{k: K.ring.field.one} for k in range(dim)]
    bnd = linalg.span(K.piece_differential(p + 1, d)) if p + 1 <= K.n else linalg.Echelon()
    return cyc, bnd


@dataclass
class ExactnessReport:
    degrees: list
    exact: bool

    def to_json(self):
        return {"exact": self.exact, "degrees": self.degrees}


def long_exact_sequence_check(f: ModuleMap, g: ModuleMap, x: Sequence, window=(-3, 6)) -> ExactnessReport:
    """Exactness of ... -> H_j(x,L) -> H_j(x,M) -> H_j(x,N) -> H_{j-1}(x,L) -> ...

    for a short exact sequence 0 -> L -f-> M -g-> N -> 0 of graded modules,
    checked on degree pieces: at every spot, rank(in) + rank(out) = dim H.
    """
    L, M, N = f.source, f.target, g.target
    KL, KM, KN = (KoszulComplex(x, A) for A in (L, M, N))
    n = KL.n
    rows, ok = [], True
    for d in range(window[0], window[1] + 1):
        data = {}
        for name, K in (("L", KL), ("M", KM), ("N", KN)):
            for p in range(n + 1):
                cyc, bnd = _cycles_and_boundaries(K, p, d)
                data[(name, p)] = (cyc, bnd, len(cyc) - bnd.dim)
        rank = {}
        Fm = [_block_map(f, KL, KM, p, d) for p in range(n + 1)]
        Gm = [_block_map(g, KM, KN, p, d) for p in range(n + 1)]
        for p in range(n + 1):
            rank[("f", p)] = _image_rank([linalg.apply(Fm[p], z) for z in data[("L", p)][0]],
                                         data[("M", p)][1])
            rank[("g", p)] = _image_rank([linalg.apply(Gm[p], z) for z in data[("M", p)][0]],
                                         data[("N", p)][1])
            if p >= 1:
                conn = _connecting(KM, Gm[p], Fm[p - 1], data[("N", p)][0], p, d)
                rank[("c", p)] = _image_rank(conn, data[("L", p - 1)][1])
            else:
                rank[("c", p)] = 0
        spots = []
        for p in range(n + 1):
            # at H_p(L): in = connecting from H_{p+1}(N), out = f_*
            cin = rank[("c", p + 1)] if p + 1 <= n else 0
            spots.append(("L", p, cin + rank[("f", p)] == data[("L", p)][2]))
            spots.append(("M", p, rank[("f", p)] + rank[("g", p)] == data[("M", p)][2]))
            spots.append(("N", p, rank[("g", p)] + rank[("c", p)] == data[("N", p)][2]))
        good = all(s[2] for s in spots)
        ok &= good
        rows.append({"degree": d, "exact": good,
                     "failures": [f"H_{p}({nm})" for nm, p, s in spots if not s]})
    return ExactnessReport(rows, ok)


def _connecting(KM: KoszulComplex, G: list, F: list, cycles_N: list, p: int, d: int) -> list:
    """delta(z) for cycles z of K_p(x,N)_d, as vectors of K_{p-1}(x,L)_d.

    ``G`` is g on K_p and ``F`` is f on K_{p-1}.
    """
    if not cycles_N:
        return []
    eg = linalg.Echelon(track=True)
    for col in G:
        eg.add(col)
    ef = linalg.Echelon(track=True)
    for col in F:
        ef.add(col)
    dM = KM.piece_differential(p, d)
    out = []
    for z in cycles_N:
        lift = eg.solve(z)
        if lift is None:
            raise RuntimeError("surjection fails on a degree piece")
        y = linalg.apply(dM, lift)
        pre = ef.solve(y)
        if pre is None:
            raise RuntimeError("boundary of a lift is not in the image of the injection")
        out.append(pre)
    return out


# -- generating-set comparison -------------------------------------------------

def _homogeneous_lift(f: Poly, gens: Sequence[Poly]):
    """Cofactors c with f = sum c_j g_j, homogeneous of the right degrees when possible."""
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
    if f.is_homogeneous() and all(g.is_homogeneous() for g in gens):
        out = [c.homogeneous_part(f.degree() - g.degree()) if not c.is_zero() else c
               for c, g in zip(out, gens)]
    return out


def _det(mat):
    n = len(mat)
    if n == 0:
        return None
    if n == 1:
        return mat[0][0]
    out = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        t = mat[0][j] * _det(minor)
        if j % 2:
            t = -t
        out = t if out is None else out + t
    return out


def wedge_matrix(C, p: int, ring):
    """Minors det C[A, B] for p-subsets A (rows of C) and B (columns)."""
    n, m = len(C), len(C[0]) if C else 0
    out = {}
    for A in subsets(n, p):
        for B in subsets(m, p):
            if p == 0:
                out[(A, B)] = ring.one()
            else:
                d = _det([[C[a][b] for b in B] for a in A])
                if not d.is_zero():
                    out[(A, B)] = d
    return out


class ComparisonMap:
    """Degree pieces of C^.(y^v, M) -> C^.(x^u, M) induced by x_a^u = sum_b C[a][b] y_b^v."""

    def __init__(self, src: CohomologyStage, tgt: CohomologyStage, C):
        self.src, self.tgt, self.C = src, tgt, C
        self._w: dict = {}

    def matrix(self, i: int, d: int) -> list:
        ring = self.src.M.ring
        W = self._w.get(i)
        if W is None:
            W = wedge_matrix(self.C, i, ring)
            self._w[i] = W
        sb, tb = self.src.blocks(i, d), self.tgt.blocks(i, d)
        out: list = [dict() for _ in range(self.src.dim(i, d))]
        for (A, B), f in W.items():
            smd, soff, sdim = sb[B]
            tmd, toff, tdim = tb[A]
            if not sdim or not tdim:
                continue
            if f.is_zero():
                continue
            mat = self.src.M.mult_images(f, smd)
            for k in range(sdim):
                col = out[soff + k]
                for idx, c in mat[k].items():
                    kk = idx + toff
                    y = col.get(kk, 0) + c
                    if y == 0:
                        col.pop(kk, None)
                    else:
                        col[kk] = y
        return out

    def is_chain_map(self, i: int, d: int) -> bool:
        a = linalg.compose(self.tgt.delta(i, d), self.matrix(i, d))
        b = linalg.compose(self.matrix(i + 1, d), self.src.delta(i, d))
        return all(_eq(p, q) for p, q in zip(a, b))


def _eq(p: dict, q: dict) -> bool:
    d = dict(p)
    linalg._axpy(d, 1, q)
    return not d


@dataclass
class SquareCertificate:
    index: int
    stage: int
    degrees: list
    commutes: bool
    chain_maps: bool
    notes: list = field(default_factory=list)

    def to_json(self):
        return {"index": self.index, "stage": self.stage, "degrees": self.degrees,
                "commutes": self.commutes, "chainMaps": self.chain_maps, "notes": self.notes}


def _cofactor_matrix(x: Sequence[Poly], y: Sequence[Poly], ux: int, uy: int):
    C = []
    for f in x:
        row = _homogeneous_lift(f ** ux, [g ** uy for g in y])
        if row is None:
            return None
        C.append(row)
    return C


def compare_generating_sets(i: int, y: Sequence, x: Sequence, M: ModulePresentation,
                            window=(-2, 2), stage: int = 2) -> SquareCertificate:
    """Check the square H^i(y) -> H^i(x) over H^i_<y> -> H^i_<x> at a finite stage.

    With x_a = sum C[a][b] y_b and x_a^u = sum C_u[a][b] y_b^v (u = stage chosen
    so the lift exists), both composites H^i(y, M) -> H^i(x^u, M) are compared
    on homology in every degree of the window.
    """
    ring = M.ring
    y = [ring.coerce(f) for f in y]
    x = [ring.coerce(f) for f in x]
    Iy = IdealHandle(ring, y)
    if not all(Iy.contains(f) for f in x):
        raise ValueError("generating-set comparison needs <x> contained in <y>")
    C1 = _cofactor_matrix(x, y, 1, 1)
    u = stage
    Cu = None
    while u <= stage + 6:
        Cu = _cofactor_matrix(x, y, u, stage)
        if Cu is not None:
            break
        u += 1
    if Cu is None:
        raise ValueError("no stage found where the powers of x lie in the powers of y")
    Y1, Yv = CohomologyStage(y, M, 1), CohomologyStage(y, M, stage)
    X1, Xu = CohomologyStage(x, M, 1), CohomologyStage(x, M, u)
    top = ComparisonMap(Y1, X1, C1)
    bottom = ComparisonMap(Yv, Xu, Cu)
    rows = []
    ok = True
    chain_ok = True
    for d in range(window[0], window[1] + 1):
        chain_ok &= top.is_chain_map(i, d) and bottom.is_chain_map(i, d)
        if i > 0:
            chain_ok &= top.is_chain_map(i - 1, d) and bottom.is_chain_map(i - 1, d)
        cyc, _, h = Y1.cohomology(i, d)
        _, bnd, _ = Xu.cohomology(i, d)
        path1 = linalg.compose(X1.transition(Xu, i, d), top.matrix(i, d))
        path2 = linalg.compose(bottom.matrix(i, d), Y1.transition(Yv, i, d))
        good = True
        for z in cyc:
            a = linalg.apply(path1, z)
            b = linalg.apply(path2, z)
            linalg._axpy(a, 1, b)
            if not bnd.contains(a):
                good = False
                break
        rows.append({"degree": d, "sourceDim": h, "commutes": good})
        ok &= good
    return SquareCertificate(i, u, rows, ok, chain_ok)


def koszul_to_hom_sign(I, n: int) -> int:
    """Sign attached to block I of K_p when read as block complement(I) of C^{n-p}."""
    return shuffle_sign(complement(I, n), n)
