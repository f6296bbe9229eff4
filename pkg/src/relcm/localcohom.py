"""Local cohomology of graded modules and the invariants built from it.

At the irrelevant ideal m of S = k[x_1..x_n] (standard grading) pieces are
exact, by graded local duality:

    dim H^i_m(M)_d = dim Ext^{n-i}_S(M, S)_{-d-n}.

For other homogeneous ideals a degree window is computed as the colimit of
Koszul cohomology along the transition maps; such windows are flagged
"window-only".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .homological import ext_modules, grade, is_a_times_m_whole
from .ideals import IdealHandle, maximal_ideal
from .koszul import KoszulStages
from .modules import ModulePresentation, Submodule, vec_str

INF = math.inf


def inf_json(v):
    if v == INF:
        return "+inf"
    if v == -INF:
        return "-inf"
    return v


# -- records ---------------------------------------------------------------------

@dataclass
class LocalCohomologyWindow:
    ideal: str
    index: int
    degree_range: tuple
    dims: dict
    exactness: str  # "exact" or "window-only"
    route: str
    details: dict = field(default_factory=dict)
    facts: dict = field(default_factory=dict)

    def to_json(self):
        return {"ideal": self.ideal, "index": self.index,
                "degreeRange": list(self.degree_range),
                "dims": {str(d): v for d, v in sorted(self.dims.items())},
                "exactness": self.exactness, "route": self.route,
                "details": {str(d): v for d, v in sorted(self.details.items())},
                "facts": self.facts}


@dataclass
class InvariantCertificate:
    name: str
    lo: float
    hi: float
    evidence: list = field(default_factory=list)
    route: str = ""

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"{self.name}: empty interval [{self.lo}, {self.hi}]")

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self):
        if not self.exact:
            raise ValueError(f"{self.name} is only known to lie in [{self.lo}, {self.hi}]")
        return self.lo

    def to_json(self):
        out = {"name": self.name, "lo": inf_json(self.lo), "hi": inf_json(self.hi),
               "exact": self.exact, "route": self.route, "evidence": self.evidence}
        if self.exact:
            out["value"] = inf_json(self.lo)
        return out


# -- torsion -----------------------------------------------------------------------

def torsion_submodule(a: IdealHandle, M: ModulePresentation) -> Submodule:
    """Gamma_a(M) = 0 :_M a^infinity."""
    return M.zero_submodule().saturate(a)


# -- irrelevant ideal through duality --------------------------------------------------

class IrrelevantCohomology:
    """Exact data of H^i_m(M) from Ext^{n-i}_S(M, S)."""

    def __init__(self, M: ModulePresentation):
        S = M.ring.ambient()
        if not S.is_standard_grading():
            raise ValueError("the duality route needs the standard grading")
        if not M.graded:
            raise ValueError("the duality route needs a graded module")
        self.M = M
        self.S = S
        self.n = S.n
        self.exts = ext_modules(M, ModulePresentation.free(S, [0]), range(self.n + 1))

    def dual(self, i: int):
        if i < 0 or i > self.n:
            return None
        return self.exts[self.n - i]

    def dim(self, i: int, d: int) -> int:
        E = self.dual(i)
        if E is None or E.is_zero():
            return 0
        return E.module.hilbert(-d - self.n)

    def vanishes(self, i: int) -> bool:
        E = self.dual(i)
        return E is None or E.is_zero()

    def finitely_generated(self, i: int) -> bool:
        """H^i_m(M) is finitely generated iff it has finite length iff its dual does."""
        E = self.dual(i)
        return E is None or E.is_zero() or E.module.dimension() <= 0

    def annihilated_by(self, i: int, I: IdealHandle) -> bool:
        """I H^i_m(M) = 0 iff I Ext^{n-i}(M, S) = 0."""
        E = self.dual(i)
        if E is None or E.is_zero():
            return True
        J = IdealHandle(E.module.ring, I.gens)
        return E.module.ideal_times(J).is_zero()

    def support(self, i: int):
        """(lo, hi) degree range of a finite-length H^i_m(M); None when zero."""
        if self.vanishes(i):
            return None
        if not self.finitely_generated(i):
            raise ValueError("H^i is not of finite length")
        P = self.dual(i).module
        e = min(P.twists)
        top = max(P.twists)
        degs = []
        while True:
            h = P.hilbert(e)
            if h:
                degs.append(e)
            elif e >= top:
                break
            e += 1
        return (-max(degs) - self.n, -min(degs) - self.n)

    def total_dim(self, i: int):
        if self.vanishes(i):
            return 0
        if not self.finitely_generated(i):
            return INF
        lo, hi = self.support(i)
        return sum(self.dim(i, d) for d in range(lo, hi + 1))

    def cd(self):
        nz = [i for i in range(self.n + 1) if not self.vanishes(i)]
        return max(nz) if nz else -INF

    def depth(self):
        nz = [i for i in range(self.n + 1) if not self.vanishes(i)]
        return min(nz) if nz else INF

    def finiteness_dimension(self):
        for i in range(1, self.n + 1):
            if not self.finitely_generated(i):
                return i
        return INF

    def facts(self, i: int) -> dict:
        out = {"vanishes": self.vanishes(i), "finitelyGenerated": self.finitely_generated(i),
               "annihilatedByM": self.annihilated_by(i, maximal_ideal(self.S))}
        tot = self.total_dim(i)
        out["totalDim"] = inf_json(tot)
        if tot not in (0, INF):
            out["support"] = list(self.support(i))
        return out


def _irrelevant(M: ModulePresentation) -> IrrelevantCohomology:
    cache = getattr(M, "_irrelevant", None)
    if cache is None:
        cache = M._irrelevant = IrrelevantCohomology(M)
    return cache


def local_cohomology_at_irrelevant(i: int, M: ModulePresentation, window=(-3, 3)) -> LocalCohomologyWindow:
    """Exact pieces of H^i_m(M) plus global facts from the dual Ext module."""
    D = _irrelevant(M)
    dims = {d: D.dim(i, d) for d in range(window[0], window[1] + 1)}
    return LocalCohomologyWindow("m", i, tuple(window), dims, "exact", "graded-duality",
                                 facts=D.facts(i))


def same_support_radical(a: IdealHandle, b: IdealHandle, M: ModulePresentation) -> bool:
    """Rad(a + Ann M) = Rad(b + Ann M)."""
    ann = M.annihilator()
    return (a + ann).radical_equals(b + ann)


def is_irrelevant_on_support(a: IdealHandle, M: ModulePresentation) -> bool:
    return same_support_radical(a, maximal_ideal(M.ring), M)


def duality_applies(a: IdealHandle, M: ModulePresentation) -> bool:
    S = M.ring.ambient()
    return M.graded and S.is_standard_grading() and is_irrelevant_on_support(a, M)


# -- colimit windows --------------------------------------------------------------------

def _stages(gens, M):
    key = tuple(str(g) for g in gens)
    cache = getattr(M, "_stage_cache", None)
    if cache is None:
        cache = M._stage_cache = {}
    st = cache.get(key)
    if st is None:
        st = cache[key] = KoszulStages(gens, M)
    return st


def cech_cohomology_window(i: int, gens: Sequence, M: ModulePresentation, window=(-3, 3)) -> LocalCohomologyWindow:
    """H^i_<gens>(M) degree by degree as a stabilised colimit of Koszul cohomology."""
    ring = M.ring
    gens = [ring.coerce(g) for g in gens]
    if window[0] > window[1]:
        raise ValueError("empty degree window")
    st = _stages(gens, M)
    dims, details = {}, {}
    for d in range(window[0], window[1] + 1):
        cp = st.colimit_piece(i, d)
        dims[d] = cp.value
        details[d] = cp.to_json()
    ideal = "<" + ", ".join(str(g) for g in gens) + ">"
    return LocalCohomologyWindow(ideal, i, tuple(window), dims, "window-only", "koszul-colimit", details)


class FilterRegularityError(ValueError):
    def __init__(self, report):
        super().__init__(f"sequence is not filter-regular: {report.witness}")
        self.report = report


def filter_regular_reduce(i: int, a: IdealHandle, x: Sequence, M: ModulePresentation,
                          window=(-3, 3)) -> LocalCohomologyWindow:
    """H^i_a(M) computed as H^i_<x>(M) for an a-filter-regular x in a, i < len(x)."""
    from .seqcheck import check_sequence
    x = [M.ring.coerce(f) for f in x]
    if not 0 <= i < len(x):
        raise ValueError("index outside the range where the isomorphism holds")
    if not all(a.contains(f) for f in x):
        raise ValueError("sequence must lie in the ideal")
    rep = check_sequence("filter-regular", x, a, M)
    if rep.verdict != "holds":
        raise FilterRegularityError(rep)
    out = cech_cohomology_window(i, x, M, window)
    out.route = "filter-regular-reduction"
    out.ideal = str(a)
    return out


# -- invariants -----------------------------------------------------------------------------

def _radical_generator_bound(a: IdealHandle, M: ModulePresentation) -> int:
    return len(a.gens)


def cohomological_dimension(a: IdealHandle, M: ModulePresentation) -> InvariantCertificate:
    """cd(a, M) as a certified interval; exact through duality when a is m up to radical."""
    if is_a_times_m_whole(a, M):
        return InvariantCertificate("cd", -INF, -INF, ["aM = M"], "convention")
    if duality_applies(a, M):
        c = _irrelevant(M).cd()
        return InvariantCertificate("cd", c, c, [f"H^{c}_m(M) != 0 and higher duals vanish"],
                                    "graded-duality")
    ann = M.annihilator()
    if a.radical_issubset(ann):
        # M is a-torsion: H^0 = M is nonzero and nothing above it survives
        return InvariantCertificate("cd", 0, 0, ["a nilpotent on M, so M = Gamma_a(M)"], "torsion-module")
    g = grade(a, M)
    dim = M.dimension()
    hi = min(_radical_generator_bound(a, M), dim)
    ev = [f"grade = {g}", f"dim M = {dim}", f"{len(a.gens)} generators"]
    lo = g
    h = height_on_module(a, M)
    if h.lo > lo:
        lo = h.lo
        ev.append(f"ht_M a >= {h.lo}")
    if lo < 1:
        # cd <= 0 would force M = Gamma_a(M), i.e. a nilpotent on M
        lo = 1
        ev.append("a not nilpotent on M")
    for p in _minimal_primes(ann):
        if (a + p).is_unit():
            continue
        rel = p.dimension() - (a + p).dimension()
        if rel > lo:
            lo = rel
            ev.append(f"ht((a + p)/p) = {rel} at the minimal prime {p}")
    return InvariantCertificate("cd", lo, max(lo, hi), ev, "grade-and-generator-bounds")


def finiteness_dimension(a: IdealHandle, M: ModulePresentation, cd: InvariantCertificate | None = None
                         ) -> InvariantCertificate:
    """Least i >= 1 with H^i_a(M) not finitely generated."""
    cd = cd or cohomological_dimension(a, M)
    if cd.hi < 1:
        raise ValueError("finiteness dimension is only considered when cd >= 1")
    if duality_applies(a, M):
        f = _irrelevant(M).finiteness_dimension()
        return InvariantCertificate("f_a", f, f, ["finite generation read off the dual Ext dimensions"],
                                    "graded-duality")
    g = grade(a, M)
    ev = [f"grade = {g}"]
    if cd.exact and g == cd.value:
        return InvariantCertificate("f_a", cd.value, cd.value,
                                    ev + ["H^i vanishes below cd and the top module is not finitely generated"],
                                    "grade-equals-cd")
    lo = max(1, g)
    return InvariantCertificate("f_a", min(lo, cd.hi), cd.hi, ev + ["f_a <= cd"], "bounds")


def height_on_module(a: IdealHandle, M: ModulePresentation) -> InvariantCertificate:
    """ht_M a = ht((a + Ann M)/Ann M); exact when S/Ann M is equidimensional."""
    if is_a_times_m_whole(a, M):
        return InvariantCertificate("ht_M", INF, INF, ["aM = M"], "convention")
    ann = M.annihilator()
    top = ann.dimension()
    formula = top - (a + ann).dimension()
    eq = _equidimensional(ann)
    if eq:
        return InvariantCertificate("ht_M", formula, formula,
                                    [f"dim S/Ann = {top}", "S/Ann equidimensional"], "dimension-arithmetic")
    g = grade(a, M)
    return InvariantCertificate("ht_M", min(g, formula), formula,
                                [f"grade = {g}", f"dimension formula {formula}"], "bounds")


def _minimal_primes(ann: IdealHandle) -> list:
    """Minimal primes of a monomial annihilator; empty when not available."""
    if ann.is_zero():
        return [IdealHandle(ann.ring, [])]
    if not ann.is_monomial() or ann.ring.is_quotient():
        return []
    from .monomial import associated_primes_monomial
    primes = associated_primes_monomial(ann)
    return [P for P in primes if not any(Q is not P and Q.issubset(P) for Q in primes)]


def _equidimensional(ann: IdealHandle):
    if ann.is_zero():
        return True
    if ann.is_monomial() and not ann.ring.is_quotient():
        from .monomial import associated_primes_monomial
        primes = associated_primes_monomial(ann)
        minimal = [P for P in primes if not any(Q is not P and Q.issubset(P) for Q in primes)]
        return len({P.dimension() for P in minimal}) == 1
    if len(ann.gens) == 1:
        return True  # principal ideals of a polynomial ring are unmixed
    return False


def is_associated(p: IdealHandle, M: ModulePresentation) -> bool:
    """p in Ass M for a prime p: (0 :_M p) localised at p is nonzero."""
    N = M.zero_submodule().colon_ideal(p)
    if N.is_zero():
        return False
    P, _ = N.presentation()
    return P.annihilator().issubset(p)


def height_and_lambda_bounds(a: IdealHandle, M: ModulePresentation, primes: Sequence[IdealHandle] = ()):
    """(ht_M a, upper bound for lambda_a(M) over the supplied primes)."""
    ht = height_on_module(a, M)
    ann = M.annihilator()
    best = INF
    ev = []
    for p in primes:
        if a.issubset(p):
            raise ValueError(f"prime {p} contains the ideal")
        if not ann.issubset(p):
            raise ValueError(f"prime {p} does not contain Ann M")
        if is_associated(p, M):
            depth, dnote = 0, "p in Ass M"
        else:
            depth = ann.dimension() - p.dimension()
            dnote = "depth M_p <= dim M_p <= dim S/Ann - dim S/p"
        rel = p.dimension() - (a + p).dimension()
        bound = depth + rel
        ev.append({"prime": str(p), "depth": depth, "depthNote": dnote, "relativeHeight": rel,
                   "bound": bound})
        best = min(best, bound)
    lam = InvariantCertificate("lambda-upper", -INF, best, ev, "upper-bound-over-supplied-primes")
    return ht, lam


def describe_element(M: ModulePresentation, v: dict) -> str:
    return vec_str(v, M.ring, M.rank)
