"""Executable checks of the structural theorems on concrete instances.

Each validator evaluates the hypotheses first, then every implication the
statement asserts.  Clause verdicts are "pass", "fail", "inconclusive" or
"skipped".  Clauses whose statement needs a lying in the Jacobson radical are
run anyway when that hypothesis is not certified, but are tagged exploratory
and never count as failures.

Truth values inside a validator are one of "true", "within" (holds on every
sampled case within budget), "false" (refuted by an explicit witness) or None
(not decidable here).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .ideals import IdealHandle, maximal_ideal
from .koszul import (KoszulComplex, _block_map, _cycles_and_boundaries, lambda_to_local_cohomology)
from .localcohom import (INF, _irrelevant, cech_cohomology_window, cohomological_dimension,
                         duality_applies, finiteness_dimension, height_and_lambda_bounds,
                         inf_json, is_associated)
from .homological import ext_module, grade
from .modules import ModuleMap, ModulePresentation
from .relclass import (FALSE, TRUE, UNKNOWN, WITHIN, chain_conflicts, classify_module, jacobson_ok,
                       local_mode_status, positive, sample_rsops, search_rsop, verify_rsop)
from .seqcheck import Budget, FGeneratingSetError, build_f_generating_set, check_sequence, witness_json


@dataclass
class TheoremInstance:
    ideal: IdealHandle
    module: ModulePresentation
    sequence: list | None = None
    ell: int = 1
    n: int | None = None
    primes: list = field(default_factory=list)
    local_mode: bool = False
    samples: int = 4
    seed: int = 0
    window: tuple = (-3, 3)

    def to_json(self):
        M = self.module
        return {"ring": M.ring.describe(), "module": M.describe(),
                "ideal": [str(g) for g in self.ideal.gens],
                "sequence": None if self.sequence is None else [str(f) for f in self.sequence],
                "ell": self.ell, "n": self.n, "primes": [str(p) for p in self.primes],
                "localMode": self.local_mode, "samples": self.samples, "seed": self.seed,
                "window": list(self.window)}


@dataclass
class Clause:
    name: str
    verdict: str
    detail: str = ""
    exploratory: bool = False

    def to_json(self):
        return {"clause": self.name, "verdict": self.verdict, "detail": self.detail,
                "exploratory": self.exploratory}


@dataclass
class TheoremReport:
    theorem_id: str
    instance: TheoremInstance
    hypotheses: list = field(default_factory=list)
    clauses: list = field(default_factory=list)
    ledger: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(c.verdict == "fail" and not c.exploratory for c in self.clauses)

    @property
    def status(self) -> str:
        if self.failed:
            return "fail"
        vs = {c.verdict for c in self.clauses if not c.exploratory}
        if vs and vs <= {"pass"}:
            return "pass"
        return "inconclusive" if vs - {"skipped"} else "skipped"

    def to_json(self):
        return {"theoremId": self.theorem_id, "instance": self.instance.to_json(),
                "hypotheses": self.hypotheses,
                "clauses": [dict(c.to_json(), route=f"validator:{self.theorem_id}") for c in self.clauses],
                "ledger": self.ledger, "status": self.status, "data": self.data,
                "counterexample": self.instance.to_json() if self.failed else None}


# -- truth-value plumbing -----------------------------------------------------------------

def _tv(flag: bool | None, within: bool = False):
    if flag is None:
        return None
    if flag:
        return "within" if within else "true"
    return "false"


def _verdict_tv(v: str):
    return {TRUE: "true", WITHIN: "within", FALSE: "false"}.get(v)


def implies(name, hyp, concl, exploratory=False, detail="") -> Clause:
    if hyp == "false":
        return Clause(name, "pass", "antecedent false", exploratory)
    if hyp is None or concl is None:
        return Clause(name, "inconclusive", detail or "a side is undecided", exploratory)
    if concl in ("true", "within"):
        note = "within budget" if "within" in (hyp, concl) else ""
        return Clause(name, "pass", detail or note, exploratory)
    if hyp == "within":
        return Clause(name, "inconclusive", "antecedent only sampled, consequent refuted", exploratory)
    return Clause(name, "fail", detail or "antecedent holds, consequent refuted", exploratory)


def equivalent(name, p, q, exploratory=False) -> Clause:
    if p is None or q is None:
        return Clause(name, "inconclusive", "a side is undecided", exploratory)
    pt, qt = p != "false", q != "false"
    if pt == qt:
        note = "within budget" if "within" in (p, q) else ""
        return Clause(name, "pass", note, exploratory)
    if "within" in (p, q):
        return Clause(name, "inconclusive", "sampled side disagrees with a refuted side", exploratory)
    return Clause(name, "fail", f"sides disagree: {p} vs {q}", exploratory)


def _seq_tv(kind, x, a, M, budget):
    rep = check_sequence(kind, x, a, M, budget)
    return _tv(rep.verdict != "fails", rep.verdict == "holds-within-budget"), rep


def _annihilation_tv(I: IdealHandle, a: IdealHandle, M, below: int):
    """I H^i_a(M) = 0 for all i < below, exact through duality only."""
    if not duality_applies(a, M):
        return None
    D = _irrelevant(M)
    return _tv(all(D.annihilated_by(i, I) for i in range(max(below, 0))))


def _cohomology_dims(i, a, M, window):
    if duality_applies(a, M):
        D = _irrelevant(M)
        return {d: D.dim(i, d) for d in range(window[0], window[1] + 1)}, "graded-duality"
    return cech_cohomology_window(i, a.gens, M, window).dims, "koszul-colimit"


def _lambda_tv(i, x, M, a, window, stage_bound=3):
    if i == 0:
        r = lambda_to_local_cohomology(0, x, M)
    elif duality_applies(a, M):
        D = _irrelevant(M)
        sup = D.support(i) if D.finitely_generated(i) else None
        if not D.finitely_generated(i):
            return None, None
        win = sup or (0, 0)
        dims = {d: D.dim(i, d) for d in range(win[0], win[1] + 1)}
        r = lambda_to_local_cohomology(i, x, M, stage_bound, win, dims)
    else:
        r = lambda_to_local_cohomology(i, x, M, stage_bound, window)
    tv = {"surjective": "true", "surjective-within-bounds": "within", "not-surjective": "false"}.get(r.verdict)
    return tv, r


def _all_tv(values):
    values = list(values)
    if "false" in values:
        return "false"
    if None in values:
        return None
    return "within" if "within" in values else "true"


def _jacobson(inst, rep) -> bool:
    entry = local_mode_status(inst.ideal, inst.module, inst.local_mode)
    rep.hypotheses.append(entry)
    ok = jacobson_ok(entry)
    if not ok:
        rep.ledger.append("Jacobson hypothesis not certified; dependent clauses are exploratory")
    return ok


def _require(rep, name, ok, detail=""):
    rep.hypotheses.append({"hypothesis": name, "status": "verified" if ok else "failed", "detail": detail})
    if not ok:
        rep.ledger.append(f"hypothesis failed: {name}; clauses skipped")
    return ok


def _skip(rep, names):
    for n in names:
        rep.clauses.append(Clause(n, "skipped", "hypothesis failed"))
    return rep


def _sequence(inst) -> list:
    if inst.sequence is None:
        raise ValueError("this check needs a sequence")
    return [inst.module.ring.coerce(f) for f in inst.sequence]


def _rsop_gate(inst, rep, cd=None):
    cd = cd or cohomological_dimension(inst.ideal, inst.module)
    search = search_rsop(inst.ideal, inst.module, seed=inst.seed, cd=cd)
    ok = search.found is not None
    _require(rep, "ara = cd", ok, search.found.sequence if ok else search.note)
    return ok, cd, search


def _rsops(inst, cd, search):
    rs = sample_rsops(inst.ideal, inst.module, cd, inst.samples, inst.seed)
    if search.found is not None and not any(r.sequence == search.found.sequence for r in rs):
        rs.insert(0, search.found)
    return rs[:max(inst.samples, 1)]


def _gen_cm_tv(a, M, cd=None):
    cd = cd or cohomological_dimension(a, M)
    if not cd.exact:
        return None
    if cd.value <= 0:
        return "true"
    f = finiteness_dimension(a, M, cd)
    if not f.exact:
        return None
    return _tv(f.value == cd.value)


# -- validators ------------------------------------------------------------------------------

def check_filter_regular_reduction(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """H^i_a(M) and H^i_<x>(M) agree below the length of an a-filter regular x."""
    rep = TheoremReport("2.3B(i)", inst)
    a, M = inst.ideal, inst.module
    x = _sequence(inst)
    r = len(x)
    ok = _require(rep, "x in a", all(a.contains(f) for f in x))
    tv, fr = _seq_tv("filter-regular", x, a, M, budget)
    ok = _require(rep, "x a-filter regular", ok and tv == "true", fr.verdict) and ok
    if not ok:
        return _skip(rep, [f"H^{i}_a = H^{i}_<x>" for i in range(r)])
    for i in range(r):
        da, route = _cohomology_dims(i, a, M, inst.window)
        dx = cech_cohomology_window(i, x, M, inst.window).dims
        undecided = [d for d in da if da[d] is None or dx[d] is None]
        bad = [d for d in da if d not in undecided and da[d] != dx[d]]
        rep.data[f"H{i}"] = {"ideal": {str(d): v for d, v in da.items()},
                             "sequence": {str(d): v for d, v in dx.items()}, "route": route}
        if bad:
            rep.clauses.append(Clause(f"H^{i}_a = H^{i}_<x>", "fail", f"degrees {bad} differ"))
        elif undecided:
            rep.clauses.append(Clause(f"H^{i}_a = H^{i}_<x>", "inconclusive", f"degrees {undecided} undecided"))
        else:
            rep.clauses.append(Clause(f"H^{i}_a = H^{i}_<x>", "pass", f"window {list(inst.window)}"))
    return rep


def check_lambda_gives_weak(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """Unconditioned filter regular plus lambda surjective below n gives an unconditioned <x>-weak u.s.d-sequence."""
    rep = TheoremReport("2.4", inst)
    a, M = inst.ideal, inst.module
    x = _sequence(inst)
    n = len(x)
    ok = _require(rep, "x in a", all(a.contains(f) for f in x))
    ufr, r = _seq_tv("unconditioned-filter-regular", x, a, M, budget)
    ok = _require(rep, "x unconditioned a-filter regular", ok and ufr in ("true", "within"), r.verdict) and ok
    b = IdealHandle(M.ring, x)
    lams = []
    for i in range(n):
        tv, lr = _lambda_tv(i, x, M, b, inst.window)
        lams.append(tv)
        if lr is not None:
            rep.data[f"lambda{i}"] = lr.to_json()
    lam = _all_tv(lams)
    rep.hypotheses.append({"hypothesis": "lambda^i surjective for i < n", "status": str(lam)})
    if not ok:
        return _skip(rep, ["unconditioned <x>-weak", "u.s.d-sequence"])
    hyp = _all_tv([ufr, lam])
    uw, r1 = _seq_tv("unconditioned-weak", x, b, M, budget)
    usd, r2 = _seq_tv("usd", x, None, M, budget)
    rep.data["unconditionedWeak"] = r1.to_json()
    rep.data["usd"] = r2.to_json()
    rep.clauses.append(implies("hypotheses => unconditioned <x>-weak", hyp, uw))
    rep.clauses.append(implies("hypotheses => u.s.d-sequence", hyp, usd))
    return rep


def _homology_injective(x, N_gens, M, i, window) -> tuple:
    """Injectivity of H_i(x, N) -> H_i(x, M) for the submodule N generated by N_gens, per degree."""
    N = M.submodule(N_gens)
    P, gens = N.presentation()
    f = ModuleMap(P, M, gens, check=False)
    KP, KM = KoszulComplex(x, P), KoszulComplex(x, M)
    out = {}
    for d in range(window[0], window[1] + 1):
        cyc, bnd = _cycles_and_boundaries(KP, i, d)
        h = len(cyc) - bnd.dim
        if h == 0:
            out[d] = True
            continue
        images = _block_map(f, KP, KM, i, d)
        _, bndM = _cycles_and_boundaries(KM, i, d)
        e = linalg.Echelon()
        for v in bndM.basis():
            e.add(v)
        base = e.dim
        for z in cyc:
            e.add(linalg.apply(images, z))
        out[d] = (e.dim - base) == h
    return out


def check_socle_injectivity(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """If every n of x form a d-sequence, H_i(x, 0:_M a) -> H_i(x, M) is injective for s - n <= i <= s."""
    rep = TheoremReport("2.5", inst)
    M = inst.module
    x = _sequence(inst)
    s = len(x)
    n = inst.n if inst.n is not None else s
    a = IdealHandle(M.ring, x)
    bad = None
    for sub in itertools.combinations(range(s), n):
        r = check_sequence("d-sequence", [x[k] for k in sub], None, M, budget)
        if r.verdict == "fails":
            bad = (sub, witness_json(r.witness))
            break
    names = [f"H_{i} injective" for i in range(max(s - n, 0), s + 1)]
    if not _require(rep, f"every {n} elements form a d-sequence", bad is None, str(bad) if bad else ""):
        return _skip(rep, names)
    soc = M.zero_submodule().colon_ideal(a)
    for i, name in zip(range(max(s - n, 0), s + 1), names):
        if soc.is_zero():
            rep.clauses.append(Clause(name, "pass", "0 :_M a = 0"))
            continue
        inj = _homology_injective(x, soc.gens, M, i, inst.window)
        badd = [d for d, v in inj.items() if not v]
        rep.clauses.append(Clause(name, "fail" if badd else "pass",
                                  f"non-injective in degrees {badd}" if badd else f"window {list(inst.window)}"))
    return rep


def check_weak_annihilation(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """For x in a^(2l): a^l-weak <=> (a^l H^i_a = 0 for i < n and a-filter regular)."""
    rep = TheoremReport("2.6", inst)
    a, M = inst.ideal, inst.module
    x = _sequence(inst)
    ell = inst.ell
    al = a.power(ell)
    a2l = a.power(2 * ell)
    if not _require(rep, f"x in a^{2 * ell}", all(a2l.contains(f) for f in x)):
        return _skip(rep, ["(i) <=> (ii)"])
    weak, r1 = _seq_tv("weak", x, al, M, budget)
    fr, r2 = _seq_tv("filter-regular", x, a, M, budget)
    ann = _annihilation_tv(al, a, M, len(x))
    ii = None if ann is None else _all_tv([ann, fr])
    rep.data = {"weak": r1.to_json(), "filterRegular": r2.to_json(), "annihilation": ann}
    rep.clauses.append(implies("(i) => (ii)", weak, ii))
    rep.clauses.append(implies("(ii) => (i)", ii, weak))
    return rep


def check_f_generating_sets(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """Weakness of n-subsets of f-generating sets versus surjectivity of lambda below n."""
    rep = TheoremReport("2.7", inst)
    a, M = inst.ideal, inst.module
    cd = cohomological_dimension(a, M)
    n = inst.n if inst.n is not None else (cd.value if cd.exact and cd.value != -INF else 1)
    sets = []
    for k in range(2):
        try:
            ys, fr = build_f_generating_set(a, M, min_size=n, seed=inst.seed + k, budget=budget)
        except FGeneratingSetError as exc:
            rep.ledger.append(f"f-generating set search failed: {exc}")
            continue
        if not any([str(y) for y in ys] == [str(z) for z in s] for s in sets):
            sets.append(ys)
    if not _require(rep, "f-generating set with at least n elements", bool(sets)):
        return _skip(rep, ["(i) => (ii)", "(ii) <=> (iii)"])
    per_set = []
    for ys in sets:
        vals = []
        for sub in itertools.combinations(ys, n):
            tv, _ = _seq_tv("unconditioned-weak", list(sub), a, M, budget)
            vals.append(tv)
        per_set.append(_all_tv(vals))
    lam = _all_tv(_lambda_tv(i, sets[0], M, a, inst.window)[0] for i in range(n))
    rep.data = {"fGeneratingSets": [[str(y) for y in ys] for ys in sets], "n": n,
                "subsetsWeak": per_set, "lambda": lam}
    i_tv = _all_tv(per_set)
    rep.clauses.append(implies("(i) => (ii)", i_tv, per_set[0]))
    rep.clauses.append(equivalent("(ii) <=> (iii)", per_set[0], lam))
    return rep


def _auto_primes(M):
    ann = M.annihilator()
    if ann.is_monomial() and not ann.ring.is_quotient() and M.rank == 1:
        from .monomial import associated_primes_monomial
        return associated_primes_monomial(ann)
    return []


def check_lambda_equals_f(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """f_a = lambda_a and cd(a, R/p) = c for associated primes p outside V(a)."""
    rep = TheoremReport("3.2", inst)
    a, M = inst.ideal, inst.module
    jac = _jacobson(inst, rep)
    cd = cohomological_dimension(a, M)
    gcm = _gen_cm_tv(a, M, cd)
    ok = _require(rep, "relative generalized CM with cd > 0",
                  gcm == "true" and cd.exact and cd.value > 0)
    if not ok:
        return _skip(rep, ["f_a <= lambda bound", "lambda bound attained", "cd(a, R/p) = c"])
    c = cd.value
    f = finiteness_dimension(a, M, cd)
    primes = list(inst.primes) or _auto_primes(M)
    outside = [p for p in primes if not a.issubset(p)]
    _, lam = height_and_lambda_bounds(a, M, outside)
    rep.data = {"f": f.to_json(), "lambdaUpper": lam.to_json()}
    rep.clauses.append(Clause("f_a <= lambda bound", "pass" if f.hi <= lam.hi else "fail",
                              f"f_a = {inf_json(f.hi)}, bound = {inf_json(lam.hi)}"))
    ass = [p for p in outside if is_associated(p, M)]
    if not ass:
        rep.clauses.append(Clause("lambda bound attained", "inconclusive", "no associated prime outside V(a) supplied",
                                  not jac))
        return rep
    ev = {e["prime"]: e["bound"] for e in lam.evidence}
    att = [ev[str(p)] for p in ass]
    rep.clauses.append(Clause("lambda bound attained", "pass" if min(att) == c else "fail",
                              f"bounds at associated primes {att}, c = {c}", not jac))
    for p in ass:
        Q = ModulePresentation.cyclic(M.ring, list(p.gens))
        cq = cohomological_dimension(a, Q)
        if cq.exact:
            v = "pass" if cq.value == c else "fail"
        else:
            v = "inconclusive" if cq.lo <= c <= cq.hi else "fail"
        rep.clauses.append(Clause(f"cd(a, R/{p}) = c", v, f"cd in [{inf_json(cq.lo)}, {inf_json(cq.hi)}]", not jac))
    return rep


def check_rsop_descent(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """Rs.o.p.'s of a generalized CM module are unconditioned filter regular and cut cd by one per step."""
    rep = TheoremReport("3.3", inst)
    a, M = inst.ideal, inst.module
    jac = _jacobson(inst, rep)
    ara, cd, search = _rsop_gate(inst, rep)
    gcm = _gen_cm_tv(a, M, cd)
    ok = _require(rep, "relative generalized CM", gcm == "true") and ara
    if not ok:
        return _skip(rep, ["(i) unconditioned filter regular", "(ii) quotient descent"])
    c = cd.value
    rows = []
    for cert in _rsops(inst, cd, search):
        x = cert.polys
        tv, r = _seq_tv("unconditioned-filter-regular", x, a, M, budget)
        rep.clauses.append(Clause(f"(i) {cert.sequence} unconditioned filter regular",
                                  "pass" if tv != "false" else "fail", r.verdict, not jac))
        for i in range(c + 1):
            Q = M.quotient_by_ideal(IdealHandle(M.ring, x[:i]))
            cq = cohomological_dimension(a, Q)
            g = _gen_cm_tv(a, Q, cq)
            rows.append({"rsop": cert.sequence, "i": i, "cd": cq.to_json(), "genCM": g})
            name = f"(ii) cd(a, M/<x_1..x_{i}>M) = {c - i} and generalized CM"
            if not cq.exact or g is None:
                v = "inconclusive" if cq.lo <= c - i <= cq.hi else "fail"
            else:
                v = "pass" if cq.value == c - i and g == "true" else "fail"
            rep.clauses.append(Clause(name, v, f"cd in [{inf_json(cq.lo)}, {inf_json(cq.hi)}]", not jac))
    rep.data["quotients"] = rows
    return rep


def check_power_weak(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """Generalized CM <=> some power a^l makes every Rs.o.p. a^l-weak (l searched up to B)."""
    rep = TheoremReport("3.5", inst)
    a, M = inst.ideal, inst.module
    jac = _jacobson(inst, rep)
    ara, cd, search = _rsop_gate(inst, rep)
    if not ara:
        return _skip(rep, ["(i) => (ii)", "(ii) => (i)"])
    gcm = _gen_cm_tv(a, M, cd)
    rs = _rsops(inst, cd, search)
    found = None
    for ell in range(1, budget.B + 1):
        al = a.power(ell)
        if all(check_sequence("weak", r.polys, al, M, budget).verdict != "fails" for r in rs):
            found = ell
            break
    rep.data = {"genCM": gcm, "ell": found, "rsops": [r.sequence for r in rs]}
    ii = "within" if found is not None else None
    rep.clauses.append(implies("(i) => (ii)", gcm, ii, not jac,
                               "" if found else f"no l <= {budget.B} works on the samples"))
    rep.clauses.append(implies("(ii) => (i)", ii, gcm, not jac))
    return rep


def _localized_depth(p: IdealHandle, M: ModulePresentation, top: int) -> int | None:
    """depth M_p = min{i : p in Supp Ext^i(S/p, M)}, searched up to ``top``."""
    Sp = ModulePresentation.cyclic(M.ring, list(p.gens))
    for i in range(top + 1):
        E = ext_module(i, Sp, M)
        if E.is_zero():
            continue
        ann = E.module.annihilator()
        if ann.issubset(IdealHandle(ann.ring, p.gens)):
            return i
    return None


def check_localized_cm(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """M_p is CM for supplied primes p in Supp M properly inside a."""
    from .localcohom import _equidimensional
    rep = TheoremReport("3.6", inst)
    a, M = inst.ideal, inst.module
    cd = cohomological_dimension(a, M)
    gcm = _gen_cm_tv(a, M, cd)
    ann = M.annihilator()
    ok = _require(rep, "relative generalized CM with cd > 0", gcm == "true" and cd.exact and cd.value > 0)
    ok = _require(rep, "Ann M equidimensional", bool(_equidimensional(ann))) and ok
    primes = list(inst.primes)
    if not ok:
        return _skip(rep, [f"M_{p} Cohen-Macaulay" for p in primes])
    top = ann.dimension()
    for p in primes:
        name = f"M_{p} Cohen-Macaulay"
        if not ann.issubset(p) or not p.issubset(a) or a.issubset(p):
            rep.clauses.append(Clause(name, "skipped", "prime not in Supp M or not properly inside a"))
            rep.ledger.append(f"prime {p} outside the range of the statement")
            continue
        dim_p = top - p.dimension()
        depth_p = _localized_depth(p, M, dim_p)
        rep.data[str(p)] = {"dim": dim_p, "depth": depth_p}
        rep.clauses.append(Clause(name, "pass" if depth_p == dim_p else "fail",
                                  f"depth {depth_p}, dim {dim_p}"))
    if not primes:
        rep.clauses.append(Clause("M_p Cohen-Macaulay", "inconclusive", "no primes supplied"))
    return rep


def check_quasi_criterion(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """quasi Buchsbaum => weak Rs.o.p. in a^2 => a H^i_a = 0 below cd (=> quasi under Jacobson)."""
    rep = TheoremReport("4.1", inst)
    a, M = inst.ideal, inst.module
    jac = _jacobson(inst, rep)
    ara, cd, search = _rsop_gate(inst, rep)
    if not ara:
        return _skip(rep, ["(i) => (ii)", "(ii) => (iii)", "(iii) => (i)"])
    rs = _rsops(inst, cd, search)
    weak_any, vals, wit = False, [], None
    for r in rs:
        sq = [f * f for f in r.polys]
        rr = check_sequence("weak", sq, a, M, budget)
        vals.append(rr.verdict != "fails")
        if rr.verdict == "fails" and wit is None:
            wit = {"rsop": [str(s) for s in sq], "witness": witness_json(rr.witness)}
        weak_any |= rr.verdict != "fails"
    i_tv = "within" if all(vals) else "false"
    ii_tv = "true" if weak_any else None
    iii_tv = _annihilation_tv(a, a, M, cd.value)
    rep.data = {"sampled": len(rs), "weakSquares": vals, "annihilation": iii_tv, "witness": wit}
    rep.clauses.append(implies("(i) => (ii)", i_tv, ii_tv))
    rep.clauses.append(implies("(ii) => (iii)", ii_tv, iii_tv))
    rep.clauses.append(implies("(iii) => (i)", iii_tv, i_tv, not jac))
    return rep


def check_buchsbaum_criteria(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """lambda over all generating sets <=> over an f-generating set; Buchsbaum => u.s.d; and the open converse."""
    rep = TheoremReport("4.2", inst)
    a, M = inst.ideal, inst.module
    jac = _jacobson(inst, rep)
    ara, cd, search = _rsop_gate(inst, rep)
    names = ["(i) <=> (ii)", "(iii) => (iv)", "(i) => (iii)"]
    if not ara or not _require(rep, "cd > 0", cd.value > 0):
        return _skip(rep, names)
    c = cd.value
    try:
        fs, _ = build_f_generating_set(a, M, seed=inst.seed, budget=budget)
    except FGeneratingSetError as exc:
        rep.ledger.append(str(exc))
        fs = None
    ii = None if fs is None else _all_tv(_lambda_tv(i, fs, M, a, inst.window)[0] for i in range(c))
    gens_tv = _all_tv(_lambda_tv(i, list(a.gens), M, a, inst.window)[0] for i in range(c))
    i_tv = _all_tv([ii, gens_tv]) if ii is not None else (gens_tv if gens_tv == "false" else None)
    rs = _rsops(inst, cd, search)
    iii_vals, iv_vals = [], []
    for r in rs:
        iii_vals.append(_seq_tv("weak", r.polys, a, M, budget)[0])
        iv_vals.append(_seq_tv("usd", r.polys, None, M, budget)[0])
    iii_tv = _all_tv(iii_vals)
    if iii_tv == "true":
        iii_tv = "within"
    iv_tv = _all_tv(iv_vals)
    if iv_tv == "true":
        iv_tv = "within"
    rep.data = {"lambdaFGenerating": ii, "lambdaGenerators": gens_tv, "buchsbaumSampled": iii_tv,
                "usdSampled": iv_tv, "fGeneratingSet": [str(y) for y in fs] if fs else None}
    rep.clauses.append(equivalent("(i) <=> (ii)", i_tv, ii))
    rep.clauses.append(implies("(iii) => (iv)", iii_tv, iv_tv))
    rep.clauses.append(implies("(i) => (iii)", i_tv, iii_tv, not jac))
    separates = iv_tv in ("true", "within") and iii_tv == "false"
    rep.clauses.append(Clause("(iv) => (iii) (open)", "inconclusive",
                              "instance separates (iv) from (iii)" if separates else "no separation observed",
                              exploratory=True))
    rep.data["separatesOpenQuestion"] = separates
    return rep


def check_class_chain(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """The implication chain between the classes holds on the raw classification verdicts."""
    rep = TheoremReport("4.3-chain", inst)
    cr = classify_module(inst.ideal, inst.module, inst.local_mode, budget, inst.samples, inst.seed)
    rep.hypotheses.extend(cr.hypotheses)
    jac = jacobson_ok(cr.hypotheses[0])
    ara = len(cr.hypotheses) > 1 and cr.hypotheses[1]["status"] == "verified"
    raw = cr.raw or cr.flags
    conflicts = chain_conflicts(raw, jac, ara)
    rep.data = {"flags": {k: v.value for k, v in cr.flags.items()},
                "raw": {k: v.value for k, v in raw.items()}}
    rep.clauses.append(Clause("no stronger-true/weaker-false pair", "fail" if conflicts else "pass",
                              str(conflicts) if conflicts else ""))
    after = chain_conflicts(cr.flags, jac, ara)
    rep.clauses.append(Clause("reported flags monotone", "fail" if after else "pass"))
    return rep


def check_parameter_ideal(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """A Buchsbaum ring is a-relative Buchsbaum for a generated by part of a system of parameters."""
    rep = TheoremReport("4.4", inst)
    M = inst.module
    x = _sequence(inst)
    a = IdealHandle(M.ring, x)
    m = maximal_ideal(M.ring)
    ring_cls = classify_module(m, M, False, budget, inst.samples, inst.seed)
    ok = _require(rep, "ring Buchsbaum", positive(ring_cls.verdict("buchsbaum")),
                  ring_cls.flags["buchsbaum"].route)
    part = M.quotient_by_ideal(a).dimension() == M.dimension() - len(x)
    ok = _require(rep, "x part of a system of parameters", part) and ok
    if not ok:
        return _skip(rep, ["cd(a,R) = ara(a,R) = n", "a-relative Buchsbaum"])
    cert = verify_rsop(x, a, M)
    rep.clauses.append(Clause("cd(a,R) = ara(a,R) = n", "pass" if cert.verified else
                              ("fail" if cert.cd and cert.cd.get("exact") else "inconclusive"),
                              cert.reason or ""))
    cr = classify_module(a, M, inst.local_mode, budget, inst.samples, inst.seed)
    rep.hypotheses.extend(cr.hypotheses)
    rep.data = {"classification": {k: v.value for k, v in cr.flags.items()}}
    b = _verdict_tv(cr.verdict("buchsbaum"))
    rep.clauses.append(implies("a-relative Buchsbaum", "true", b, not jacobson_ok(cr.hypotheses[0])))
    return rep


def check_jacobson_necessity(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """For relative CM modules, an Rs.o.p. that is not a d-sequence forces a outside the Jacobson radical.

    Under the hypothesis every Rs.o.p. of a relative CM module would be a d-sequence, so
    ``data["reproduced"]`` marks instances showing that the hypothesis cannot be dropped.
    """
    rep = TheoremReport("4.5-necessity", inst)
    a, M = inst.ideal, inst.module
    x = _sequence(inst) if inst.sequence is not None else list(a.gens)
    entry = local_mode_status(a, M, inst.local_mode)
    rep.hypotheses.append(entry)
    cd = cohomological_dimension(a, M)
    g = grade(a, M)
    cert = verify_rsop(x, a, M, cd)
    rep.data = {"grade": inf_json(g), "cd": cd.to_json(), "rsop": cert.to_json(), "reproduced": False}
    name = "not a d-sequence => Jacobson hypothesis fails"
    if not _require(rep, "relative Cohen-Macaulay", cd.exact and g == cd.value, f"grade {inf_json(g)}"):
        return _skip(rep, [name])
    if not _require(rep, "sequence is an Rs.o.p.", cert.verified, cert.reason or ""):
        return _skip(rep, [name])
    dr = check_sequence("d-sequence", x, None, M, budget)
    rep.data["dSequence"] = dr.to_json()
    not_d = "true" if dr.verdict == "fails" else "false"
    violated = "true" if entry["status"] == "violated" else "false"
    rep.clauses.append(implies(name, not_d, violated, detail=str(witness_json(dr.witness)) if dr.witness else ""))
    rep.data["reproduced"] = not_d == "true" and violated == "true"
    return rep


def check_two_spot_coincidence(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """If H^i_a vanishes off {grade, cd}, surjective Buchsbaum, Buchsbaum and quasi Buchsbaum coincide."""
    rep = TheoremReport("4.6", inst)
    a, M = inst.ideal, inst.module
    jac = _jacobson(inst, rep)
    ara, cd, _ = _rsop_gate(inst, rep)
    g = grade(a, M)
    ok = ara and _require(rep, "grade < cd", cd.exact and g < cd.value)
    if ok:
        if duality_applies(a, M):
            D = _irrelevant(M)
            van = all(D.vanishes(i) for i in range(D.n + 1) if i not in (g, cd.value))
        else:
            van = False
        ok = _require(rep, "H^i_a = 0 for i not in {grade, cd}", van)
    if not ok:
        return _skip(rep, ["classes coincide"])
    cr = classify_module(a, M, inst.local_mode, budget, inst.samples, inst.seed)
    raw = cr.raw or cr.flags
    vals = [_verdict_tv(raw[k].value) for k in ("surjectiveBuchsbaum", "buchsbaum", "quasiBuchsbaum")]
    rep.data = {"raw": {k: raw[k].value for k in ("surjectiveBuchsbaum", "buchsbaum", "quasiBuchsbaum")}}
    pos = [v for v in vals if v in ("true", "within")]
    neg = [v for v in vals if v == "false"]
    if pos and neg:
        v = "inconclusive" if "within" in pos else "fail"
    elif None in vals:
        v = "inconclusive"
    else:
        v = "pass"
    rep.clauses.append(Clause("classes coincide", v, str(rep.data["raw"]), not jac))
    return rep


def _gamma_annihilated(a, x, M) -> list:
    out = []
    for k in range(len(x)):
        N = M.quotient_by_ideal(IdealHandle(M.ring, x[:k])) if k else M
        G = N.zero_submodule().saturate(IdealHandle(M.ring, [x[k]]))
        out.append(G.ideal_times(a).is_zero())
    return out


def check_gamma_criterion(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """a kills Gamma_<x_{k+1}>(M/<x_1..x_k>M) for all k  =>  x is a-weak and a d-sequence."""
    rep = TheoremReport("4.7", inst)
    a, M = inst.ideal, inst.module
    x = _sequence(inst)
    if not _require(rep, "x in a", all(a.contains(f) for f in x)):
        return _skip(rep, ["=> a-weak", "=> d-sequence"])
    ann = _gamma_annihilated(a, x, M)
    hyp = _tv(all(ann))
    weak, _ = _seq_tv("weak", x, a, M, budget)
    dseq, _ = _seq_tv("d-sequence", x, None, M, budget)
    rep.data = {"gammaAnnihilated": ann, "weak": weak, "dSequence": dseq}
    rep.clauses.append(implies("=> a-weak", hyp, weak))
    rep.clauses.append(implies("=> d-sequence", hyp, dseq))
    return rep


def check_buchsbaum_characterisation(inst: TheoremInstance, budget: Budget) -> TheoremReport:
    """Gamma annihilation for every Rs.o.p. <=> Buchsbaum <=> partial quotients quasi Buchsbaum."""
    rep = TheoremReport("4.8", inst)
    a, M = inst.ideal, inst.module
    jac = _jacobson(inst, rep)
    ara, cd, search = _rsop_gate(inst, rep)
    if not ara:
        return _skip(rep, ["(i) <=> (ii)", "(ii) <=> (iii)"])
    rs = _rsops(inst, cd, search)
    i_vals, iii_vals = [], []
    for r in rs:
        i_vals.append(_tv(all(_gamma_annihilated(a, r.polys, M))))
        for k in range(cd.value):
            Q = M.quotient_by_ideal(IdealHandle(M.ring, r.polys[:k])) if k else M
            q = classify_module(a, Q, inst.local_mode, budget, 2, inst.seed)
            iii_vals.append(_verdict_tv(q.raw.get("quasiBuchsbaum", q.flags["quasiBuchsbaum"]).value
                                        if q.raw else q.verdict("quasiBuchsbaum")))
    i_tv = _all_tv(i_vals)
    iii_tv = _all_tv(iii_vals)
    if i_tv == "true":
        i_tv = "within"
    if iii_tv == "true" and len(rs) > 0:
        iii_tv = "within"
    cr = classify_module(a, M, inst.local_mode, budget, inst.samples, inst.seed)
    ii_tv = _verdict_tv(cr.verdict("buchsbaum"))
    rep.data = {"gamma": i_tv, "buchsbaum": cr.verdict("buchsbaum"), "quotientsQuasi": iii_tv,
                "rsops": [r.sequence for r in rs]}
    rep.clauses.append(equivalent("(i) <=> (ii)", i_tv, ii_tv, not jac))
    rep.clauses.append(equivalent("(ii) <=> (iii)", ii_tv, iii_tv, not jac))
    return rep


VALIDATORS = {
    "2.3B(i)": check_filter_regular_reduction,
    "2.4": check_lambda_gives_weak,
    "2.5": check_socle_injectivity,
    "2.6": check_weak_annihilation,
    "2.7": check_f_generating_sets,
    "3.2": check_lambda_equals_f,
    "3.3": check_rsop_descent,
    "3.5": check_power_weak,
    "3.6": check_localized_cm,
    "4.1": check_quasi_criterion,
    "4.2": check_buchsbaum_criteria,
    "4.3-chain": check_class_chain,
    "4.4": check_parameter_ideal,
    "4.5-necessity": check_jacobson_necessity,
    "4.6": check_two_spot_coincidence,
    "4.7": check_gamma_criterion,
    "4.8": check_buchsbaum_characterisation,
}


def verify_theorem_instance(theorem_id: str, instance: TheoremInstance, budget: Budget | None = None
                            ) -> TheoremReport:
    try:
        fn = VALIDATORS[theorem_id]
    except KeyError:
        raise ValueError(f"unknown theorem id {theorem_id!r}; known: {', '.join(VALIDATORS)}") from None
    return fn(instance, budget or Budget(seed=instance.seed))
