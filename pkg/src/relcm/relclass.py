"""Relative systems of parameters and the relative Cohen-Macaulay/Buchsbaum classes.

A relative system of parameters (Rs.o.p.) of M with respect to a is a list
of cd(a, M) elements x of a with Rad(<x> + Ann M) = Rad(a + Ann M).

Classification verdicts are "true", "false", "inconclusive" or
"true-within-budget".  Each carries the route that produced it.  Implications
between the classes are enforced after the fact: a stronger class asserted
true next to a weaker class asserted false demotes both to inconclusive.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .homological import grade, is_a_times_m_whole
from .ideals import IdealHandle, maximal_ideal
from .koszul import lambda_to_local_cohomology, phi_to_local_cohomology
from .localcohom import (INF, InvariantCertificate, _irrelevant, cohomological_dimension,
                         duality_applies, finiteness_dimension, inf_json, is_irrelevant_on_support)
from .modules import ModulePresentation
from .ring import Poly
from .seqcheck import Budget, FGeneratingSetError, build_f_generating_set, check_sequence, witness_json

TRUE, FALSE, UNKNOWN, WITHIN = "true", "false", "inconclusive", "true-within-budget"
CLASSES = ("relativeCM", "surjectiveBuchsbaum", "buchsbaum", "quasiBuchsbaum", "relativeGenCM")


# -- Rs.o.p. ---------------------------------------------------------------------------

@dataclass
class RsopCertificate:
    sequence: list
    verified: bool
    evidence: list = field(default_factory=list)
    cd: dict | None = None
    reason: str | None = None
    polys: list = field(default_factory=list, repr=False)

    def to_json(self):
        return {"sequence": self.sequence, "verified": self.verified, "cd": self.cd,
                "reason": self.reason, "radicalEvidence": self.evidence}


def _radical_transcript(xs, target: IdealHandle, side: str) -> tuple:
    out, ok = [], True
    for g in xs:
        holds = target.radical_contains(g)
        out.append({"element": str(g), "inRadicalOf": side, "holds": holds})
        ok &= holds
        if not ok:
            break
    return ok, out


def verify_rsop(x: Sequence, a: IdealHandle, M: ModulePresentation,
                cd: InvariantCertificate | None = None) -> RsopCertificate:
    """Certificate that x is an a-Rs.o.p. of M, or a refusal with the reason."""
    ring = M.ring
    xs = [ring.coerce(f) for f in x]
    names = [str(f) for f in xs]
    cd = cd or cohomological_dimension(a, M)
    if not cd.exact:
        return RsopCertificate(names, False, [], cd.to_json(),
                               f"cd only known to lie in [{inf_json(cd.lo)}, {inf_json(cd.hi)}]", xs)
    if len(xs) != cd.value:
        return RsopCertificate(names, False, [], cd.to_json(),
                               f"length {len(xs)} differs from cd = {inf_json(cd.value)}", xs)
    outside = [str(f) for f in xs if not a.contains(f)]
    if outside:
        return RsopCertificate(names, False, [], cd.to_json(), f"not in the ideal: {outside}", xs)
    ann = M.annihilator()
    X = IdealHandle(ring, xs) + ann
    A = a + ann
    ok1, ev1 = _radical_transcript(a.gens, X, "<x> + Ann M")
    ev = ev1
    ok2 = False
    if ok1:
        ok2, ev2 = _radical_transcript(xs, A, "a + Ann M")
        ev = ev1 + ev2
    if ok1 and ok2:
        return RsopCertificate(names, True, ev, cd.to_json(), None, xs)
    return RsopCertificate(names, False, ev, cd.to_json(), "radicals differ", xs)


def _degree_groups(a: IdealHandle):
    groups: dict = {}
    homog = a.is_homogeneous()
    for g in a.gens:
        groups.setdefault(g.degree() if homog else 0, []).append(g)
    return [groups[k] for k in sorted(groups)]


def candidate_sequences(a: IdealHandle, c: int, seed: int = 0, samples: int = 32):
    """Deterministic stream of length-c candidate lists of elements of a."""
    gens = list(a.gens)
    seen = set()

    def fresh(seq):
        key = tuple(sorted(str(f) for f in seq))
        if key in seen or any(f.is_zero() for f in seq):
            return False
        seen.add(key)
        return True

    for sub in itertools.combinations(gens, c):
        if fresh(sub):
            yield list(sub)
    groups = _degree_groups(a)
    diffs = [g - h for grp in groups for g, h in itertools.combinations(grp, 2)]
    for k, sub in enumerate(itertools.combinations(diffs, c)):
        if k >= samples:
            break
        if fresh(sub):
            yield list(sub)
    rng = random.Random(seed)
    ring = a.ring
    for k in range(samples * 4):
        q = 1 + k // 8
        seq = []
        for j in range(c):
            grp = groups[j % len(groups)] if len(groups) > 1 else groups[0]
            f = ring.zero()
            for g in grp:
                f = f + g * ring.const(rng.randint(-q, q))
            seq.append(f)
        if fresh(seq):
            yield seq


@dataclass
class RsopSearch:
    found: RsopCertificate | None
    tried: int
    cd: dict
    ara_upper: float
    note: str = ""

    def to_json(self):
        return {"found": self.found.to_json() if self.found else None, "tried": self.tried,
                "cd": self.cd, "araUpperBound": inf_json(self.ara_upper), "note": self.note}


def search_rsop(a: IdealHandle, M: ModulePresentation, samples: int = 32, seed: int = 0,
                cd: InvariantCertificate | None = None) -> RsopSearch:
    """Look for an Rs.o.p.; exhaustion yields only an upper bound for ara(a, M)."""
    cd = cd or cohomological_dimension(a, M)
    ara_upper = len(a.gens)
    if not cd.exact:
        return RsopSearch(None, 0, cd.to_json(), ara_upper, "cd not certified exactly")
    c = cd.value
    if c == -INF:
        return RsopSearch(None, 0, cd.to_json(), ara_upper, "aM = M")
    if c == 0:
        cert = verify_rsop([], a, M, cd)
        return RsopSearch(cert if cert.verified else None, 1, cd.to_json(), 0 if cert.verified else ara_upper)
    tried = 0
    limit = samples + len(list(itertools.combinations(a.gens, c))) + samples
    for seq in candidate_sequences(a, c, seed, samples):
        tried += 1
        cert = verify_rsop(seq, a, M, cd)
        if cert.verified:
            return RsopSearch(cert, tried, cd.to_json(), c)
        if tried >= limit:
            break
    note = ""
    if ara_upper > c:
        note = "ara(a,M) > cd(a,M) within budget; no Rs.o.p. exists if the inequality is strict"
    return RsopSearch(None, tried, cd.to_json(), ara_upper, note)


def sample_rsops(a: IdealHandle, M: ModulePresentation, cd: InvariantCertificate, samples: int = 8,
                 seed: int = 0) -> list:
    """Up to ``samples`` verified Rs.o.p.'s, deterministic in the seed."""
    if not cd.exact or cd.value in (INF, -INF) or cd.value <= 0:
        return []
    out = []
    budget = samples * 6
    for k, seq in enumerate(candidate_sequences(a, cd.value, seed, samples * 2)):
        if k >= budget or len(out) >= samples:
            break
        cert = verify_rsop(seq, a, M, cd)
        if cert.verified:
            out.append(cert)
    return out


# -- hypotheses ---------------------------------------------------------------------------

def local_mode_status(a: IdealHandle, M: ModulePresentation, local_mode: bool = False) -> dict:
    """Status of the hypothesis that a lies in the Jacobson radical, via the graded-local dictionary."""
    entry = {"hypothesis": "a in Jacobson radical"}
    if local_mode:
        entry.update(status="assumed", detail="local mode requested")
        return entry
    if a.is_homogeneous() and M.graded and is_irrelevant_on_support(a, M):
        entry.update(status="verified (graded-local)",
                     detail="a is homogeneous and Rad(a + Ann M) = Rad(m + Ann M)")
        return entry
    reason = "a has inhomogeneous generators" if not a.is_homogeneous() else \
        "Rad(a + Ann M) differs from Rad(m + Ann M)"
    entry.update(status="violated", detail=reason)
    return entry


def jacobson_ok(entry: dict) -> bool:
    return entry["status"] in ("assumed", "verified (graded-local)")


# -- classification -----------------------------------------------------------------------

@dataclass
class Verdict:
    value: str
    route: str
    evidence: list = field(default_factory=list)
    witness: dict | None = None

    def to_json(self):
        return {"verdict": self.value, "route": self.route, "evidence": self.evidence,
                "witness": self.witness}


@dataclass
class ClassificationReport:
    flags: dict
    hypotheses: list
    invariants: dict
    ledger: list = field(default_factory=list)
    budget: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    def verdict(self, name: str) -> str:
        return self.flags[name].value

    def to_json(self):
        return {"flags": {k: self.flags[k].to_json() for k in CLASSES},
                "hypotheses": self.hypotheses, "invariants": self.invariants,
                "ledger": self.ledger, "budget": self.budget}


def positive(v: str) -> bool:
    return v in (TRUE, WITHIN)


def implication_edges(jac: bool, ara: bool) -> list:
    """(stronger, weaker) pairs that hold under the given hypotheses."""
    edges = [("relativeCM", "surjectiveBuchsbaum"), ("relativeCM", "relativeGenCM"),
             ("buchsbaum", "quasiBuchsbaum"), ("quasiBuchsbaum", "relativeGenCM")]
    if jac and ara:
        edges.append(("surjectiveBuchsbaum", "buchsbaum"))
    closure = set(edges)
    changed = True
    while changed:
        changed = False
        for (p, q), (r, s) in itertools.product(list(closure), list(closure)):
            if q == r and (p, s) not in closure and p != s:
                closure.add((p, s))
                changed = True
    return sorted(closure)


def chain_conflicts(flags: dict, jac: bool, ara: bool) -> list:
    return [(p, q) for p, q in implication_edges(jac, ara)
            if positive(flags[p].value) and flags[q].value == FALSE]


def enforce_chain(flags: dict, jac: bool, ara: bool, ledger: list) -> None:
    for p, q in chain_conflicts(flags, jac, ara):
        ledger.append(f"conflict: {p} = {flags[p].value} but {q} = {flags[q].value}; both demoted")
        for k in (p, q):
            flags[k] = Verdict(UNKNOWN, "demoted-by-implication-chain", flags[k].evidence, flags[k].witness)


def _lambda_window(i: int, D, pad: int = 0):
    sup = D.support(i)
    if sup is None:
        return (0, 0), {}
    lo, hi = sup
    dims = {d: D.dim(i, d) for d in range(lo - pad, hi + pad + 1)}
    return (lo - pad, hi + pad), dims


def classify_module(a: IdealHandle, M: ModulePresentation, local_mode: bool = False,
                    budget: Budget | None = None, samples: int = 8, seed: int = 0,
                    stage_bound: int = 3) -> ClassificationReport:
    budget = budget or Budget(seed=seed)
    hyps, ledger = [], []
    jac_entry = local_mode_status(a, M, local_mode)
    hyps.append(jac_entry)
    jac = jacobson_ok(jac_entry)
    if jac_entry["status"] == "violated":
        ledger.append("Jacobson-radical hypothesis violated: implications that need it "
                      "(surjective Buchsbaum to Buchsbaum, annihilator criterion for quasi Buchsbaum) are not used")
    bj = dict(budget.to_json(), samples=samples, stageBound=stage_bound)

    if is_a_times_m_whole(a, M):
        flags = {k: Verdict(TRUE, "vacuous (aM = M)") for k in ("relativeCM", "relativeGenCM",
                                                                 "surjectiveBuchsbaum")}
        flags["buchsbaum"] = Verdict(UNKNOWN, "ara undefined when aM = M")
        flags["quasiBuchsbaum"] = Verdict(UNKNOWN, "ara undefined when aM = M")
        inv = {"cd": "-inf", "grade": "+inf"}
        return ClassificationReport(flags, hyps, inv, ledger, bj)

    cd = cohomological_dimension(a, M)
    g = grade(a, M)
    inv = {"cd": cd.to_json(), "grade": inf_json(g)}
    f = None
    if cd.hi >= 1:
        f = finiteness_dimension(a, M, cd)
        inv["f_a"] = f.to_json()
    exact_route = duality_applies(a, M)
    D = _irrelevant(M) if exact_route else None

    flags: dict = {}
    # relative Cohen-Macaulay: grade = cd
    if cd.exact:
        flags["relativeCM"] = Verdict(TRUE if g == cd.value else FALSE, "grade-versus-cd",
                                      [f"grade = {g}", f"cd = {inf_json(cd.value)}"])
    elif g == cd.hi:
        flags["relativeCM"] = Verdict(TRUE, "grade-equals-cd-upper-bound", [f"grade = {g}"])
    elif g < cd.lo:
        flags["relativeCM"] = Verdict(FALSE, "grade-below-cd-lower-bound", [f"grade = {g}"])
    else:
        flags["relativeCM"] = Verdict(UNKNOWN, "cd-interval", [cd.to_json()])

    # relative generalized Cohen-Macaulay: cd <= 0 or cd = f_a
    if cd.hi <= 0:
        flags["relativeGenCM"] = Verdict(TRUE, "cd-at-most-zero", [f"cd <= {inf_json(cd.hi)}"])
    elif flags["relativeCM"].value == TRUE:
        flags["relativeGenCM"] = Verdict(TRUE, "relative-CM", ["H^i vanishes below cd"])
    elif cd.exact and f is not None and f.exact:
        val = TRUE if f.value == cd.value else FALSE
        flags["relativeGenCM"] = Verdict(val, "cd-versus-finiteness-dimension",
                                         [f"cd = {cd.value}", f"f_a = {f.value}"])
    elif f is not None and cd.lo > f.hi:
        flags["relativeGenCM"] = Verdict(FALSE, "finiteness-dimension-below-cd",
                                         [f"f_a <= {f.hi}", f"cd >= {cd.lo}"])
    else:
        flags["relativeGenCM"] = Verdict(UNKNOWN, "invariant-intervals")

    # Rs.o.p. and the ara = cd gate
    search = search_rsop(a, M, samples=32, seed=seed, cd=cd)
    ara_ok = search.found is not None
    hyps.append({"hypothesis": "ara = cd", "status": "verified" if ara_ok else "unverified within budget",
                 "detail": search.found.sequence if ara_ok else search.note or "no Rs.o.p. found"})
    inv["rsop"] = search.to_json()
    c = cd.value if cd.exact else None
    rsops = sample_rsops(a, M, cd, samples, seed) if ara_ok else []
    if ara_ok and not any(r.sequence == search.found.sequence for r in rsops):
        rsops.insert(0, search.found)

    # annihilation a H^i = 0 below cd (exact only through duality)
    ann_ok = None
    if exact_route and c is not None and c >= 0:
        ann_ok = all(D.annihilated_by(i, a) for i in range(c))
        inv["annihilatedBelowCd"] = ann_ok

    # quasi Buchsbaum
    flags["quasiBuchsbaum"] = _classify_quasi(a, M, c, ara_ok, jac, ann_ok, rsops, flags, budget)

    # Buchsbaum
    lam = None
    if ara_ok and c is not None and c >= 1 and exact_route and a.is_homogeneous() and flags["relativeGenCM"].value == TRUE:
        lam = _lambda_over_f_generating_set(a, M, c, D, seed, budget, stage_bound)
        inv["lambda"] = lam
    flags["buchsbaum"] = _classify_buchsbaum(a, M, c, ara_ok, jac, rsops, flags, lam, budget)

    # surjective Buchsbaum
    flags["surjectiveBuchsbaum"] = _classify_surjective(a, M, c, D, flags, lam, stage_bound, exact_route)

    raw = {k: Verdict(v.value, v.route, list(v.evidence), v.witness) for k, v in flags.items()}
    _coincidence_check(a, M, c, g, D, jac, ara_ok, flags, ledger)
    enforce_chain(flags, jac, ara_ok, ledger)
    return ClassificationReport(flags, hyps, inv, ledger, bj, raw)


def _classify_quasi(a, M, c, ara_ok, jac, ann_ok, rsops, flags, budget) -> Verdict:
    if flags["relativeGenCM"].value == FALSE:
        return Verdict(FALSE, "not-generalized-CM", ["quasi Buchsbaum implies generalized CM"])
    if c is not None and c <= 0 and ara_ok:
        return Verdict(TRUE, "cd-at-most-zero", ["no Rs.o.p. condition to check"])
    if ann_ok is False:
        return Verdict(FALSE, "annihilator-criterion", ["a H^i_a(M) != 0 for some i < cd"])
    # definitional sampling over squares of Rs.o.p.'s
    for cert in rsops:
        sq = [f * f for f in cert.polys]
        rep = check_sequence("weak", sq, a, M, budget)
        if rep.verdict == "fails":
            return Verdict(FALSE, "rsop-in-a2-not-weak", [f"Rs.o.p. {[str(s) for s in sq]}"],
                           witness_json(rep.witness))
    if not ara_ok:
        return Verdict(UNKNOWN, "ara-cd-unverified")
    if ann_ok and jac:
        return Verdict(TRUE, "annihilator-criterion", ["a H^i_a(M) = 0 for all i < cd",
                                                       f"{len(rsops)} sampled Rs.o.p.'s in a^2 are a-weak"])
    return Verdict(WITHIN, "sampled-rsops-in-a2", [f"{len(rsops)} sampled Rs.o.p.'s in a^2 are a-weak"])


def _lambda_over_f_generating_set(a, M, c, D, seed, budget, stage_bound) -> dict:
    try:
        ys, rep = build_f_generating_set(a, M, seed=seed, budget=budget)
    except FGeneratingSetError as exc:
        return {"status": "no-f-generating-set", "detail": str(exc)}
    out = {"fGeneratingSet": [str(y) for y in ys], "fCheck": rep.verdict, "maps": []}
    for i in range(c):
        if i == 0:
            r = lambda_to_local_cohomology(0, ys, M)
        else:
            window, dims = _lambda_window(i, D)
            r = lambda_to_local_cohomology(i, ys, M, stage_bound, window, dims)
        out["maps"].append(r.to_json())
    verdicts = [m["verdict"] for m in out["maps"]]
    if any(v == "not-surjective" for v in verdicts):
        out["status"] = "not-surjective"
    elif all(v in ("surjective", "surjective-within-bounds") for v in verdicts):
        out["status"] = "surjective-within-bounds"
    else:
        out["status"] = "inconclusive"
    return out


def _classify_buchsbaum(a, M, c, ara_ok, jac, rsops, flags, lam, budget) -> Verdict:
    for cert in rsops:
        rep = check_sequence("d-sequence", cert.polys, a, M, budget)
        if rep.verdict == "fails":
            return Verdict(FALSE, "rsop-not-d-sequence",
                           [f"Rs.o.p. {cert.sequence} is not a d-sequence, so not u.s.d"],
                           witness_json(rep.witness))
        rep = check_sequence("weak", cert.polys, a, M, budget)
        if rep.verdict == "fails":
            return Verdict(FALSE, "rsop-not-weak", [f"Rs.o.p. {cert.sequence} is not a-weak"],
                           witness_json(rep.witness))
    if flags["quasiBuchsbaum"].value == FALSE:
        return Verdict(FALSE, "not-quasi-Buchsbaum", ["Buchsbaum implies quasi Buchsbaum"],
                       flags["quasiBuchsbaum"].witness)
    if not ara_ok:
        return Verdict(UNKNOWN, "ara-cd-unverified")
    if c is not None and c <= 0:
        return Verdict(TRUE, "cd-at-most-zero")
    if jac and flags["relativeCM"].value == TRUE:
        return Verdict(TRUE, "relative-CM-under-Jacobson",
                       ["relative CM gives surjective Buchsbaum", "which gives Buchsbaum when ara = cd"])
    if lam is not None and lam.get("status") == "surjective-within-bounds" and jac:
        return Verdict(WITHIN, "lambda-surjective-on-f-generating-set",
                       [f"f-generating set {lam['fGeneratingSet']}",
                        f"{len(rsops)} sampled Rs.o.p.'s are a-weak d-sequences"])
    return Verdict(WITHIN if rsops else UNKNOWN, "sampled-rsops",
                   [f"{len(rsops)} sampled Rs.o.p.'s are a-weak"])


def _classify_surjective(a, M, c, D, flags, lam, stage_bound, exact_route) -> Verdict:
    if flags["relativeCM"].value == TRUE:
        return Verdict(TRUE, "relative-CM", ["H^i_a(M) = 0 for i < cd"])
    if c is None:
        return Verdict(UNKNOWN, "cd-interval")
    if lam is not None and lam.get("status") == "not-surjective":
        return Verdict(FALSE, "lambda-not-surjective", ["Ext^i(S/a, M) -> H^i_a(M) factors through lambda"])
    if not exact_route or not a.is_homogeneous():
        return Verdict(UNKNOWN, "no-exact-target")
    if flags["relativeGenCM"].value != TRUE:
        return Verdict(UNKNOWN, "local-cohomology-not-finite-length")
    maps = []
    for i in range(c):
        if i == 0:
            ok = grade(a, M) > 0 or _lambda_zero_exact(a, M)
            maps.append({"index": 0, "verdict": "surjective" if ok else "not-surjective",
                         "route": "ext0-equals-torsion"})
            continue
        window, dims = _lambda_window(i, D)
        maps.append(phi_to_local_cohomology(i, list(a.gens), M, stage_bound, window, dims).to_json())
    vs = [m["verdict"] for m in maps]
    if "not-surjective" in vs:
        bad = next(m for m in maps if m["verdict"] == "not-surjective")
        return Verdict(FALSE, "ext-image-deficit", maps, bad.get("witness"))
    return Verdict(WITHIN, "ext-image-at-stage-bound", maps)


def _lambda_zero_exact(a, M) -> bool:
    """Hom(S/a, M) = 0 :_M a equals Gamma_a(M)."""
    z = M.zero_submodule()
    return z.saturate(a).issubset(z.colon_ideal(a))


def _coincidence_check(a, M, c, g, D, jac, ara_ok, flags, ledger):
    """When H^i vanishes off {grade, cd}, the three Buchsbaum-type classes agree."""
    if D is None or c is None or not (jac and ara_ok) or not g < c:
        return
    if any(not D.vanishes(i) for i in range(D.n + 1) if i not in (g, c)):
        return
    names = ("surjectiveBuchsbaum", "buchsbaum", "quasiBuchsbaum")
    vals = {flags[k].value for k in names}
    if TRUE in vals | {WITHIN} and FALSE in vals:
        ledger.append("cohomology vanishes off {grade, cd} but the Buchsbaum-type classes disagree")
        for k in names:
            flags[k] = Verdict(UNKNOWN, "demoted-by-coincidence", flags[k].evidence, flags[k].witness)
