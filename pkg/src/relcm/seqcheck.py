"""Decision procedures for regular, filter-regular, weak and d-sequences.

Every check evaluates the defining colon containments literally.  Variants
that quantify over all exponents or all orders are evaluated over a budget
(exponents up to B, all permutations up to a size threshold, seeded samples
beyond) and never report more than "holds-within-budget".
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from typing import Sequence

from .ideals import IdealHandle
from .modules import ModulePresentation, Submodule, vec_str
from .ring import Poly

KINDS = ("regular", "filter-regular", "weak", "d-sequence", "strong-d", "unconditioned-weak", "usd",
         "unconditioned-filter-regular")
ALIASES = {"d": "d-sequence", "filter": "filter-regular", "fr": "filter-regular",
           "uw": "unconditioned-weak", "ufr": "unconditioned-filter-regular", "strong": "strong-d"}
EXACT_KINDS = ("regular", "filter-regular", "weak", "d-sequence")
PERMUTATION_LIMIT = 5
DEFAULT_SAMPLES = 24


def default_budget() -> int:
    return int(os.environ.get("RELCM_BUDGET_B", "3"))


@dataclass
class Budget:
    B: int = field(default_factory=default_budget)
    perm_limit: int = PERMUTATION_LIMIT
    samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def to_json(self):
        return {"B": self.B, "permLimit": self.perm_limit, "samples": self.samples, "seed": self.seed}


@dataclass
class SequenceReport:
    kind: str
    sequence: list
    verdict: str  # holds / fails / holds-within-budget
    witness: dict | None = None
    budget: dict | None = None
    checks: int = 0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict != "fails"

    def to_json(self):
        return {"kind": self.kind, "sequence": self.sequence, "verdict": self.verdict,
                "route": "colon-containment", "witness": witness_json(self.witness), "budget": self.budget,
                "checks": self.checks, "notes": self.notes}


class ColonCache:
    """Memoised submodules <x_1..x_k> M and colons of them, keyed by generator sets."""

    def __init__(self, M: ModulePresentation):
        self.M = M
        self._sub: dict = {}
        self._colon: dict = {}

    def sub(self, xs) -> Submodule:
        key = frozenset(xs)
        N = self._sub.get(key)
        if N is None:
            if not xs:
                N = self.M.zero_submodule()
            else:
                N = self.M.ideal_times(IdealHandle(self.M.ring, list(xs)))
            self._sub[key] = N
        return N

    def colon(self, xs, f) -> Submodule:
        key = (frozenset(xs), "elt", f)
        out = self._colon.get(key)
        if out is None:
            out = self._colon[key] = self.sub(xs).colon(f)
        return out

    def colon_ideal(self, xs, a: IdealHandle) -> Submodule:
        key = (frozenset(xs), "ideal", tuple(a.gens))
        out = self._colon.get(key)
        if out is None:
            out = self._colon[key] = self.sub(xs).colon_ideal(a)
        return out

    def saturate(self, xs, a: IdealHandle) -> Submodule:
        key = (frozenset(xs), "sat", tuple(a.gens))
        out = self._colon.get(key)
        if out is None:
            out = self._colon[key] = self.sub(xs).saturate(a)
        return out


def _cache_for(M: ModulePresentation) -> ColonCache:
    c = getattr(M, "_colon_cache", None)
    if c is None:
        c = M._colon_cache = ColonCache(M)
    return c


def _best_witness(lhs: Submodule, rhs: Submodule):
    """Simplest generator of lhs outside rhs, reduced modulo rhs."""
    best = None
    for g in lhs.gens:
        if rhs.contains(g):
            continue
        r = rhs.reduce(g)
        cand = r if r else g
        size = (len(cand), sorted(e for _, e in cand))
        if best is None or size < best[0]:
            best = (size, cand)
    return None if best is None else best[1]


# -- single-order checks ---------------------------------------------------------------

def _step_fails(kind, xs, i, a, M, cache: ColonCache):
    """Checks step i (0-based) of an exact kind; returns a witness dict or None."""
    prefix = xs[:i]
    f = xs[i]
    ring = M.ring
    if kind in ("regular", "filter-regular", "weak"):
        lhs = cache.colon(prefix, f)
        if kind == "regular":
            rhs = cache.sub(prefix)
            rhs_name = "<x_<i>M"
        elif kind == "filter-regular":
            rhs = cache.saturate(prefix, a)
            rhs_name = "<x_<i>M : a^inf"
        else:
            rhs = cache.colon_ideal(prefix, a)
            rhs_name = "<x_<i>M : a"
        w = _best_witness(lhs, rhs)
        if w is None:
            return None
        return {"i": i + 1, "element": vec_str(w, ring, M.rank), "lhs": "<x_<i>M : x_i",
                "rhs": rhs_name, "_vec": w}
    raise ValueError(kind)


def _d_fails(xs, M, cache: ColonCache):
    r = len(xs)
    ring = M.ring
    for i in range(r):
        prefix = xs[:i]
        for j in range(i, r):
            lhs = cache.colon(prefix, xs[i] * xs[j])
            rhs = cache.colon(prefix, xs[j])
            w = _best_witness(lhs, rhs)
            if w is not None:
                return {"i": i + 1, "j": j + 1, "element": vec_str(w, ring, M.rank),
                        "lhs": "<x_<i>M : x_i x_j", "rhs": "<x_<i>M : x_j", "_vec": w}
    return None


def _exact_check(kind, xs, a, M, cache):
    """(witness or None, number of containments checked)."""
    if kind == "d-sequence":
        return _d_fails(xs, M, cache)
    for i in range(len(xs)):
        w = _step_fails(kind, xs, i, a, M, cache)
        if w is not None:
            return w
    if kind == "regular" and xs and cache.sub(xs).is_whole():
        return {"i": len(xs), "element": None, "lhs": "M", "rhs": "<x>M",
                "reason": "final quotient is zero", "_vec": None}
    return None


def _orders(r: int, budget: Budget):
    if r <= budget.perm_limit:
        return list(itertools.permutations(range(r))), "all"
    rng = random.Random(budget.seed)
    seen = {tuple(range(r))}
    out = [tuple(range(r))]
    while len(out) < budget.samples:
        p = list(range(r))
        rng.shuffle(p)
        if tuple(p) not in seen:
            seen.add(tuple(p))
            out.append(tuple(p))
    return out, "sampled"


def check_sequence(kind: str, x: Sequence, a: IdealHandle | None, M: ModulePresentation,
                   budget: Budget | None = None) -> SequenceReport:
    """Decide the sequence property ``kind`` of x on M relative to a."""
    kind = ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown sequence kind {kind!r}")
    budget = budget or Budget()
    ring = M.ring
    xs = [ring.coerce(f) for f in x]
    names = [str(f) for f in xs]
    if kind in ("filter-regular", "weak", "unconditioned-weak", "unconditioned-filter-regular"):
        if a is None or not a.gens or a.is_unit():
            raise ValueError(f"{kind} needs a nonzero proper ideal")
    cache = _cache_for(M)
    if kind in EXACT_KINDS:
        w = _exact_check(kind, xs, a, M, cache)
        if w is None:
            return SequenceReport(kind, names, "holds", None, None, len(xs))
        return SequenceReport(kind, names, "fails", _public(w, order=None, exps=None), None, len(xs))
    base = {"strong-d": "d-sequence", "usd": "d-sequence", "unconditioned-weak": "weak",
            "unconditioned-filter-regular": "filter-regular"}[kind]
    use_exps = kind in ("strong-d", "usd", "unconditioned-weak")
    permute = kind in ("usd", "unconditioned-weak", "unconditioned-filter-regular")
    orders, mode = _orders(len(xs), budget) if permute else ([tuple(range(len(xs)))], "identity")
    exps_list = list(itertools.product(range(1, budget.B + 1), repeat=len(xs))) if use_exps else [None]
    bj = budget.to_json()
    bj.update({"orders": mode, "orderCount": len(orders), "exponentVectors": len(exps_list)})
    checks = 0
    for order in orders:
        for exps in exps_list:
            seq = [xs[k] ** (exps[k] if exps else 1) for k in order]
            checks += 1
            w = _exact_check(base, seq, a, M, cache)
            if w is not None:
                return SequenceReport(kind, names, "fails",
                                      _public(w, order=[k + 1 for k in order], exps=exps), bj, checks)
    return SequenceReport(kind, names, "holds-within-budget", None, bj, checks)


def _public(w: dict, order, exps) -> dict:
    out = {k: v for k, v in w.items() if not k.startswith("_")}
    if order is not None:
        out["order"] = order
    if exps is not None:
        out["exponents"] = list(exps)
    out["_vec"] = w.get("_vec")
    return out


def witness_json(w: dict | None):
    if w is None:
        return None
    return {k: v for k, v in w.items() if not k.startswith("_")}


def replay_witness(report: SequenceReport, x: Sequence, a: IdealHandle | None, M: ModulePresentation) -> bool:
    """Re-run the single failing containment from scratch; True when it fails again."""
    w = report.witness
    if w is None:
        raise ValueError("nothing to replay")
    ring = M.ring
    xs = [ring.coerce(f) for f in x]
    if "order" in w:
        exps = w.get("exponents") or [1] * len(xs)
        xs = [xs[k - 1] ** exps[k - 1] for k in w["order"]]
    i = w["i"] - 1
    prefix = xs[:i]
    N = M.ideal_times(IdealHandle(ring, prefix)) if prefix else M.zero_submodule()
    v = w.get("_vec")
    if w.get("reason") == "final quotient is zero":
        return M.ideal_times(IdealHandle(ring, xs)).is_whole()
    if "j" in w:
        j = w["j"] - 1
        lhs, rhs = N.colon(xs[i] * xs[j]), N.colon(xs[j])
    else:
        lhs = N.colon(xs[i])
        kind = {"<x_<i>M": "regular", "<x_<i>M : a^inf": "filter-regular", "<x_<i>M : a": "weak"}[w["rhs"]]
        rhs = N if kind == "regular" else N.saturate(a) if kind == "filter-regular" else N.colon_ideal(a)
    return lhs.contains(v) and not rhs.contains(v)


# -- f-generating sets ------------------------------------------------------------------

class FGeneratingSetError(RuntimeError):
    pass


def _combination(gens: Sequence[Poly], coeffs) -> Poly:
    ring = gens[0].ring
    out = ring.zero()
    for c, g in zip(coeffs, gens):
        if c:
            out = out + g * ring.const(c)
    return out


def _generates(ys, a: IdealHandle) -> bool:
    J = IdealHandle(a.ring, ys)
    return all(a.contains(y) for y in ys) and all(J.contains(g) for g in a.gens)


def _sparse_candidates(gens, groups, size, homog):
    """Sets y_k = g_k + c g_(k+s) within a degree group, for small shifts and coefficients."""
    def grp_of(g):
        return groups[g.degree() if homog else 0]
    for c in (1, -1, 2):
        for s in range(1, len(gens)):
            ys = []
            for k in range(size):
                g = gens[k % len(gens)]
                grp = grp_of(g)
                j = grp.index(g)
                h = grp[(j + s) % len(grp)] if len(grp) > 1 else None
                y = g if h is None or h is g else g + h * g.ring.const(c)
                if k >= len(gens):
                    y = y + grp[(j + s + 1) % len(grp)]
                ys.append(y)
            yield ys


def _single_elements_ok(ys, a, M, cache) -> bool:
    return all(_step_fails("filter-regular", [y], 0, a, M, cache) is None for y in ys)


def build_f_generating_set(a: IdealHandle, M: ModulePresentation, min_size: int = 0, seed: int = 0,
                           budget: Budget | None = None, attempts: int = 40):
    """Generators of a forming an unconditioned a-filter-regular sequence on M.

    Tries the generators themselves, then sparse sums g_k + c g_(k+s), then
    seeded combinations of generators of equal degree with coefficients from
    {0..q}, q growing with the attempt number.  Every candidate is verified
    before it is returned.
    """
    if not a.gens or a.is_unit():
        raise ValueError("need a nonzero proper ideal")
    budget = budget or Budget(seed=seed)
    gens = list(a.gens)
    size = max(min_size, len(gens))
    rng = random.Random(seed)
    homog = a.is_homogeneous()
    groups: dict = {}
    for g in gens:
        groups.setdefault(g.degree() if homog else 0, []).append(g)
    cache = _cache_for(M)

    def random_candidates():
        for attempt in range(attempts):
            q = 1 + attempt // 4
            ys = []
            keys = sorted(groups)
            for k in range(size):
                grp = groups[keys[k % len(keys)]] if k >= len(gens) else \
                    groups[gens[k].degree() if homog else 0]
                coeffs = [rng.randint(0, q) for _ in grp]
                if not any(coeffs):
                    coeffs[rng.randrange(len(grp))] = 1
                ys.append(_combination(grp, coeffs))
            yield ys

    first = [gens] if size == len(gens) else []
    sparse = _sparse_candidates(gens, groups, size, homog) if seed == 0 else iter(())
    for ys in itertools.chain(first, sparse, random_candidates()):
        if any(y.is_zero() for y in ys) or not _generates(ys, a):
            continue
        if not _single_elements_ok(ys, a, M, cache):
            continue
        rep = check_sequence("unconditioned-filter-regular", ys, a, M, budget)
        if rep.verdict != "fails":
            return ys, rep
    raise FGeneratingSetError(f"no f-generating set found in {attempts} attempts")
