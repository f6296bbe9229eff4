"""Seeded random instances for the property sweeps and the demos.

Everything here is deterministic in ``seed``: the same call always yields the
same rings, modules and sequences, so sweeps can be replayed and compared.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ideals import IdealHandle, maximal_ideal
from .modules import ModuleMap, ModulePresentation, basis_vector, vec_mul
from .ring import Poly, RingContext
from .seqcheck import check_sequence

VARIABLES = ("x", "y", "z")


def random_monomial(ring: RingContext, rng: random.Random, degree: int) -> Poly:
    f = ring.one()
    for _ in range(degree):
        f = f * ring.var(rng.choice(ring.variables))
    return f


def random_form(ring: RingContext, rng: random.Random, degree: int, terms: int = 2) -> Poly:
    """A homogeneous form with a few monomials and small nonzero coefficients."""
    f = ring.zero()
    for _ in range(terms):
        c = rng.choice((1, 1, 2, -1)) if ring.characteristic != 2 else 1
        f = f + ring.coerce(c) * random_monomial(ring, rng, degree)
    return f if not f.is_zero() else random_monomial(ring, rng, degree)


def random_monomial_ideal(ring: RingContext, rng: random.Random, ngens: int, maxdeg: int = 3) -> list:
    out = []
    for _ in range(ngens):
        f = random_monomial(ring, rng, rng.randint(1, maxdeg))
        if all(str(f) != str(g) for g in out):
            out.append(f)
    return out


def _ring(rng: random.Random, nvars: int | None = None, char: int | None = None) -> RingContext:
    nvars = nvars or rng.choice((1, 2, 2, 3, 3, 3))
    char = rng.choice((0, 2)) if char is None else char
    return RingContext(list(VARIABLES[:nvars]), char)


# -- Koszul instances -------------------------------------------------------------------

@dataclass
class KoszulInstance:
    label: str
    module: ModulePresentation
    sequence: list
    ses: tuple | None = None  # (f, g) for 0 -> L -f-> M -g-> N -> 0

    def __repr__(self):
        return f"KoszulInstance({self.label})"


def _ideal_gens(ring, rng):
    kind = rng.random()
    if kind < 0.15:
        return []
    gens = random_monomial_ideal(ring, rng, rng.randint(1, 3))
    if kind > 0.8 and ring.n >= 2:
        d = rng.randint(2, 3)
        b = random_monomial(ring, rng, d) - random_monomial(ring, rng, d)
        if not b.is_zero():
            gens.append(b)
    return gens


def koszul_instances(count: int = 56, seed: int = 0) -> list:
    """Graded modules in at most three variables over GF(2) and QQ with short sequences.

    Cyclic instances also carry the short exact sequence
    0 -> S/(I : f)(-deg f) -> S/I -> S/(I + f) -> 0 for a random form f.
    """
    rng = random.Random(seed)
    out = []
    for k in range(count):
        ring = _ring(rng, char=(2 if k % 2 else 0))
        gens = _ideal_gens(ring, rng)
        M = ModulePresentation.cyclic(ring, gens)
        if rng.random() < 0.15:
            extra = _ideal_gens(ring, rng)
            M = M.direct_sum(ModulePresentation.cyclic(ring, extra, 1))
        length = rng.randint(1, min(3, ring.n + 1))
        x = []
        for _ in range(length):
            d = rng.randint(1, 2)
            x.append(random_form(ring, rng, d, rng.randint(1, 2)) if rng.random() < 0.5
                     else random_monomial(ring, rng, d))
        ses = None
        if M.rank == 1:
            f = random_monomial(ring, rng, rng.randint(1, 2))
            I = IdealHandle(ring, gens)
            L = ModulePresentation.cyclic(ring, I.colon(f), f.degree())
            N = ModulePresentation.cyclic(ring, gens + [f])
            e = basis_vector(ring, 0)
            ses = (ModuleMap(L, M, [vec_mul(f, e)]), ModuleMap(M, N, [e]))
        label = (f"{ring.describe()} M={M.describe()} x=({', '.join(str(g) for g in x)})")
        out.append(KoszulInstance(label, M, x, ses))
    return out


# -- weak-sequence / annihilation instances ------------------------------------------------

@dataclass
class WeakInstance:
    label: str
    ideal: IdealHandle
    module: ModulePresentation
    sequence: list
    ell: int

    def __repr__(self):
        return f"WeakInstance({self.label})"


def _m_primary(ring: RingContext, rng: random.Random) -> IdealHandle:
    if rng.random() < 0.5:
        return maximal_ideal(ring)
    gens = [ring.var(v) ** rng.randint(1, 2) for v in ring.variables]
    if ring.n >= 2 and rng.random() < 0.5:
        gens.append(random_monomial(ring, rng, 2))
    return IdealHandle(ring, gens)


def weak_annihilation_instances(count: int = 32, seed: int = 0) -> list:
    """Monomial instances with a = m or an m-primary monomial ideal and x inside a^(2l), l in {1, 2}."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        ring = _ring(rng, nvars=rng.randint(2, 3), char=(2 if k % 3 == 2 else 0))
        a = _m_primary(ring, rng)
        ell = 1 if k % 2 == 0 else 2
        gens = random_monomial_ideal(ring, rng, rng.randint(0, 2), 3)
        M = ModulePresentation.cyclic(ring, gens)
        x = []
        for _ in range(rng.randint(1, 2)):
            f = ring.one()
            for _ in range(2 * ell):
                f = f * rng.choice(a.gens)
            if rng.random() < 0.3:
                f = f * ring.var(rng.choice(ring.variables))
            x.append(f)
        label = f"{ring.describe()} a={a} M={M.describe()} l={ell} x=({', '.join(str(g) for g in x)})"
        out.append(WeakInstance(label, a, M, x, ell))
    return out


# -- filter-regular instances ------------------------------------------------------------

@dataclass
class FilterRegularInstance:
    label: str
    ideal: IdealHandle
    module: ModulePresentation
    sequence: list

    def __repr__(self):
        return f"FilterRegularInstance({self.label})"


def filter_regular_instances(count: int = 12, seed: int = 0, max_tries: int = 40) -> list:
    """Instances (m, S/I, x) where x is verified m-filter regular of length at least 1."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        ring = _ring(rng, nvars=rng.randint(2, 3))
        a = maximal_ideal(ring)
        M = ModulePresentation.cyclic(ring, random_monomial_ideal(ring, rng, rng.randint(0, 2), 3))
        for _ in range(max_tries):
            r = rng.randint(1, 2)
            x = [random_form(ring, rng, 1, rng.randint(1, 3)) for _ in range(r)]
            if check_sequence("filter-regular", x, a, M).verdict == "holds":
                label = f"{ring.describe()} M={M.describe()} x=({', '.join(str(g) for g in x)})"
                out.append(FilterRegularInstance(label, a, M, x))
                break
    return out
