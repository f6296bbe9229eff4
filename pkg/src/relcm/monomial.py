"""Monomial ideals: irreducible decomposition and associated primes."""

from __future__ import annotations

from .ideals import IdealHandle


def _minimalize(gens):
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def irreducible_components(exps, n):
    """Irreducible components of the monomial ideal with minimal generators ``exps``.

    Each component is returned as a dict ``{variable index: power}``
    standing for the ideal generated by those pure powers.
    """
    exps = _minimalize(exps)
    if any(sum(e) == 0 for e in exps):
        return []
    for g in exps:
        support = [i for i, a in enumerate(g) if a]
        if len(support) > 1:
            i = support[0]
            pure = tuple(g[i] if k == i else 0 for k in range(n))
            rest = tuple(0 if k == i else g[k] for k in range(n))
            others = [e for e in exps if e != g]
            return (irreducible_components(others + [pure], n)
                    + irreducible_components(others + [rest], n))
    comp = {}
    for g in exps:
        i = next(k for k, a in enumerate(g) if a)
        comp[i] = min(comp.get(i, g[i]), g[i])
    return [comp]


def _irredundant(comps):
    comps = [tuple(sorted(c.items())) for c in comps]
    comps = list(dict.fromkeys(comps))

    def contains(c1, c2):
        # ideal c1 contains ideal c2: every pure power of c2 lies in c1
        d1 = dict(c1)
        return all(i in d1 and d1[i] <= a for i, a in c2)

    out = []
    for c in comps:
        if any(d != c and contains(c, d) for d in comps):
            continue
        out.append(c)
    return out


def associated_primes_monomial(I: IdealHandle) -> list:
    """Ass(S/I) for a monomial ideal I, as ideals generated by variables."""
    if not I.is_monomial():
        raise ValueError("associated_primes_monomial needs monomial generators")
    if I.ring.is_quotient():
        raise ValueError("monomial associated primes are computed over a polynomial ring")
    ring = I.ring
    comps = _irredundant(irreducible_components([g.lead_exp() for g in I.gens], ring.n))
    primes = sorted({tuple(i for i, _ in c) for c in comps}, key=lambda s: (len(s), s))
    gens = ring.gens
    return [IdealHandle(ring, [gens[i] for i in s]) for s in primes]


def monomial_components(I: IdealHandle) -> list:
    """Irredundant irreducible components of a monomial ideal as IdealHandles."""
    ring = I.ring
    comps = _irredundant(irreducible_components([g.lead_exp() for g in I.gens], ring.n))
    gens = ring.gens
    return [IdealHandle(ring, [gens[i] ** a for i, a in c]) for c in comps]
