"""Naive reference implementations and fixtures shared by the tests."""

import itertools
import random

from compstruct.composite import UniformFamily, compose, glue_iso
from compstruct.core import (
    FinitePresentation,
    LazyIso,
    brute_force_isomorphisms,
    encode_pair,
    restrict_to_elements,
    restrict_to_finite,
)
from compstruct.structures import DIGRAPH_SIG, finite_digraph


def naive_isomorphisms(f1: FinitePresentation, f2: FinitePresentation) -> list[dict[int, int]]:
    """Try every bijection; keep those mapping the fact set exactly onto the other."""
    if len(f1.elements) != len(f2.elements):
        return []
    src = sorted(f1.elements)
    want = {(s.family, s.index, t) for s, t in f2.facts}
    out = []
    for image in itertools.permutations(sorted(f2.elements)):
        m = dict(zip(src, image))
        got = {(s.family, s.index, tuple(m[c] for c in t)) for s, t in f1.facts}
        if got == want:
            out.append(m)
    return out


def as_key_set(maps) -> set:
    return {tuple(sorted(m.items())) for m in maps}


def generator_closure_sort(x, window, horizon):
    """Topologically sort ``window`` under the transitive closure of the generating relations.

    Generators, over the codes 0..horizon: 2m < 2m+2, and for each n,
    2*x(n) < 2n+1 < 2*x(n)+2.  The closure is computed by Warshall's
    algorithm; the sort must be forced (one minimal element at each step).
    """
    nodes = range(horizon + 1)
    less = {(a, b): False for a in nodes for b in nodes}
    for m in range(0, horizon - 1, 2):
        less[(m, m + 2)] = True
    for n in range((horizon - 1) // 2 + 1):
        odd, lo = 2 * n + 1, 2 * x(n)
        if odd <= horizon and lo + 2 <= horizon:
            less[(lo, odd)] = less[(odd, lo + 2)] = True
    for k in nodes:
        for a in nodes:
            if less[(a, k)]:
                for b in nodes:
                    if less[(k, b)]:
                        less[(a, b)] = True
    remaining, out = set(window), []
    while remaining:
        minimal = [a for a in remaining if not any(less[(b, a)] for b in remaining if b != a)]
        assert len(minimal) == 1, f"order not forced at {sorted(remaining)}: {minimal}"
        out.append(minimal[0])
        remaining.remove(minimal[0])
    return out


def random_finite_composite(rng: random.Random, n_base: int, max_comp: int):
    edges = {(rng.randrange(n_base), rng.randrange(n_base)) for _ in range(rng.randrange(n_base * 2))}
    base = finite_digraph(range(n_base), edges, "S")
    comps = {}
    for x in range(n_base):
        m = rng.randint(1, max_comp)
        ce = {(rng.randrange(m), rng.randrange(m)) for _ in range(rng.randrange(m + 1))}
        comps[x] = finite_digraph(range(m), ce, f"A{x}")
    fam = UniformFamily(DIGRAPH_SIG, comps.__getitem__, lambda x: x in comps, "A")
    return compose(base, fam), comps


def full_truncation(c):
    n = len(list(c.base.enumerate()))
    return restrict_to_elements(c, c.window(range(n), 100), c.signature.all_symbols())


def as_finite(p, n):
    return restrict_to_finite(p, n, p.signature.all_symbols())


def glued_isomorphisms(c1, c2):
    """Every theta u psi_x with theta a base iso and psi_x component isos, as finite maps."""
    n = len(list(c1.base.enumerate()))
    b1, b2 = as_finite(c1.base, n), as_finite(c2.base, n)
    out = []
    for theta in brute_force_isomorphisms(b1, b2):
        choices = []
        for x in range(n):
            a1 = c1.family.member(x).inner
            a2 = c2.family.member(theta[x]).inner
            k1, k2 = len(list(a1.enumerate())), len(list(a2.enumerate()))
            if k1 != k2:
                break
            choices.append(brute_force_isomorphisms(as_finite(a1, k1), as_finite(a2, k2)))
        else:
            for psis in itertools.product(*choices):
                th = LazyIso.from_dict(theta)
                parts = {x: LazyIso.from_dict({encode_pair(x, a): encode_pair(theta[x], b) for a, b in psis[x].items()}) for x in range(n)}
                rho = glue_iso(th, parts.__getitem__)
                out.append({z: rho.apply(z) for z in full_truncation(c1).elements})
    return out
