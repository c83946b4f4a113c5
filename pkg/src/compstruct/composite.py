"""Computable composition of a base structure with a family of components.

Universe coding of ``S[A]``:

* base point ``x``            -> ``encode_pair(0, x)``
* component element ``(x, a)`` -> ``encode_pair(1, encode_pair(x, a))``

Signature layout: family 0 is mu, then the base families, then the
component families.
"""

from __future__ import annotations

import heapq
import itertools
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .core import (
    Family,
    FinitePresentation,
    Fuel,
    InvariantViolation,
    LazyIso,
    Presentation,
    RelationSymbol,
    Signature,
    TagMismatch,
    TaggedCopy,
    decode_pair,
    encode_pair,
    restrict_to_elements,
    search_universe,
    _fuel,
)

BASE, COMPONENT = 0, 1
MU = Family("mu", 2)


def base_code(x: int) -> int:
    return encode_pair(BASE, x)


def component_code(x: int, a: int) -> int:
    """Composite code of element ``a`` of the component at base point ``x``."""
    return encode_pair(COMPONENT, encode_pair(x, a))


def split_code(z: int) -> tuple[int, int, int | None]:
    """``(BASE, x, None)`` or ``(COMPONENT, x, a)``; raises on other codes."""
    kind, rest = decode_pair(z)
    if kind == BASE:
        return BASE, rest, None
    if kind == COMPONENT:
        x, a = decode_pair(rest)
        return COMPONENT, x, a
    raise InvariantViolation(f"code {z} is not a composite code")


def composite_signature(base: Signature, components: Signature) -> Signature:
    return Signature(
        (MU,) + base.families + components.families,
        layout=(len(base.families), len(components.families)),
    )


class UniformFamily:
    """Components indexed by base points; ``member(x)`` is ``{x} x inner(x)``.

    ``signature`` covers the union of the components' languages; a component
    lacking a symbol simply never satisfies it.
    """

    def __init__(
        self,
        signature: Signature,
        inner: Callable[[int], Presentation],
        index_contains: Callable[[int], bool] | None = None,
        name: str = "",
    ):
        self.signature = signature
        self.inner = inner
        self.index_contains = index_contains
        self.name = name
        self._member = lru_cache(maxsize=None)(lambda x: TaggedCopy(x, inner(x)))

    def member(self, x: int) -> TaggedCopy:
        return self._member(x)


class CompositeStructure(Presentation):
    def __init__(self, base: Presentation, family: UniformFamily, name: str = ""):
        self.base = base
        self.family = family
        sig = composite_signature(base.signature, family.signature)
        self.n_base = len(base.signature.families)
        super().__init__(sig, self._has, self._list, self._rel, name or f"{base.name}[{family.name}]")

    @property
    def combined(self) -> Presentation:
        return self

    def _base_point(self, x: int) -> bool:
        inside = self.base.contains(x)
        if self.family.index_contains is not None and bool(self.family.index_contains(x)) != inside:
            raise InvariantViolation(f"family index and base universe disagree at {x}")
        return inside

    def _has(self, z: int) -> bool:
        kind, rest = decode_pair(z)
        if kind == BASE:
            return self._base_point(rest)
        if kind == COMPONENT:
            x, _ = decode_pair(rest)
            return self._base_point(x) and self.family.member(x).contains(rest)
        return False

    def _list(self):
        # k-way merge of the base codes and every component stream; a base
        # point is opened once nothing smaller can still be pending
        base_iter = iter(self.base.enumerate())
        nxt = next(base_iter, None)
        heap: list = []
        tick = itertools.count()
        while True:
            while nxt is not None and (not heap or heap[0][0] >= base_code(nxt)):
                x, nxt = nxt, next(base_iter, None)
                heapq.heappush(heap, (base_code(x), next(tick), None))
                stream = (encode_pair(COMPONENT, c) for c in self.family.member(x).enumerate())
                first = next(stream, None)
                if first is not None:
                    heapq.heappush(heap, (first, next(tick), stream))
            if not heap:
                return
            code, _, stream = heapq.heappop(heap)
            yield code
            if stream is not None:
                following = next(stream, None)
                if following is not None:
                    heapq.heappush(heap, (following, next(tick), stream))

    def _rel(self, sym: RelationSymbol, tup):
        parts = [split_code(z) for z in tup]
        if sym.family == 0:
            (k1, x1, _), (k2, x2, _) = parts
            return k2 == BASE and x1 == x2
        if sym.family <= self.n_base:
            if any(k != BASE for k, _, _ in parts):
                return False
            inner = RelationSymbol(sym.family - 1, sym.index, sym.arity)
            return self.base.holds(inner, tuple(x for _, x, _ in parts))
        if any(k != COMPONENT for k, _, _ in parts) or len({x for _, x, _ in parts}) != 1:
            return False
        x = parts[0][1]
        inner = RelationSymbol(sym.family - 1 - self.n_base, sym.index, sym.arity)
        return self.family.member(x).holds(inner, tuple(encode_pair(x, a) for _, _, a in parts))

    def mu(self, z: int) -> int:
        """The unique base point z points to, read off the coding."""
        if not self.contains(z):
            raise InvariantViolation(f"{z} is not in the composite universe")
        kind, x, _ = split_code(z)
        return base_code(x)

    def mu_symbol(self) -> RelationSymbol:
        return self.signature.symbol(0)

    def base_symbols(self, n: int = 1) -> list[RelationSymbol]:
        return [s for s in self.signature.prefix(n) if 1 <= s.family <= self.n_base]

    def component_symbols(self, n: int = 1) -> list[RelationSymbol]:
        return [s for s in self.signature.prefix(n) if s.family > self.n_base]

    def window(self, base_points: Iterable[int], per_component: int) -> list[int]:
        """Composite codes of the given base points and the first elements of their components."""
        out = []
        for x in base_points:
            out.append(base_code(x))
            out.extend(encode_pair(COMPONENT, c) for c in self.family.member(x).take(per_component))
        return sorted(out)


def compose(base: Presentation, family: UniformFamily, name: str = "") -> CompositeStructure:
    return CompositeStructure(base, family, name)


def mu_target(p: Presentation, z: int, fuel: Fuel | int | None = None) -> int:
    """mu(z) by search: z itself if mu(z, z), else the first g with mu(z, g)."""
    mu = p.signature.symbol(0)
    if not p.contains(z):
        raise InvariantViolation(f"{z} is not in the universe")
    if p.holds(mu, (z, z)):
        return z
    return search_universe(p, lambda g: p.holds(mu, (z, g)), _fuel(fuel), f"mu-target of {z}")


def _shifted(sym: RelationSymbol, offset: int) -> RelationSymbol:
    return RelationSymbol(sym.family + offset, sym.index, sym.arity)


def decompose(
    p: Presentation, layout: tuple[int, int] | None = None, fuel: Fuel | int | None = None
) -> tuple[Presentation, UniformFamily]:
    """Recover base and components of a promised composite copy.

    Base universe: the mu-self-looped points.  Component at ``g``: the points
    other than ``g`` with a mu-edge to ``g``; its elements keep ``p``'s codes
    and are tagged with ``g``.  Enumerations filter ``p``'s and spend fuel per
    scanned element, so listing past the end of a finite part exhausts fuel
    instead of hanging.
    """
    layout = layout or p.signature.layout
    if layout is None:
        raise ValueError("signature carries no composite layout; pass layout=(n_base, n_components)")
    n_base, n_comp = layout
    fuel = _fuel(fuel)
    mu = p.signature.symbol(0)
    base_sig = Signature(p.signature.families[1 : 1 + n_base])
    comp_sig = Signature(p.signature.families[1 + n_base : 1 + n_base + n_comp])

    def is_base(x):
        return p.contains(x) and p.holds(mu, (x, x))

    def scan(pred, what):
        for c in p.enumerate():
            fuel.spend(what=what)
            if pred(c):
                yield c

    base = Presentation(
        base_sig,
        is_base,
        lambda: scan(lambda c: p.holds(mu, (c, c)), "decompose: base enumeration"),
        lambda s, t: all(is_base(x) for x in t) and p.holds(_shifted(s, 1), t),
        f"base({p.name})",
    )

    def inner(g):
        def has(b):
            if b == g or not p.contains(b) or not p.holds(mu, (b, g)):
                return False
            if p.holds(mu, (b, b)):
                raise InvariantViolation(f"{b} has two outgoing mu-edges")
            return True

        return Presentation(
            comp_sig,
            has,
            lambda: scan(has, f"decompose: component at {g}"),
            lambda s, t: p.holds(_shifted(s, 1 + n_base), t),
            f"B[{g}]",
        )

    return base, UniformFamily(comp_sig, inner, is_base, f"components({p.name})")


def check_mu_edges(p: Presentation, z: int, window: int) -> int:
    """Count mu-successors of z among the first ``window`` elements; must be exactly one."""
    mu = p.signature.symbol(0)
    hits = [g for g in p.take(window) if p.holds(mu, (z, g))]
    if len(hits) != 1:
        raise InvariantViolation(f"{z} has {len(hits)} outgoing mu-edges within the first {window} elements")
    return hits[0]


# ---------------------------------------------------------------- isomorphisms


def glue_iso(theta: LazyIso, psi: Callable[[int], LazyIso], name: str = "glued") -> LazyIso:
    """``theta`` on base points united with ``psi(x)`` on the component at ``x``.

    ``theta`` acts on base codes (not composite codes); ``psi(x)`` acts on the
    tagged codes of ``member(x)`` and must land in the component tagged
    ``theta(x)``, which is checked on every query.
    """

    def fwd(z):
        kind, x, a = split_code(z)
        if kind == BASE:
            return base_code(theta.apply(x))
        tx = theta.apply(x)
        y, b = decode_pair(psi(x).apply(encode_pair(x, a)))
        if y != tx:
            raise TagMismatch(f"psi({x}) lands in component {y}, but theta({x}) = {tx}")
        return component_code(y, b)

    def bwd(w):
        kind, y, b = split_code(w)
        if kind == BASE:
            return base_code(theta.inverse_apply(y))
        x = theta.inverse_apply(y)
        x2, a = decode_pair(psi(x).inverse_apply(encode_pair(y, b)))
        if x2 != x:
            raise TagMismatch(f"psi({x})^-1 lands in component {x2}")
        return component_code(x, a)

    return LazyIso(fwd, bwd, name)


def split_iso(
    rho: LazyIso, c1: CompositeStructure | None = None, c2: CompositeStructure | None = None
) -> tuple[LazyIso, Callable[[int], LazyIso]]:
    """Restrict rho to the base (``theta``) and to each component (``psi``).

    Violations, such as a base point sent to a component element, surface
    lazily as :class:`InvariantViolation` when the offending point is queried.
    """

    def base_only(w, where):
        kind, y, _ = split_code(w)
        if kind != BASE:
            raise InvariantViolation(f"{where} sends a base point to non-base code {w}")
        return y

    theta = LazyIso(
        lambda x: base_only(rho.apply(base_code(x)), "rho"),
        lambda y: base_only(rho.inverse_apply(base_code(y)), "rho^-1"),
        f"{rho.name}|base",
    )

    def comp_only(w, where):
        kind, y, b = split_code(w)
        if kind != COMPONENT:
            raise InvariantViolation(f"{where} sends a component element to base code {w}")
        return encode_pair(y, b)

    @lru_cache(maxsize=None)
    def psi(x):
        tx = theta.apply(x)

        def fwd(c):
            y, a = decode_pair(c)
            if y != x:
                raise TagMismatch(f"{c} is not in the component at {x}")
            out = comp_only(rho.apply(component_code(x, a)), "rho")
            if decode_pair(out)[0] != tx:
                raise InvariantViolation(f"rho moves component {x} off component {tx}")
            return out

        def bwd(c):
            y, b = decode_pair(c)
            if y != tx:
                raise TagMismatch(f"{c} is not in the component at {tx}")
            out = comp_only(rho.inverse_apply(component_code(tx, b)), "rho^-1")
            if decode_pair(out)[0] != x:
                raise InvariantViolation(f"rho^-1 moves component {tx} off component {x}")
            return out

        return LazyIso(fwd, bwd, f"{rho.name}|{x}")

    return theta, psi


# ---------------------------------------------------------------- finite helpers


def finite_truncation(c: CompositeStructure, base_points: Iterable[int], per_component: int, n: int = 1) -> FinitePresentation:
    """Restriction of ``c`` to a window, over all symbols with index < n."""
    return restrict_to_elements(c, c.window(base_points, per_component), c.signature.prefix(n))


def path_graph(n: int) -> Presentation:
    from .structures import finite_digraph

    return finite_digraph(range(n), [(k, k + 1) for k in range(n - 1)], name=f"P{n}")


def build_path_composite(components: Sequence[Presentation]) -> CompositeStructure:
    """``A_0 -> A_1 -> ... -> A_{n-1}`` over the directed path on n points."""
    if not components:
        raise ValueError("need at least one component")
    n = len(components)
    comps = list(components)
    family = UniformFamily(comps[0].signature, lambda i: comps[i], lambda i: 0 <= i < n, "path")
    return compose(path_graph(n), family, f"P{n}[...]")
