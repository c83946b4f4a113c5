"""The infinite-dimensional hypercube H and its automorphisms h_X.

Element codes:

* vertex ``S`` (finite set of naturals) -> ``2 * sum(2**i for i in S)``
* face ``(i, a)``                      -> ``2 * (2*i + a) + 1``

Family 0 is ``E_i`` (undirected, ``X ^ Y == {i}``), family 1 is ``D_i``
(``D_i(X, (i, a))`` iff ``X(i) == a``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .core import (
    Family,
    FinitePresentation,
    Fuel,
    InvariantViolation,
    LazyIso,
    LimitExceeded,
    Presentation,
    Signature,
    brute_force_isomorphisms,
    restrict_to_elements,
    _fuel,
)

E, D = 0, 1
H_SIG = Signature((Family("E", 2, indexed=True), Family("D", 2, indexed=True)))
BRUTE_FORCE_LIMIT = 4


@dataclass(frozen=True)
class Vertex:
    members: frozenset

    @classmethod
    def of(cls, *members: int) -> "Vertex":
        return cls(frozenset(members))

    @classmethod
    def from_mask(cls, mask: int) -> "Vertex":
        return cls(frozenset(i for i in range(mask.bit_length()) if mask >> i & 1))

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.members)

    @property
    def code(self) -> int:
        return 2 * self.mask

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in sorted(self.members)) + "}"


@dataclass(frozen=True)
class Face:
    i: int
    a: int

    def __post_init__(self):
        if self.a not in (0, 1) or self.i < 0:
            raise ValueError(f"bad face ({self.i}, {self.a})")

    @property
    def code(self) -> int:
        return 2 * (2 * self.i + self.a) + 1

    def __str__(self) -> str:
        return f"({self.i},{self.a})"


HElement = Vertex | Face


def decode_h(code: int) -> HElement:
    if code < 0:
        raise ValueError(f"negative code {code}")
    if code % 2 == 0:
        return Vertex.from_mask(code >> 1)
    i, a = divmod(code >> 1, 2)
    return Face(i, a)


def h_label(code: int) -> str:
    return str(decode_h(code))


def _as_mask(X) -> int:
    if isinstance(X, int):
        return X
    if isinstance(X, Vertex):
        return X.mask
    return sum(1 << i for i in set(X))


# ---------------------------------------------------------------- relations


def h_e_rel(i: int, x: HElement, y: HElement) -> bool:
    return isinstance(x, Vertex) and isinstance(y, Vertex) and x.mask ^ y.mask == 1 << i


def h_d_rel(i: int, x: HElement, f: HElement) -> bool:
    return isinstance(x, Vertex) and isinstance(f, Face) and f.i == i and (x.mask >> i & 1) == f.a


def _holds_codes(family: int, i: int, u: int, v: int) -> bool:
    if u % 2:
        return False
    if family == E:
        return v % 2 == 0 and (u ^ v) >> 1 == 1 << i
    if family == D:
        return v % 2 == 1 and (v >> 1) == 2 * i + ((u >> 1) >> i & 1)
    return False


def hcube() -> Presentation:
    """Canonical computable copy of H; its universe is every natural."""
    return Presentation(
        H_SIG,
        lambda c: True,
        lambda: itertools.count(),
        lambda s, t: _holds_codes(s.family, s.index, t[0], t[1]),
        "H",
    )


def e_sym(i: int):
    return H_SIG.symbol(E, i)


def d_sym(i: int):
    return H_SIG.symbol(D, i)


# ---------------------------------------------------------------- automorphisms h_X


def h_apply_code(X, code: int) -> int:
    mask = _as_mask(X)
    if code % 2 == 0:
        return code ^ (mask << 1)
    i = (code >> 1) >> 1
    return code ^ ((mask >> i & 1) << 1)


def h_apply(X, z: HElement) -> HElement:
    """Reflect along every dimension in X: vertices by symmetric difference, faces by bit-flip."""
    return decode_h(h_apply_code(X, z.code))


def h_compose(X: Iterable[int], Y: Iterable[int]) -> frozenset:
    """The set Z with h_X o h_Y = h_Z, namely X symmetric-difference Y."""
    return frozenset(X) ^ frozenset(Y)


@dataclass(frozen=True)
class HAutomorphism:
    X: frozenset

    def __call__(self, z: HElement) -> HElement:
        return h_apply(self.X, z)

    def as_iso(self) -> LazyIso:
        # self-inverse
        mask = _as_mask(self.X)
        f = lambda c: h_apply_code(mask, c)  # noqa: E731
        return LazyIso(f, f, f"h{sorted(self.X)}")


# ---------------------------------------------------------------- finite truncations


def truncation_elements(n: int) -> list[int]:
    """Codes of vertices within {0..n-1} and faces (i, a) with i < n."""
    return sorted([2 * m for m in range(1 << n)] + [Face(i, a).code for i in range(n) for a in (0, 1)])


def truncation_symbols(n: int):
    return H_SIG.prefix(n)


def truncation(n: int) -> FinitePresentation:
    return restrict_to_elements(hcube(), truncation_elements(n), truncation_symbols(n))


def enumerate_automorphisms_finite(n: int, limit: int = BRUTE_FORCE_LIMIT) -> list[dict[int, int]]:
    """All automorphisms of the depth-n truncation, by backtracking search."""
    if n > limit:
        raise LimitExceeded(f"depth {n} exceeds the brute-force limit {limit}")
    t = truncation(n)
    return brute_force_isomorphisms(t, t)


def match_h_automorphism(mapping: dict[int, int]) -> frozenset | None:
    """The set X with mapping == h_X on the mapping's domain, if any."""
    if 0 not in mapping:
        return None
    image = decode_h(mapping[0])
    if not isinstance(image, Vertex):
        return None
    X = image.members
    if all(h_apply_code(X, c) == v for c, v in mapping.items()):
        return X
    return None


# ---------------------------------------------------------------- copies of H


class Role(NamedTuple):
    kind: str  # "vertex" or "face"
    index: int | None = None


def classify_element(copy: Presentation, g: int, fuel: Fuel | int | None = None) -> Role:
    """Decide whether ``g`` plays a vertex or a face in a promised copy of H.

    Dovetails two semi-decisions over the copy's enumeration with one fuel
    counter: (a) an outgoing D_0-edge from g means vertex; (b) an incoming
    D_j-edge means face j.  At stage k the k-th element is revealed and D
    indices below ``k.bit_length() + 1`` are in play, so every (j, element)
    pair is eventually tested.
    """
    fuel = _fuel(fuel)
    if not copy.contains(g):
        raise InvariantViolation(f"{g} is not in the copy")
    seen: list[int] = []
    width = 0
    for k, c in enumerate(copy.enumerate()):
        seen.append(c)
        fuel.spend(what=f"classify {g}")
        if copy.holds(d_sym(0), (g, c)):
            return Role("vertex")
        new_width = k.bit_length() + 1
        for j in range(width):
            fuel.spend(what=f"classify {g}")
            if copy.holds(d_sym(j), (c, g)):
                return Role("face", j)
        for j in range(width, new_width):
            for m in seen:
                fuel.spend(what=f"classify {g}")
                if copy.holds(d_sym(j), (m, g)):
                    return Role("face", j)
        width = new_width
    raise InvariantViolation(f"copy exhausted while classifying {g}")


class _Recovery:
    def __init__(self, copy: Presentation, image_of_empty: int, fuel_per_query: int | None, lookahead: int):
        self.copy = copy
        self.fuel_per_query = fuel_per_query
        self.lookahead = lookahead
        self.vertices: dict[int, int] = {0: image_of_empty}  # mask -> copy code
        self.faces: dict[tuple[int, int], int] = {}
        self.max_fuel_used = 0

    def _unique(self, pred, fuel: Fuel, what: str) -> int:
        found = None
        extra = 0
        for c in self.copy.enumerate():
            fuel.spend(what=what)
            if pred(c):
                if found is not None:
                    raise InvariantViolation(f"{what}: two candidates {found} and {c}")
                found = c
            if found is not None:
                if extra >= self.lookahead:
                    return found
                extra += 1
        if found is None:
            raise InvariantViolation(f"{what}: copy exhausted")
        return found

    def vertex(self, mask: int, fuel: Fuel) -> int:
        # walk E-edges from the empty set, adding elements in increasing order
        if mask in self.vertices:
            return self.vertices[mask]
        top = mask.bit_length() - 1
        prev = self.vertex(mask ^ (1 << top), fuel)
        sym = e_sym(top)
        g = self._unique(lambda c: self.copy.holds(sym, (prev, c)), fuel, f"E_{top}-neighbour of {prev}")
        self.vertices[mask] = g
        return g

    def face(self, i: int, a: int, fuel: Fuel) -> int:
        if (i, a) not in self.faces:
            src = self.vertex(a << i, fuel)
            sym = d_sym(i)
            self.faces[(i, a)] = self._unique(lambda c: self.copy.holds(sym, (src, c)), fuel, f"D_{i}-successor of {src}")
        return self.faces[(i, a)]

    def _fuel(self) -> Fuel:
        return Fuel(self.fuel_per_query)

    def forward(self, code: int) -> int:
        fuel = self._fuel()
        el = decode_h(code)
        out = self.vertex(el.mask, fuel) if isinstance(el, Vertex) else self.face(el.i, el.a, fuel)
        self.max_fuel_used = max(self.max_fuel_used, fuel.used)
        return out

    def backward(self, g: int) -> int:
        fuel = self._fuel()
        role = classify_element(self.copy, g, fuel)
        if role.kind == "face":
            for a in (0, 1):
                if self.face(role.index, a, fuel) == g:
                    return Face(role.index, a).code
            raise InvariantViolation(f"{g} classifies as face {role.index} but matches neither side")
        # read X(i) off the D_i-edges; stop once the partial set maps back to g
        mask, i = 0, 0
        while True:
            if self.copy.holds(d_sym(i), (g, self.face(i, 1, fuel))):
                mask |= 1 << i
            i += 1
            fuel.spend(what=f"invert {g}")
            if self.vertex(mask, fuel) == g:
                return 2 * mask


def recover_iso(
    copy: Presentation,
    image_of_empty: int,
    fuel_per_query: int | None = None,
    lookahead: int = 16,
    check_vertex: bool = True,
) -> LazyIso:
    """The isomorphism H -> copy determined by the image of the empty set.

    ``f(Z)`` walks E-edges from ``f({})`` adding the elements of Z in
    increasing order; ``f(i, 0)`` is the D_i-successor of ``f({})`` and
    ``f(i, 1)`` that of ``f({i})``.  Each search scans the copy's universe and
    then ``lookahead`` further elements to catch a second candidate.  Every
    top-level query gets a fresh budget of ``fuel_per_query``.
    """
    if check_vertex:
        role = classify_element(copy, image_of_empty, fuel_per_query)
        if role.kind != "vertex":
            raise InvariantViolation(f"{image_of_empty} is a face of the copy, not a vertex")
    rec = _Recovery(copy, image_of_empty, fuel_per_query, lookahead)
    iso = LazyIso(rec.forward, rec.backward, "recovered")
    iso.recovery = rec
    return iso
