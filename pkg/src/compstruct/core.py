"""Lazily evaluated relational structures over natural-number codes.

Every structure in this package is a :class:`Presentation`: a decidable
universe of naturals, an increasing enumerator of it, and a total evaluator
for relation symbols.  Finite truncations (:class:`FinitePresentation`) are
what the brute-force isomorphism search works on.

Pairing convention (fixed, used for tags, composite universes and dumps)::

    encode_pair(a, b) = (a + b) * (a + b + 1) // 2 + b

so ``(0, 0) -> 0``, ``(1, 0) -> 1``, ``(0, 1) -> 2``, ``(2, 0) -> 3``.
"""

from __future__ import annotations

import itertools
import os
import threading
from dataclasses import dataclass, field
from math import isqrt
from typing import Callable, Hashable, Iterable, Iterator, Sequence

DEFAULT_FUEL = 10**6
FUEL_ENV_VAR = "COMPSTRUCT_FUEL"


class StructureError(Exception):
    pass


class FuelExhausted(StructureError):
    pass


class InvariantViolation(StructureError):
    pass


class TagMismatch(StructureError):
    pass


class LimitExceeded(StructureError):
    pass


# ---------------------------------------------------------------- pairing


def encode_pair(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError(f"pairing is defined on naturals, got ({a}, {b})")
    s = a + b
    return s * (s + 1) // 2 + b


def decode_pair(z: int) -> tuple[int, int]:
    if z < 0:
        raise ValueError(f"cannot decode negative code {z}")
    w = (isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


# ---------------------------------------------------------------- fuel


def default_fuel_limit() -> int:
    raw = os.environ.get(FUEL_ENV_VAR)
    return int(raw) if raw else DEFAULT_FUEL


class Fuel:
    """Query budget shared by a family of semi-decidable searches."""

    def __init__(self, limit: int | None = None):
        self.limit = default_fuel_limit() if limit is None else limit
        if self.limit <= 0:
            raise ValueError("fuel must be positive")
        self.used = 0

    def spend(self, n: int = 1, what: str = "search") -> None:
        self.used += n
        if self.used > self.limit:
            raise FuelExhausted(f"{what}: fuel exhausted after {self.limit} queries")

    @property
    def remaining(self) -> int:
        return self.limit - self.used


def _fuel(fuel: Fuel | int | None) -> Fuel:
    if isinstance(fuel, Fuel):
        return fuel
    return Fuel(fuel)


# ---------------------------------------------------------------- signatures


@dataclass(frozen=True, order=True)
class RelationSymbol:
    family: int
    index: int
    arity: int

    @property
    def id(self) -> int:
        return encode_pair(self.family, self.index)

    def __str__(self) -> str:
        return f"R{self.family}.{self.index}"


@dataclass(frozen=True)
class Family:
    name: str
    arity: int
    indexed: bool = False


class Signature:
    """Finitely many symbol families; an indexed family has one symbol per natural.

    A symbol id is ``encode_pair(family, index)``.
    """

    def __init__(self, families: Sequence[Family], layout: tuple[int, ...] | None = None):
        self.families = tuple(families)
        # composite signatures remember how many base / component families they hold
        self.layout = layout

    def __repr__(self) -> str:
        return f"Signature({[f.name for f in self.families]})"

    def __eq__(self, other):
        return isinstance(other, Signature) and self.families == other.families

    def __hash__(self):
        return hash(self.families)

    @property
    def finite(self) -> bool:
        return not any(f.indexed for f in self.families)

    def symbol(self, family: int, index: int = 0) -> RelationSymbol:
        fam = self.families[family]
        if index < 0 or (index > 0 and not fam.indexed):
            raise KeyError(f"family {fam.name} has no symbol with index {index}")
        return RelationSymbol(family, index, fam.arity)

    def from_id(self, sid: int) -> RelationSymbol:
        return self.symbol(*decode_pair(sid))

    def prefix(self, n: int = 1) -> list[RelationSymbol]:
        """Unindexed symbols plus indexed ones with index < n."""
        out = []
        for k, fam in enumerate(self.families):
            for i in range(n if fam.indexed else 1):
                out.append(RelationSymbol(k, i, fam.arity))
        return out

    def all_symbols(self) -> list[RelationSymbol]:
        if not self.finite:
            raise FuelExhausted(f"{self!r} is infinite; pass an explicit symbol prefix")
        return self.prefix(1)


# ---------------------------------------------------------------- presentations


class Presentation:
    """A computable structure given by evaluators.

    ``contains`` decides the universe, ``enumerate`` lists it in increasing
    order, and ``holds`` evaluates a relation.  ``holds`` is total: it is
    False on any tuple leaving the universe, and raises ``ValueError`` only on
    a tuple of the wrong length.
    """

    def __init__(
        self,
        signature: Signature,
        contains: Callable[[int], bool],
        enumerate: Callable[[], Iterable[int]],
        holds: Callable[[RelationSymbol, tuple[int, ...]], bool],
        name: str = "",
    ):
        self.signature = signature
        self._contains = contains
        self._enumerate = enumerate
        self._holds = holds
        self.name = name

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"

    def contains(self, code: int) -> bool:
        return code >= 0 and bool(self._contains(code))

    def enumerate(self) -> Iterator[int]:
        return iter(self._enumerate())

    def holds(self, sym: RelationSymbol, tup: Sequence[int]) -> bool:
        tup = tuple(tup)
        if len(tup) != sym.arity:
            raise ValueError(f"{sym} has arity {sym.arity}, got {len(tup)}-tuple")
        if sym.family >= len(self.signature.families):
            return False
        if not all(self.contains(c) for c in tup):
            return False
        return bool(self._holds(sym, tup))

    def take(self, n: int) -> list[int]:
        return list(itertools.islice(self.enumerate(), n))


class FiniteStructure(Presentation):
    """A Presentation backed by an explicit element list and fact set."""

    def __init__(self, signature: Signature, elements: Iterable[int], facts: Iterable, name: str = ""):
        self.elements = tuple(sorted(set(elements)))
        self._elset = frozenset(self.elements)
        self.facts = frozenset((s, tuple(t)) for s, t in facts)
        for s, t in self.facts:
            if not set(t) <= self._elset:
                raise InvariantViolation(f"fact {s}{t} leaves the universe")
        keys = {(s.family, s.index, t) for s, t in self.facts}
        super().__init__(
            signature,
            self._elset.__contains__,
            lambda: self.elements,
            lambda s, t: (s.family, s.index, t) in keys,
            name,
        )

    @classmethod
    def from_finite(cls, fp: "FinitePresentation", signature: Signature, name: str = ""):
        return cls(signature, fp.elements, fp.facts, name)


@dataclass(frozen=True)
class FinitePresentation:
    elements: tuple[int, ...]
    facts: frozenset = field(default_factory=frozenset)
    symbols: tuple[RelationSymbol, ...] = ()

    def __post_init__(self):
        els = set(self.elements)
        for s, t in self.facts:
            if not set(t) <= els:
                raise InvariantViolation(f"fact {s}{t} leaves the element list")

    def __len__(self):
        return len(self.elements)

    def sorted_facts(self) -> list[tuple[RelationSymbol, tuple[int, ...]]]:
        return sorted(self.facts, key=lambda f: (f[0].family, f[0].index, f[1]))

    def restrict(self, elements: Iterable[int]) -> "FinitePresentation":
        keep = set(elements)
        return FinitePresentation(
            tuple(e for e in self.elements if e in keep),
            frozenset((s, t) for s, t in self.facts if set(t) <= keep),
            self.symbols,
        )

    def relabel(self, mapping: dict[int, int]) -> "FinitePresentation":
        return FinitePresentation(
            tuple(sorted(mapping[e] for e in self.elements)),
            frozenset((s, tuple(mapping[c] for c in t)) for s, t in self.facts),
            self.symbols,
        )


def restrict_to_elements(
    p: Presentation, elements: Iterable[int], symbols: Iterable[RelationSymbol]
) -> FinitePresentation:
    elements = tuple(elements)
    symbols = tuple(symbols)
    facts = set()
    for sym in symbols:
        for tup in itertools.product(elements, repeat=sym.arity):
            if p.holds(sym, tup):
                facts.add((sym, tup))
    return FinitePresentation(elements, frozenset(facts), symbols)


def restrict_to_finite(
    p: Presentation, bound: int, symbols: Iterable[RelationSymbol] | None = None
) -> FinitePresentation:
    """The substructure on the first ``bound`` codes of the universe."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if symbols is None:
        symbols = p.signature.all_symbols()
    return restrict_to_elements(p, p.take(bound), symbols)


# ---------------------------------------------------------------- isomorphism search


def _profiles(fp: FinitePresentation) -> dict[int, tuple]:
    prof = {e: {} for e in fp.elements}
    for s, t in fp.facts:
        for pos, c in enumerate(t):
            key = (s.family, s.index, pos)
            prof[c][key] = prof[c].get(key, 0) + 1
    return {e: tuple(sorted(d.items())) for e, d in prof.items()}


def brute_force_isomorphisms(
    f1: FinitePresentation, f2: FinitePresentation, limit: int | None = None
) -> list[dict[int, int]]:
    """All fact-preserving and fact-reflecting bijections ``f1 -> f2``.

    Backtracks over ``f1``'s elements in increasing order, trying targets in
    increasing order, so results come out lexicographically ordered by the
    sequence of images.  Candidates are pruned by per-element fact profiles.
    """
    if len(f1.elements) != len(f2.elements):
        return []
    key = lambda f: (f[0].family, f[0].index)  # noqa: E731
    count1: dict = {}
    count2: dict = {}
    for f in f1.facts:
        count1[key(f)] = count1.get(key(f), 0) + 1
    for f in f2.facts:
        count2[key(f)] = count2.get(key(f), 0) + 1
    if count1 != count2:
        return []
    prof1, prof2 = _profiles(f1), _profiles(f2)
    if sorted(prof1.values()) != sorted(prof2.values()):
        return []

    facts1 = {(s.family, s.index, t) for s, t in f1.facts}
    facts2 = {(s.family, s.index, t) for s, t in f2.facts}
    inc1: dict[int, list] = {e: [] for e in f1.elements}
    inc2: dict[int, list] = {e: [] for e in f2.elements}
    for s, t in f1.facts:
        for c in set(t):
            inc1[c].append((s.family, s.index, t))
    for s, t in f2.facts:
        for c in set(t):
            inc2[c].append((s.family, s.index, t))

    order = sorted(f1.elements)
    targets = sorted(f2.elements)
    cands = {e: [v for v in targets if prof2[v] == prof1[e]] for e in order}
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}
    results: list[dict[int, int]] = []

    def consistent(e: int, v: int) -> bool:
        for fam, idx, t in inc1[e]:
            if all(c in fwd for c in t) and (fam, idx, tuple(fwd[c] for c in t)) not in facts2:
                return False
        for fam, idx, t in inc2[v]:
            if all(c in bwd for c in t) and (fam, idx, tuple(bwd[c] for c in t)) not in facts1:
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(order):
            results.append(dict(fwd))
            return limit is not None and len(results) >= limit
        e = order[k]
        for v in cands[e]:
            if v in bwd:
                continue
            fwd[e] = v
            bwd[v] = e
            if consistent(e, v) and extend(k + 1):
                return True
            del fwd[e]
            del bwd[v]
        return False

    extend(0)
    return results


def is_isomorphism(mapping: dict[int, int], f1: FinitePresentation, f2: FinitePresentation) -> bool:
    """Fact-by-fact check that ``mapping`` is a bijection preserving and reflecting facts."""
    if set(mapping) != set(f1.elements) or sorted(mapping.values()) != sorted(f2.elements):
        return False
    image = {(s.family, s.index, tuple(mapping[c] for c in t)) for s, t in f1.facts}
    return image == {(s.family, s.index, t) for s, t in f2.facts}


def check_iso_on_elements(
    iso: Callable[[int], int],
    p1: Presentation,
    p2: Presentation,
    elements: Sequence[int],
    symbols: Iterable[RelationSymbol],
) -> str | None:
    """Check a pointwise map on a finite window of ``p1``.

    Every tuple over ``elements`` must satisfy ``p1.holds(t) == p2.holds(iso(t))``,
    images must lie in ``p2`` and be pairwise distinct.  Returns ``None`` when
    the window is clean, else a description of the first failure.
    """
    image = {}
    for e in elements:
        v = iso(e)
        if not p2.contains(v):
            return f"image {v} of {e} is outside the target universe"
        image[e] = v
    if len(set(image.values())) != len(image):
        return "map is not injective on the window"
    for sym in symbols:
        for tup in itertools.product(elements, repeat=sym.arity):
            lhs = p1.holds(sym, tup)
            rhs = p2.holds(sym, tuple(image[c] for c in tup))
            if lhs != rhs:
                return f"{sym}{tup} is {lhs} but {sym}{tuple(image[c] for c in tup)} is {rhs}"
    return None


# ---------------------------------------------------------------- lazy isomorphisms


class LazyIso:
    """A bijection evaluated pointwise on demand, memoised in both directions.

    Evaluators are deterministic, so concurrent callers may race to compute a
    value; the first stored answer wins and a disagreeing one is an error.
    """

    def __init__(self, forward: Callable[[int], int], backward: Callable[[int], int], name: str = ""):
        self._forward = forward
        self._backward = backward
        self._fwd: dict[int, int] = {}
        self._bwd: dict[int, int] = {}
        self._lock = threading.Lock()
        self.name = name

    def __repr__(self) -> str:
        return f"<LazyIso {self.name}>"

    def _record(self, x: int, y: int) -> None:
        with self._lock:
            old_y = self._fwd.setdefault(x, y)
            old_x = self._bwd.setdefault(y, x)
        if old_y != y or old_x != x:
            raise InvariantViolation(f"{self.name or 'map'} is not a bijection at {x} <-> {y}")

    def apply(self, x: int) -> int:
        y = self._fwd.get(x)
        if y is None:
            y = self._forward(x)
            self._record(x, y)
        return y

    __call__ = apply

    def inverse_apply(self, y: int) -> int:
        x = self._bwd.get(y)
        if x is None:
            x = self._backward(y)
            self._record(x, y)
        return x

    def inverse(self) -> "LazyIso":
        inv = LazyIso(self._backward, self._forward, f"{self.name}^-1")
        inv._fwd, inv._bwd, inv._lock = self._bwd, self._fwd, self._lock
        return inv

    def then(self, other: "LazyIso") -> "LazyIso":
        """``other o self``."""
        return LazyIso(
            lambda x: other.apply(self.apply(x)),
            lambda z: self.inverse_apply(other.inverse_apply(z)),
            f"{other.name}.{self.name}",
        )

    def queried(self) -> dict[int, int]:
        with self._lock:
            return dict(self._fwd)

    @classmethod
    def identity(cls) -> "LazyIso":
        return cls(lambda x: x, lambda y: y, "id")

    @classmethod
    def from_dict(cls, mapping: dict[int, int], name: str = "") -> "LazyIso":
        inv = {v: k for k, v in mapping.items()}
        if len(inv) != len(mapping):
            raise InvariantViolation("mapping is not injective")
        return cls(mapping.__getitem__, inv.__getitem__, name)


class OracleSession:
    """Query interface with an append-only log of every query issued.

    Answers are memoised so repeated queries agree, but each query is still
    logged.  ``for_iso`` wraps a bijection; its queries are ``("f", x)`` and
    ``("f_inv", y)``.
    """

    def __init__(self, answer: Callable[[Hashable], object], name: str = "oracle"):
        self._answer = answer
        self._memo: dict = {}
        self._lock = threading.Lock()
        self.log: list = []
        self.name = name

    def __repr__(self) -> str:
        return f"<OracleSession {self.name}: {len(self.log)} queries>"

    def query(self, q):
        with self._lock:
            self.log.append(q)
            if q in self._memo:
                return self._memo[q]
        a = self._answer(q)
        with self._lock:
            return self._memo.setdefault(q, a)

    __call__ = query

    @classmethod
    def membership(cls, predicate: Callable[[int], bool], name: str = "X") -> "OracleSession":
        return cls(lambda k: bool(predicate(k)), name)

    @classmethod
    def for_iso(cls, iso: LazyIso, name: str = "f") -> "OracleSession":
        def answer(q):
            kind, x = q
            if kind == "f":
                return iso.apply(x)
            if kind == "f_inv":
                return iso.inverse_apply(x)
            raise ValueError(f"unknown query kind {kind!r}")

        return cls(answer, name)

    def as_iso(self) -> LazyIso:
        """A LazyIso whose every evaluation is routed through this session."""
        return LazyIso(lambda x: self.query(("f", x)), lambda y: self.query(("f_inv", y)), self.name)


# ---------------------------------------------------------------- tagged copies


class TaggedCopy(Presentation):
    """``{tag} x inner``: element ``a`` of ``inner`` becomes ``encode_pair(tag, a)``."""

    def __init__(self, tag: int, inner: Presentation):
        self.tag = tag
        self.inner = inner
        super().__init__(inner.signature, self._has, self._list, self._rel, f"{tag}x{inner.name}")

    def _has(self, code: int) -> bool:
        z, a = decode_pair(code)
        return z == self.tag and self.inner.contains(a)

    def _list(self):
        return (encode_pair(self.tag, a) for a in self.inner.enumerate())

    def _rel(self, sym, tup):
        return self.inner.holds(sym, tuple(decode_pair(c)[1] for c in tup))

    def tagged(self, a: int) -> int:
        return encode_pair(self.tag, a)

    def untag(self, code: int) -> int:
        z, a = decode_pair(code)
        if z != self.tag:
            raise TagMismatch(f"code {code} carries tag {z}, expected {self.tag}")
        return a


def transport(src_tag: int, dst_tag: int) -> LazyIso:
    """``(src, a) -> (dst, a)`` between two tagged copies of one presentation."""

    def move(code, frm, to):
        z, a = decode_pair(code)
        if z != frm:
            raise TagMismatch(f"code {code} carries tag {z}, expected {frm}")
        return encode_pair(to, a)

    return LazyIso(
        lambda c: move(c, src_tag, dst_tag),
        lambda c: move(c, dst_tag, src_tag),
        f"transport[{src_tag}->{dst_tag}]",
    )


def retag_copy(src: TaggedCopy, new_tag: int) -> tuple[TaggedCopy, LazyIso]:
    return TaggedCopy(new_tag, src.inner), transport(src.tag, new_tag)


def tagged_map(theta: LazyIso, src_tag: int, dst_tag: int) -> LazyIso:
    """``(src, a) -> (dst, theta(a))``; one theta query per point."""

    def fwd(code):
        z, a = decode_pair(code)
        if z != src_tag:
            raise TagMismatch(f"code {code} carries tag {z}, expected {src_tag}")
        return encode_pair(dst_tag, theta.apply(a))

    def bwd(code):
        z, b = decode_pair(code)
        if z != dst_tag:
            raise TagMismatch(f"code {code} carries tag {z}, expected {dst_tag}")
        return encode_pair(src_tag, theta.inverse_apply(b))

    return LazyIso(fwd, bwd, f"hat({theta.name})")


# ---------------------------------------------------------------- scrambled copies


@dataclass(frozen=True)
class BlockRotation:
    """Computable permutation of the naturals that rotates fixed-size blocks.

    Block ``k`` is ``[k*size, (k+1)*size)``; inside it, offsets are shifted by
    ``(step + stride*k) mod size``.  Blocks map onto themselves, which keeps
    the permuted universe enumerable in increasing order.
    """

    size: int
    step: int
    stride: int = 0

    def _shift(self, k: int) -> int:
        return (self.step + self.stride * k) % self.size

    def __call__(self, c: int) -> int:
        k, off = divmod(c, self.size)
        return k * self.size + (off + self._shift(k)) % self.size

    def inverse(self, c: int) -> int:
        k, off = divmod(c, self.size)
        return k * self.size + (off - self._shift(k)) % self.size


# Documented adversarial permutations used as ground truth by the tests and CLI.
PERMUTATIONS = {
    "identity": BlockRotation(1, 0),
    "rot4": BlockRotation(4, 1),
    "rot7": BlockRotation(7, 3, 1),
    "rot16": BlockRotation(16, 5, 3),
}


def permuted_copy(p: Presentation, perm: BlockRotation, name: str = "") -> Presentation:
    """The copy of ``p`` whose element ``c`` is renamed ``perm(c)``."""

    def enum():
        block = -1
        pending: list[int] = []
        for c in p.enumerate():
            k = c // perm.size
            if k != block:
                yield from sorted(pending)
                pending, block = [], k
            pending.append(perm(c))
        yield from sorted(pending)

    return Presentation(
        p.signature,
        lambda c: p.contains(perm.inverse(c)),
        enum,
        lambda s, t: p.holds(s, tuple(perm.inverse(c) for c in t)),
        name or f"perm({p.name})",
    )


def search_universe(
    p: Presentation, predicate: Callable[[int], bool], fuel: Fuel, what: str = "search"
) -> int:
    """First element of ``p`` (in enumeration order) satisfying ``predicate``."""
    for c in p.enumerate():
        fuel.spend(what=what)
        if predicate(c):
            return c
    raise InvariantViolation(f"{what}: universe exhausted without a witness")
