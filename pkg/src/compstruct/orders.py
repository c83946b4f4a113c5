"""Computable copies (omega, <_X) of (omega, <) coding a c.e. set X.

Evens ``2m`` stand for the natural ``m`` in their usual order; the odd
``2n+1`` is slotted into the gap right after ``2*x_n``.  Completed to a total
order:

* ``2n < 2m``       iff ``n < m``
* ``2n+1 < 2m``     iff ``x_n < m``
* ``2m < 2n+1``     iff ``m <= x_n``
* ``2n+1 < 2m+1``   iff ``x_n < x_m``

With an injective enumeration each gap holds at most one odd, so every
element has finitely many predecessors and the order has type omega.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cmp_to_key, lru_cache
from typing import Callable

from .core import InvariantViolation, LazyIso, OracleSession, Presentation
from .structures import ORDER_SIG


@dataclass
class CEEnumeration:
    """A total injective enumeration n -> x_n of an infinite set.

    Injectivity is checked on every index queried so far (and on a prefix of
    ``check_prefix`` indices at construction time).
    """

    fn: Callable[[int], int]
    name: str = "X"
    check_prefix: int = 64
    _seen: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for n in range(self.check_prefix):
            self.at(n)

    def at(self, n: int) -> int:
        x = self.fn(n)
        prev = self._seen.setdefault(x, n)
        if prev != n:
            raise InvariantViolation(f"enumeration {self.name} repeats {x} at indices {prev} and {n}")
        return x

    def index_of(self, k: int, bound: int | None = None) -> int:
        """The n with x_n == k; only terminates when k is in the set (or at ``bound``)."""
        if k in self._seen:
            return self._seen[k]
        for n in itertools.count() if bound is None else range(bound):
            if self.at(n) == k:
                return n
        raise LookupError(f"{k} not enumerated into {self.name} before index {bound}")


def _primes():
    found: list[int] = []
    for c in itertools.count(2):
        if all(c % p for p in found if p * p <= c):
            found.append(c)
            yield c


@lru_cache(maxsize=None)
def _nth_prime_table(n: int) -> tuple[int, ...]:
    return tuple(itertools.islice(_primes(), n + 1))


def _nth_prime(n: int) -> int:
    size = 64
    while size <= n:
        size *= 2
    return _nth_prime_table(size)[n]


def _is_prime(k: int) -> bool:
    return k >= 2 and all(k % d for d in range(2, int(k**0.5) + 1))


def _is_square(k: int) -> bool:
    r = int(k**0.5)
    return any((r + d) ** 2 == k for d in (-1, 0, 1))


# name -> (enumeration, decidable membership used to answer oracle queries)
STANDARD_SETS: dict[str, tuple[Callable[[int], int], Callable[[int], bool]]] = {
    "evens": (lambda n: 2 * n, lambda k: k % 2 == 0),
    "squares": (lambda n: n * n, _is_square),
    "primes": (_nth_prime, _is_prime),
}


def standard_enumeration(name: str) -> CEEnumeration:
    return CEEnumeration(STANDARD_SETS[name][0], name)


def membership_oracle(name: str) -> OracleSession:
    return OracleSession.membership(STANDARD_SETS[name][1], name)


def less_x(e: CEEnumeration, a: int, b: int) -> bool:
    if a == b:
        return False
    qa, ra = divmod(a, 2)
    qb, rb = divmod(b, 2)
    if ra == 0 and rb == 0:
        return qa < qb
    if ra == 1 and rb == 0:
        return e.at(qa) < qb
    if ra == 0 and rb == 1:
        return qa <= e.at(qb)
    return e.at(qa) < e.at(qb)


def order_x(e: CEEnumeration) -> Presentation:
    return Presentation(
        ORDER_SIG,
        lambda c: True,
        lambda: itertools.count(),
        lambda s, t: less_x(e, t[0], t[1]),
        f"omega<{e.name}",
    )


def sorted_window(e: CEEnumeration, upto: int) -> list[int]:
    """The codes 0..upto listed in <_X order (a comparison sort, no oracle)."""

    def cmp(a, b):
        return -1 if less_x(e, a, b) else (1 if less_x(e, b, a) else 0)

    return sorted(range(upto + 1), key=cmp_to_key(cmp))


class _IsoFromOracle:
    """f: (omega, <) -> (omega, <_X), built from membership queries to X.

    Walking m = 0, 1, 2, ...: emit 2m, then, if m is in X, emit the odd
    2n+1 where n is found by running the (computable) enumeration until it
    produces m.  Only ``x_oracle`` answers membership questions.
    """

    def __init__(self, x_oracle: OracleSession, e: CEEnumeration):
        self.x = x_oracle
        self.e = e
        self.seq: list[int] = []
        self.pos: dict[int, int] = {}
        self.m = 0

    def _grow(self):
        m = self.m
        self.pos[2 * m] = len(self.seq)
        self.seq.append(2 * m)
        if self.x.query(m):
            odd = 2 * self.e.index_of(m) + 1
            self.pos[odd] = len(self.seq)
            self.seq.append(odd)
        self.m += 1

    def forward(self, n: int) -> int:
        while len(self.seq) <= n:
            self._grow()
        return self.seq[n]

    def backward(self, c: int) -> int:
        if c % 2 == 0:
            target = c // 2
        else:
            # the odd sits in gap x_n; this uses the enumeration, not the oracle
            target = self.e.at(c // 2)
        while self.m <= target:
            self._grow()
        if c not in self.pos:
            raise InvariantViolation(f"{c} not placed; oracle disagrees with the enumeration")
        return self.pos[c]


def unique_iso_to_orderX(x_oracle: OracleSession, e: CEEnumeration) -> LazyIso:
    """The unique isomorphism (omega, <) -> (omega, <_X), computed relative to X.

    Evaluating f(n) asks the oracle about 0, 1, ..., m for the least m whose
    prefix covers position n; as at most one odd fills each gap, m <= n.
    """
    impl = _IsoFromOracle(x_oracle, e)
    return LazyIso(impl.forward, impl.backward, f"f[{e.name}]")


def decode_x_from_iso(f_oracle: OracleSession, k: int) -> bool:
    """k in X iff the gap between 2k and 2k+2 is filled, read off f^-1 alone."""
    lo = f_oracle.query(("f_inv", 2 * k))
    hi = f_oracle.query(("f_inv", 2 * k + 2))
    return hi == lo + 2
