"""Small library of concrete presentations used by demos, the CLI and tests."""

from __future__ import annotations

import itertools
from typing import Iterable

from .core import Family, FiniteStructure, Presentation, Signature

ORDER_SIG = Signature((Family("<", 2),))
DIGRAPH_SIG = Signature((Family("E", 2),))
EMPTY_SIG = Signature(())


def omega_order() -> Presentation:
    """(omega, <) on codes = naturals."""
    return Presentation(
        ORDER_SIG,
        lambda c: True,
        lambda: itertools.count(),
        lambda s, t: t[0] < t[1],
        "omega",
    )


def zigzag(n: int) -> int:
    """Code of an integer: 0, -1, 1, -2, 2, ... -> 0, 1, 2, 3, 4, ..."""
    return 2 * n if n >= 0 else -2 * n - 1


def unzigzag(c: int) -> int:
    return c // 2 if c % 2 == 0 else -(c + 1) // 2


def integers_order() -> Presentation:
    """(Z, <) with integers coded by :func:`zigzag`."""
    return Presentation(
        ORDER_SIG,
        lambda c: True,
        lambda: itertools.count(),
        lambda s, t: unzigzag(t[0]) < unzigzag(t[1]),
        "Z",
    )


def finite_order(n: int, codes: Iterable[int] | None = None) -> Presentation:
    """An n-chain.  ``codes[k]`` names the k-th smallest element (default k)."""
    codes = list(range(n)) if codes is None else list(codes)
    if len(codes) != n or len(set(codes)) != n:
        raise ValueError("need n distinct codes")
    facts = [(ORDER_SIG.symbol(0), (codes[i], codes[j])) for i in range(n) for j in range(i + 1, n)]
    return FiniteStructure(ORDER_SIG, codes, facts, f"chain{n}")


def finite_digraph(nodes: Iterable[int], edges: Iterable[tuple[int, int]], name: str = "") -> Presentation:
    return FiniteStructure(DIGRAPH_SIG, nodes, [(DIGRAPH_SIG.symbol(0), e) for e in edges], name)


def antichain(n: int, signature: Signature = ORDER_SIG) -> Presentation:
    """n points and no facts."""
    return FiniteStructure(signature, range(n), [], f"antichain{n}")


# ---------------------------------------------------------------- the three-point example

THREE_POINT_EDGES = ((0, 1), (1, 0), (0, 2), (1, 2))


def three_point_base() -> Presentation:
    return finite_digraph((0, 1, 2), THREE_POINT_EDGES, "S")


def three_point_components():
    """Components omega, omega, Z at base points 0, 1, 2."""
    omega, z = omega_order(), integers_order()
    return {0: omega, 1: omega, 2: z}


def three_point_composite():
    from .composite import UniformFamily, compose

    comps = three_point_components()
    family = UniformFamily(ORDER_SIG, comps.__getitem__, lambda x: x in comps, "A")
    return compose(three_point_base(), family, "S[A]")


def minimal_composite():
    """One base point carrying a one-point component."""
    from .composite import UniformFamily, compose

    point = FiniteStructure(EMPTY_SIG, [0], [], "pt")
    return compose(point, UniformFamily(EMPTY_SIG, lambda x: point, lambda x: x == 0, "pt"), "pt[pt]")


def three_point_automorphism(swap: bool = True, shift: int = 0):
    """Automorphism of the three-point composite: optionally swap 0 and 1, shift Z by ``shift``."""
    from .composite import glue_iso
    from .core import LazyIso, decode_pair, encode_pair

    def move(code, x_to, da):
        x, a = decode_pair(code)
        if x == 2:
            return encode_pair(2, zigzag(unzigzag(a) + da))
        return encode_pair(x_to[x], a)

    perm = {0: 1, 1: 0, 2: 2} if swap else {0: 0, 1: 1, 2: 2}
    theta = LazyIso.from_dict(perm, "swap" if swap else "id")
    pieces = {x: LazyIso(lambda c: move(c, perm, shift), lambda c: move(c, perm, -shift), f"psi{x}") for x in perm}
    return glue_iso(theta, pieces.__getitem__, f"rho(swap={swap},shift={shift})")
