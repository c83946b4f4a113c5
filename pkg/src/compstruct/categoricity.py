"""Uniform categoricity within a collection versus categoricity of H[A].

``H[A]`` puts ``{z} x A`` at every point z of H.  Two constructions:

* :func:`uniformize` turns one isomorphism ``H[A] -> H[{z} x C_alpha(z)]``
  into a uniform sequence of isomorphisms ``A -> C_i``;
* :func:`deuniformize` turns a uniform sequence ``h(i): A -> B_eta(i)`` into
  an isomorphism ``H[A] -> H[B_z]`` that fixes every point of H.

The d-oracle is never modelled as a degree: every evaluation of rho or h is
routed through whatever :class:`LazyIso` the caller passes, typically
``OracleSession.as_iso()`` so the queries are logged.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

from .composite import CompositeStructure, UniformFamily, compose, glue_iso, split_iso
from .core import LazyIso, Presentation, TagMismatch, decode_pair, encode_pair
from .hypercube import Face, Vertex, decode_h, hcube

EMPTY = Vertex.of().code


def alpha(z: int) -> int:
    """0 on vertices, i+1 on the face (i, a)."""
    el = decode_h(z)
    return el.i + 1 if isinstance(el, Face) else 0


def eta(n: int) -> int:
    """omega -> H: 2k to the k-th vertex, 2k+1 to the k-th face (in code order).

    Vertices have even codes and faces odd ones, so this is the identity on codes.
    """
    return n


def eta_inverse(z: int) -> int:
    return z


def h_over(family: Callable[[int], Presentation], signature, name: str = "") -> CompositeStructure:
    """H[{z} x family(z) : z in H]."""
    return compose(hcube(), UniformFamily(signature, family, None, name), f"H[{name}]")


def constant_h(A: Presentation, name: str = "A") -> CompositeStructure:
    return h_over(lambda z: A, A.signature, name)


def alpha_assembled(C: Callable[[int], Presentation], signature, name: str = "C") -> CompositeStructure:
    """H[{z} x C_alpha(z) : z in H]."""
    return h_over(lambda z: C(alpha(z)), signature, f"{name}_alpha")


def _untag(code: int, tag: int) -> int:
    z, a = decode_pair(code)
    if z != tag:
        raise TagMismatch(f"{code} carries tag {z}, expected {tag}")
    return a


def uniformize(rho: LazyIso) -> Callable[[int], LazyIso]:
    """h(i): A -> C_i read off rho: H[A] -> H[{z} x C_alpha(z)].

    With X the vertex rho sends the empty set to, h(0) is the second
    coordinate of rho on the component at the empty vertex (landing at X) and
    h(i+1) that on the component at (i, 0) (landing at (i, X(i))).
    """
    theta, psi = split_iso(rho)

    @lru_cache(maxsize=None)
    def h(i: int) -> LazyIso:
        src = EMPTY if i == 0 else Face(i - 1, 0).code
        piece = psi(src)
        dst = theta.apply(src)
        return LazyIso(
            lambda a: _untag(piece.apply(encode_pair(src, a)), dst),
            lambda b: _untag(piece.inverse_apply(encode_pair(dst, b)), src),
            f"h({i})",
        )

    return h


def deuniformize(h: Callable[[int], LazyIso]) -> LazyIso:
    """rho: H[A] -> H[B_z] fixing H, with rho(z, a) = (z, h(eta^-1(z))(a))."""

    @lru_cache(maxsize=None)
    def psi(z: int) -> LazyIso:
        hz = h(eta_inverse(z))
        return LazyIso(
            lambda c: encode_pair(z, hz.apply(_untag(c, z))),
            lambda c: encode_pair(z, hz.inverse_apply(_untag(c, z))),
            f"psi{z}",
        )

    return glue_iso(LazyIso.identity(), psi, "deuniformized")
