"""The pair M = H[M_z], N = H[N_z] built from two families A_i, B_i.

Component choice at each point z of H:

* face (i, 0): A_{i+1} in both M and N
* face (i, 1): B_{i+1} in both
* vertex X:    M carries A_0 when |X| is even, B_0 when odd; N the reverse

Isomorphisms M -> N are glued from some h_X on H and componentwise maps.
The lifts below turn one component isomorphism theta into such an rho using
theta alone; extraction goes the other way using rho alone.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from functools import lru_cache
from typing import Callable, Sequence

from .composite import (
    CompositeStructure,
    UniformFamily,
    base_code,
    compose,
    glue_iso,
    split_iso,
)
from .core import (
    InvariantViolation,
    LazyIso,
    OracleSession,
    Presentation,
    Signature,
    TagMismatch,
    check_iso_on_elements,
    decode_pair,
    encode_pair,
    tagged_map,
    transport,
)
from .hypercube import (
    Face,
    HAutomorphism,
    Vertex,
    decode_h,
    hcube,
    truncation_elements,
)
from .orders import (
    STANDARD_SETS,
    CEEnumeration,
    decode_x_from_iso,
    order_x,
    unique_iso_to_orderX,
)
from .structures import ORDER_SIG, omega_order

EMPTY = Vertex.of().code


class FamilyPair:
    """Two uniformly computable families with A_i isomorphic to B_i for every i."""

    def __init__(self, A: Callable[[int], Presentation], B: Callable[[int], Presentation], signature: Signature, name: str = ""):
        self.A = lru_cache(maxsize=None)(A)
        self.B = lru_cache(maxsize=None)(B)
        self.signature = signature
        self.name = name

    def pick(self, choice: tuple[str, int]) -> Presentation:
        side, k = choice
        return self.A(k) if side == "A" else self.B(k)


def select_M(z: int) -> tuple[str, int]:
    el = decode_h(z)
    if isinstance(el, Face):
        return ("A" if el.a == 0 else "B", el.i + 1)
    return ("A" if len(el.members) % 2 == 0 else "B", 0)


def select_N(z: int) -> tuple[str, int]:
    el = decode_h(z)
    if isinstance(el, Face):
        return ("A" if el.a == 0 else "B", el.i + 1)
    return ("B" if len(el.members) % 2 == 0 else "A", 0)


def build_MN(fp: FamilyPair) -> tuple[CompositeStructure, CompositeStructure]:
    M = compose(hcube(), UniformFamily(fp.signature, lambda z: fp.pick(select_M(z)), None, "M"), "M")
    N = compose(hcube(), UniformFamily(fp.signature, lambda z: fp.pick(select_N(z)), None, "N"), "N")
    return M, N


def _even(z: int) -> bool:
    return len(decode_h(z).members) % 2 == 0


def lift_iso_base(theta: LazyIso, fp: FamilyPair | None = None) -> LazyIso:
    """An isomorphism M -> N fixing H, carrying theta: A_0 -> B_0 to every vertex.

    Faces get the identity; an even vertex Y gets ``(Y, a) -> (Y, theta(a))``
    (transport to the empty vertex, apply theta there, transport back); an
    odd vertex the same with theta inverted.  Each point costs at most one
    query to theta.
    """
    hat = tagged_map(theta, EMPTY, EMPTY)
    hat_inv = hat.inverse()

    @lru_cache(maxsize=None)
    def psi(z):
        if isinstance(decode_h(z), Face):
            return LazyIso.identity()
        core = hat if _even(z) else hat_inv
        return transport(z, EMPTY).then(core).then(transport(EMPTY, z))

    return glue_iso(LazyIso.identity(), psi, f"lift_base({theta.name})")


def lift_iso_face(i: int, theta: LazyIso, fp: FamilyPair | None = None) -> LazyIso:
    """An isomorphism M -> N over the reflection h_{i}, using theta: A_{i+1} -> B_{i+1}.

    The component at (i, 0) goes to the one at (i, 1) through theta, the one
    at (i, 1) back through theta inverse, other faces stay put, and every
    vertex component slides to the vertex across dimension i unchanged.
    """
    f0, f1 = Face(i, 0).code, Face(i, 1).code
    h = HAutomorphism(frozenset({i}))
    base = h.as_iso()
    hat = tagged_map(theta, f0, f1)

    @lru_cache(maxsize=None)
    def psi(z):
        if z == f0:
            return hat
        if z == f1:
            return hat.inverse()
        if isinstance(decode_h(z), Face):
            return LazyIso.identity()
        return transport(z, base.apply(z))

    return glue_iso(base, psi, f"lift_face{i}({theta.name})")


def extract_component_iso(rho: LazyIso, fp: FamilyPair | None = None) -> tuple[int, LazyIso]:
    """From any rho: M -> N, an index n and an isomorphism A_n -> B_n computed from rho.

    The base action of rho at the empty vertex reveals X.  If X is empty the
    component at the empty vertex is read off; otherwise, for the least i in
    X, the component at (i, 0), which rho sends onto (i, 1).
    """
    theta_base, psi = split_iso(rho)
    target = decode_h(theta_base.apply(EMPTY))
    if not isinstance(target, Vertex):
        raise InvariantViolation("rho sends the empty vertex to a face")
    if not target.members:
        n, src = 0, EMPTY
    else:
        i = min(target.members)
        n, src = i + 1, Face(i, 0).code
    piece = psi(src)
    dst = theta_base.apply(src)

    def untag(code, tag):
        z, a = decode_pair(code)
        if z != tag:
            raise TagMismatch(f"{code} carries tag {z}, expected {tag}")
        return a

    theta = LazyIso(
        lambda a: untag(piece.apply(encode_pair(src, a)), dst),
        lambda b: untag(piece.inverse_apply(encode_pair(dst, b)), src),
        f"extract({rho.name})",
    )
    return n, theta


# ---------------------------------------------------------------- validation


def truncation_window(c: CompositeStructure, depth: int, per_component: int) -> list[int]:
    return c.window(truncation_elements(depth), per_component)


def validate_lift(rho: LazyIso, M: CompositeStructure, N: CompositeStructure, depth: int, per_component: int) -> str | None:
    """Fact check of rho on the depth-``depth`` window of M (None when clean)."""
    return check_iso_on_elements(
        rho.apply, M, N, truncation_window(M, depth, per_component), M.signature.prefix(depth)
    )


# ---------------------------------------------------------------- union demo


def order_family_pair(enumerations: Sequence[CEEnumeration]) -> FamilyPair:
    """A_n = (omega, <) and B_n = (omega, <_{X_n}); indices past the list use (omega, <)."""
    enums = list(enumerations)
    return FamilyPair(
        lambda n: omega_order(),
        lambda n: order_x(enums[n]) if n < len(enums) else omega_order(),
        ORDER_SIG,
        "orders",
    )


@dataclass
class SpectrumRow:
    n: int
    set_name: str
    lift: str
    validated: bool
    extracted_index: int
    index_match: bool
    decode_match: bool
    theta_queries: int
    rho_queries: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.validated and self.index_match and self.decode_match


def _spectrum_row(n, e, membership, fp, M, N, depth, per_component, decode_bound):
    x_oracle = OracleSession.membership(membership, e.name)
    f = unique_iso_to_orderX(x_oracle, e)
    theta_session = OracleSession.for_iso(f, f"theta{n}")
    theta = theta_session.as_iso()
    if n == 0:
        rho, lift, need = lift_iso_base(theta, fp), "base", depth
    else:
        rho, lift, need = lift_iso_face(n - 1, theta, fp), f"face({n - 1},0)", max(depth, n)
    problem = validate_lift(rho, M, N, need, per_component)
    rho_session = OracleSession.for_iso(rho, f"rho{n}")
    index, extracted = extract_component_iso(rho_session.as_iso(), fp)
    f_session = OracleSession.for_iso(extracted, f"extracted{n}")
    decoded = [decode_x_from_iso(f_session, k) for k in range(decode_bound + 1)]
    truth = [bool(membership(k)) for k in range(decode_bound + 1)]
    return SpectrumRow(
        n=n,
        set_name=e.name,
        lift=lift,
        validated=problem is None,
        extracted_index=index,
        index_match=index == n,
        decode_match=decoded == truth,
        theta_queries=len(theta_session.log),
        rho_queries=len(rho_session.log),
        detail=problem or "",
    )


def union_spectrum_demo(
    set_names: Sequence[str],
    depth: int = 2,
    per_component: int = 4,
    decode_bound: int = 25,
    jobs: int = 1,
) -> list[SpectrumRow]:
    """Lift, validate, extract and decode one row per set.

    Row 0 lifts through the empty vertex with theta: A_0 -> B_0; row n >= 1
    lifts through the face (n-1, 0) with theta: A_n -> B_n.  Each row owns
    its oracle sessions.
    """
    if len(set(set_names)) != len(set_names):
        raise ValueError("sets must be pairwise distinct")
    enums = [CEEnumeration(STANDARD_SETS[s][0], s) for s in set_names]
    fp = order_family_pair(enums)
    M, N = build_MN(fp)
    args = [
        (n, e, STANDARD_SETS[e.name][1], fp, M, N, depth, per_component, decode_bound)
        for n, e in enumerate(enums)
    ]
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(lambda a: _spectrum_row(*a), args))
    return [_spectrum_row(*a) for a in args]


def format_report(rows: Sequence[SpectrumRow]) -> str:
    head = f"{'n':>2}  {'set':<8} {'lift':<10} {'validated':<9} {'index':>5} {'decode':<6} {'theta_q':>7} {'rho_q':>5}"
    lines = [head]
    for r in rows:
        lines.append(
            f"{r.n:>2}  {r.set_name:<8} {r.lift:<10} {str(r.validated):<9} "
            f"{r.extracted_index:>5} {str(r.decode_match):<6} {r.theta_queries:>7} {r.rho_queries:>5}"
        )
    return "\n".join(lines) + "\n"


def report_json(rows: Sequence[SpectrumRow]) -> str:
    return "\n".join(json.dumps(asdict(r), sort_keys=True) for r in rows) + "\n"


def component_tags(depth: int) -> dict[str, dict[str, str]]:
    """Which of A_k / B_k sits at each point of the depth-``depth`` truncation, for M and N."""
    out: dict[str, dict[str, str]] = {"M": {}, "N": {}}
    for z in truncation_elements(depth):
        label = str(decode_h(z))
        out["M"][label] = "%s%d" % select_M(z)
        out["N"][label] = "%s%d" % select_N(z)
    return out
