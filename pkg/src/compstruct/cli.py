"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 fuel exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import categoricity, composite, hypercube, orders, spectra, structures
from .core import (
    PERMUTATIONS,
    FuelExhausted,
    LimitExceeded,
    OracleSession,
    brute_force_isomorphisms,
    check_iso_on_elements,
    decode_pair,
    default_fuel_limit,
    permuted_copy,
    restrict_to_elements,
    restrict_to_finite,
)
from .export import to_dot, to_json_lines, to_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_FUEL = 0, 1, 2, 3


class VerificationFailed(Exception):
    pass


@dataclass
class RunConfig:
    fuel: int
    depth: int = 3
    seed: int = 0
    format: str = "text"

    def __post_init__(self):
        if self.fuel <= 0:
            raise ValueError("fuel must be positive")


class Output:
    def __init__(self, stream=None):
        self.stream = stream or sys.stdout

    def line(self, text: str = "") -> None:
        self.stream.write(text + "\n")

    def raw(self, text: str) -> None:
        self.stream.write(text)


def _emit(out: Output, cfg: RunConfig, fp, **dot_kw) -> None:
    if cfg.format == "json":
        out.raw(to_json_lines(fp))
    elif cfg.format == "dot":
        out.raw(to_dot(fp, **dot_kw))
    else:
        out.raw(to_text(fp))


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise VerificationFailed(message)


# ---------------------------------------------------------------- composite verbs


def _example(name: str, size: int):
    if name == "three-point":
        return structures.three_point_composite()
    if name == "minimal":
        return structures.minimal_composite()
    if name == "path":
        return composite.build_path_composite([structures.omega_order()] * size)
    raise VerificationFailed(f"unknown example {name!r}")


def cmd_compose(args, cfg, out):
    c = _example(args.example, args.size)
    base_points = c.base.take(args.size if args.example == "path" else 3)
    fp = restrict_to_elements(c, c.window(base_points, args.bound), c.signature.prefix(1))
    for z in fp.elements:
        _check(c.mu(c.mu(z)) == c.mu(z), f"mu is not idempotent at {z}")
    _emit(out, cfg, fp, family_names={0: "mu", 1: "E", 2: "<"})
    return EXIT_OK


def cmd_decompose(args, cfg, out):
    c = _example(args.example, args.size)
    p = permuted_copy(c, PERMUTATIONS[args.perm]) if args.perm != "identity" else c
    n_base = len(c.base.take(args.size if args.example == "path" else 3))
    base, family = composite.decompose(p, c.signature.layout, fuel=cfg.fuel)
    fb = restrict_to_finite(base, n_base)
    isos = brute_force_isomorphisms(fb, restrict_to_finite(c.base, n_base))
    _check(bool(isos), "decomposed base is not isomorphic to the original base")
    result = {"base": list(fb.elements), "base_isomorphisms": len(isos), "components": {}}
    for g in fb.elements:
        result["components"][str(g)] = len(family.member(g).take(args.bound))
    if cfg.format == "json":
        out.line(json.dumps(result, sort_keys=True))
    else:
        out.line(f"base points: {' '.join(map(str, fb.elements))}")
        out.line(f"base isomorphisms to the original: {len(isos)}")
        for g, n in result["components"].items():
            out.line(f"component at {g}: {n} elements listed (bound {args.bound})")
    return EXIT_OK


def _three_point_window(c, bound):
    return c.window((0, 1, 2), bound)


def cmd_glue(args, cfg, out):
    c = structures.three_point_composite()
    rho = structures.three_point_automorphism(swap=args.swap, shift=args.shift)
    window = _three_point_window(c, args.bound)
    problem = check_iso_on_elements(rho.apply, c, c, window, c.signature.prefix(1))
    _check(problem is None, f"glued map is not an automorphism: {problem}")
    rows = [(z, rho.apply(z)) for z in window]
    if cfg.format == "json":
        for z, w in rows:
            out.line(json.dumps({"from": z, "to": w}))
    else:
        for z, w in rows:
            out.line(f"{z} -> {w}")
    return EXIT_OK


def cmd_split(args, cfg, out):
    c = structures.three_point_composite()
    rho = structures.three_point_automorphism(swap=args.swap, shift=args.shift)
    theta, psi = composite.split_iso(rho, c, c)
    base = {x: theta.apply(x) for x in (0, 1, 2)}
    pieces = {}
    for x in (0, 1, 2):
        member = c.family.member(x)
        pieces[x] = [(decode_pair(a)[1], decode_pair(psi(x).apply(a))[1]) for a in member.take(args.bound)]
    glued = composite.glue_iso(theta, psi)
    for z in _three_point_window(c, args.bound):
        _check(glued.apply(z) == rho.apply(z), f"glue(split(rho)) differs from rho at {z}")
    if cfg.format == "json":
        out.line(json.dumps({"theta": base, "psi": {str(k): v for k, v in pieces.items()}}, sort_keys=True))
    else:
        out.line("theta: " + " ".join(f"{x}->{y}" for x, y in base.items()))
        for x, pairs in pieces.items():
            out.line(f"psi[{x}]: " + " ".join(f"{a}->{b}" for a, b in pairs))
    return EXIT_OK


# ---------------------------------------------------------------- hypercube verbs


def cmd_hcube_autos(args, cfg, out):
    autos = hypercube.enumerate_automorphisms_finite(args.n)
    matches = [hypercube.match_h_automorphism(m) for m in autos]
    _check(all(X is not None for X in matches), "an automorphism is not of the form h_X")
    _check(len(set(matches)) == len(autos) == 2**args.n, f"expected {2**args.n} distinct h_X, got {len(autos)}")
    for m, X in zip(autos, matches):
        label = "{" + ",".join(map(str, sorted(X))) + "}"
        if cfg.format == "json":
            out.line(json.dumps({"X": sorted(X), "map": {hypercube.h_label(k): hypercube.h_label(v) for k, v in m.items()}}))
        else:
            moved = " ".join(f"{hypercube.h_label(k)}->{hypercube.h_label(v)}" for k, v in m.items() if k != v)
            out.line(f"h_{label}: {moved or 'identity'}")
    if cfg.format == "text":
        out.line(f"{len(autos)} automorphisms, each equal to h_X")
    return EXIT_OK


def sample_h_codes(rng: random.Random, k: int, dims: int = 10) -> list[int]:
    out = []
    for _ in range(k):
        if rng.random() < 0.6:
            out.append(2 * rng.randrange(1 << dims))
        else:
            out.append(hypercube.Face(rng.randrange(dims), rng.randrange(2)).code)
    return out


def recover_check(perm_name: str, samples: int, seed: int, fuel_per_query: int):
    """Recover the isomorphism onto a scrambled copy; returns (mismatches, fact failures, max fuel)."""
    perm = PERMUTATIONS[perm_name]
    H = hypercube.hcube()
    copy = permuted_copy(H, perm, f"H/{perm_name}")
    f = hypercube.recover_iso(copy, perm(0), fuel_per_query=fuel_per_query)
    rng = random.Random(seed)
    codes = sample_h_codes(rng, samples)
    mismatches = [c for c in codes if f.apply(c) != perm(c)]
    bad_facts = 0
    for _ in range(samples):
        u, v = rng.choice(codes), rng.choice(codes)
        for i in range(10):
            for sym in (hypercube.e_sym(i), hypercube.d_sym(i)):
                if H.holds(sym, (u, v)) != copy.holds(sym, (f.apply(u), f.apply(v))):
                    bad_facts += 1
    return codes, mismatches, bad_facts, f.recovery.max_fuel_used


def cmd_hcube_recover(args, cfg, out):
    codes, mismatches, bad, used = recover_check(args.perm, args.samples, cfg.seed, min(cfg.fuel, args.fuel_per_query))
    if cfg.format == "json":
        out.line(json.dumps({"perm": args.perm, "samples": len(codes), "mismatches": len(mismatches), "fact_failures": bad, "max_fuel": used}))
    else:
        out.line(f"permutation {args.perm}: {len(codes) - len(mismatches)}/{len(codes)} samples recovered")
        out.line(f"fact failures: {bad}; max fuel per query: {used}")
    _check(not mismatches and not bad, "recovered map disagrees with the permutation")
    return EXIT_OK


def cmd_hcube_dot(args, cfg, out):
    fp = hypercube.truncation(args.n)
    if not args.faces:
        fp = fp.restrict([2 * m for m in range(1 << args.n)])
    out.raw(to_dot(fp, directed={hypercube.E: False, hypercube.D: True}, labels=hypercube.h_label, family_names={0: "E", 1: "D"}, name=f"H{args.n}"))
    return EXIT_OK


# ---------------------------------------------------------------- orders / spectra / categoricity


def cmd_orders_demo(args, cfg, out):
    e = orders.standard_enumeration(args.set)
    x_oracle = orders.membership_oracle(args.set)
    f = orders.unique_iso_to_orderX(x_oracle, e)
    iso_prefix = [f.apply(n) for n in range(args.n)]
    order_prefix = orders.sorted_window(e, 4 * args.n + 4)[: args.n]
    f_oracle = OracleSession.for_iso(f, "f")
    decoded = [k for k in range(args.n) if orders.decode_x_from_iso(f_oracle, k)]
    truth = [k for k in range(args.n) if orders.STANDARD_SETS[args.set][1](k)]
    _check(order_prefix == iso_prefix, "isomorphism prefix disagrees with the sorted order")
    _check(decoded == truth, "decoded set disagrees with the enumeration")
    if cfg.format == "json":
        out.line(json.dumps({"order_prefix": order_prefix, "iso_prefix": iso_prefix, "decoded": decoded, "x_queries": x_oracle.log, "f_queries": [list(q) for q in f_oracle.log]}))
    else:
        out.line("order prefix: " + " ".join(map(str, order_prefix)))
        out.line("iso prefix: " + " ".join(map(str, iso_prefix)))
        out.line(f"decoded X below {args.n}: " + " ".join(map(str, decoded)))
        out.line("X-oracle log: " + " ".join(map(str, x_oracle.log)))
        out.line("f-oracle log: " + " ".join(f"{k}({x})" for k, x in f_oracle.log))
    return EXIT_OK


def cmd_spectra_demo(args, cfg, out):
    names = [s for s in args.sets.split(",") if s]
    unknown = [s for s in names if s not in orders.STANDARD_SETS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown sets: {unknown}")
    rows = spectra.union_spectrum_demo(names, depth=cfg.depth, decode_bound=args.decode_bound, jobs=args.jobs)
    out.raw(spectra.report_json(rows) if cfg.format == "json" else spectra.format_report(rows))
    _check(all(r.ok for r in rows), "a spectrum row failed")
    return EXIT_OK


def catlab_roundtrip(samples: int, seed: int):
    """deuniformize a family of order isomorphisms, then uniformize it back.

    h(i) is the isomorphism omega -> omega<_X for X cycling through the
    standard sets, so the pieces differ and re-indexing mistakes show.
    """
    names = sorted(orders.STANDARD_SETS)
    enums = {s: orders.standard_enumeration(s) for s in names}
    isos = {s: orders.unique_iso_to_orderX(orders.membership_oracle(s), enums[s]) for s in names}
    pick = lambda i: names[i % len(names)]  # noqa: E731
    h = lambda i: isos[pick(i)]  # noqa: E731
    A = structures.omega_order()
    source = categoricity.constant_h(A, "A")
    target = categoricity.h_over(lambda z: orders.order_x(enums[pick(categoricity.eta_inverse(z))]), A.signature, "B")
    rho = categoricity.deuniformize(h)
    problem = check_iso_on_elements(rho.apply, source, target, spectra.truncation_window(source, 2, 3), source.signature.prefix(3))
    rho_session = OracleSession.for_iso(rho, "rho")
    h2 = categoricity.uniformize(rho_session.as_iso())
    rng = random.Random(seed)
    mismatches = 0
    for _ in range(samples):
        j, a = rng.randrange(8), rng.randrange(40)
        src = categoricity.EMPTY if j == 0 else hypercube.Face(j - 1, 0).code
        # the piece read back at index j is h at the eta-index of the point it was read from
        want = h(categoricity.eta_inverse(src))
        got = h2(j)
        if got.apply(a) != want.apply(a) or got.inverse_apply(a) != want.inverse_apply(a):
            mismatches += 1
    fixed = all(rho.apply(composite.base_code(z)) == composite.base_code(z) for z in range(64))
    return problem, mismatches, fixed, len(rho_session.log)


def cmd_catlab_roundtrip(args, cfg, out):
    problem, mismatches, fixed, q = catlab_roundtrip(args.samples, cfg.seed)
    if cfg.format == "json":
        out.line(json.dumps({"window_problem": problem, "mismatches": mismatches, "fixes_base": fixed, "rho_queries": q}))
    else:
        out.line(f"deuniformized map on depth-2 window: {'ok' if problem is None else problem}")
        out.line(f"fixes every sampled base point: {fixed}")
        out.line(f"uniformize(deuniformize(h)) mismatches: {mismatches}/{args.samples}")
    _check(problem is None and fixed and not mismatches, "categoricity round trip failed")
    return EXIT_OK


def cmd_verify(args, cfg, out):
    checks = []

    def record(name, ok):
        checks.append((name, ok))
        out.line(f"{'PASS' if ok else 'FAIL'} {name}")

    for n, want in ((1, 2), (2, 4), (3, 8)):
        autos = hypercube.enumerate_automorphisms_finite(n)
        record(f"hcube autos n={n}", len(autos) == want and all(hypercube.match_h_automorphism(m) is not None for m in autos))
    rng = random.Random(cfg.seed)
    ok = True
    for _ in range(1000):
        X, Y = rng.randrange(1 << 12), rng.randrange(1 << 12)
        z = rng.randrange(1 << 13)
        ok &= hypercube.h_apply_code(X, hypercube.h_apply_code(Y, z)) == hypercube.h_apply_code(X ^ Y, z)
    record("h_X o h_Y = h_(X^Y) on 1000 samples", ok)
    _, mism, bad, _ = recover_check("rot7", 30, cfg.seed, 10**5)
    record("recover scrambled copy", not mism and not bad)
    for name in orders.STANDARD_SETS:
        e = orders.standard_enumeration(name)
        f = orders.unique_iso_to_orderX(orders.membership_oracle(name), e)
        s = OracleSession.for_iso(f)
        record(f"order round trip {name}", all(orders.decode_x_from_iso(s, k) == orders.STANDARD_SETS[name][1](k) for k in range(26)))
    if not all(ok for _, ok in checks):
        raise VerificationFailed("verification battery failed")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    def global_flags(p, suppress):
        # subcommands repeat the flags without defaults so they don't clobber the top level
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--fuel", type=int, default=d(None), help="query budget (default $COMPSTRUCT_FUEL or 10^6)")
        p.add_argument("--seed", type=int, default=d(0))
        p.add_argument("--depth", type=int, default=d(None))
        p.add_argument("--format", choices=("text", "json", "dot"), default=d("text"))
        return p

    common = global_flags(argparse.ArgumentParser(add_help=False), True)
    parser = global_flags(argparse.ArgumentParser(prog="compstruct", description=__doc__), False)
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb, fn in (("compose", cmd_compose), ("decompose", cmd_decompose)):
        p = sub.add_parser(verb, parents=[common])
        p.add_argument("--example", choices=("three-point", "minimal", "path"), default="three-point")
        p.add_argument("--size", type=int, default=3, help="path length for --example path")
        p.add_argument("--bound", type=int, default=3, help="elements listed per component")
        if verb == "decompose":
            p.add_argument("--perm", choices=sorted(PERMUTATIONS), default="identity")
        p.set_defaults(fn=fn)

    for verb, fn in (("glue", cmd_glue), ("split", cmd_split)):
        p = sub.add_parser(verb, parents=[common])
        p.add_argument("--swap", action=argparse.BooleanOptionalAction, default=True)
        p.add_argument("--shift", type=int, default=0, help="translation applied to the Z component")
        p.add_argument("--bound", type=int, default=4)
        p.set_defaults(fn=fn)

    h = sub.add_parser("hcube").add_subparsers(dest="action", required=True)
    p = h.add_parser("autos", parents=[common])
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(fn=cmd_hcube_autos)
    p = h.add_parser("recover", parents=[common])
    p.add_argument("--perm", choices=sorted(PERMUTATIONS), default="rot7")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--fuel-per-query", type=int, default=10**5)
    p.set_defaults(fn=cmd_hcube_recover)
    p = h.add_parser("dot", parents=[common])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--faces", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(fn=cmd_hcube_dot)

    o = sub.add_parser("orders").add_subparsers(dest="action", required=True)
    p = o.add_parser("demo", parents=[common])
    p.add_argument("--set", choices=sorted(orders.STANDARD_SETS), default="evens")
    p.add_argument("--n", type=int, default=25)
    p.set_defaults(fn=cmd_orders_demo)

    s = sub.add_parser("spectra").add_subparsers(dest="action", required=True)
    p = s.add_parser("demo", parents=[common])
    p.add_argument("--sets", default="evens,squares,primes")
    p.add_argument("--decode-bound", type=int, default=25)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_spectra_demo)

    c = sub.add_parser("catlab").add_subparsers(dest="action", required=True)
    p = c.add_parser("roundtrip", parents=[common])
    p.add_argument("--samples", type=int, default=50)
    p.set_defaults(fn=cmd_catlab_roundtrip)

    p = sub.add_parser("verify", parents=[common])
    p.set_defaults(fn=cmd_verify)
    return parser


def run(argv=None, stdout=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    depth = args.depth
    if depth is None:
        depth = 2 if args.verb == "spectra" else 3
    try:
        cfg = RunConfig(fuel=default_fuel_limit() if args.fuel is None else args.fuel, depth=depth, seed=args.seed, format=args.format)
    except ValueError as exc:
        print(f"compstruct: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Output(stdout)
    try:
        return args.fn(args, cfg, out)
    except FuelExhausted as exc:
        print(f"compstruct: {exc}", file=sys.stderr)
        return EXIT_FUEL
    except (VerificationFailed, AssertionError) as exc:
        print(f"compstruct: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (LimitExceeded, argparse.ArgumentTypeError) as exc:
        print(f"compstruct: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
