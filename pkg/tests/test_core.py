import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from compstruct.core import (
    PERMUTATIONS,
    BlockRotation,
    FinitePresentation,
    Fuel,
    FuelExhausted,
    LazyIso,
    OracleSession,
    Signature,
    Family,
    TagMismatch,
    TaggedCopy,
    brute_force_isomorphisms,
    check_iso_on_elements,
    decode_pair,
    default_fuel_limit,
    encode_pair,
    is_isomorphism,
    permuted_copy,
    restrict_to_finite,
    retag_copy,
    search_universe,
    tagged_map,
    transport,
)
from compstruct.structures import DIGRAPH_SIG, finite_digraph, integers_order, omega_order, zigzag, unzigzag

from oracles import as_key_set, naive_isomorphisms


def test_pairing_round_trip_first_thousand():
    for z in range(1000):
        assert encode_pair(*decode_pair(z)) == z


def test_pairing_small_values():
    assert [encode_pair(a, b) for a, b in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]] == [0, 1, 2, 3, 4, 5]


@given(st.integers(0, 10**12), st.integers(0, 10**12))
def test_pairing_inverts(a, b):
    assert decode_pair(encode_pair(a, b)) == (a, b)


def test_zigzag():
    assert [unzigzag(c) for c in range(7)] == [0, -1, 1, -2, 2, -3, 3]
    assert all(zigzag(unzigzag(c)) == c for c in range(200))


def test_signature_symbol_ids():
    sig = Signature((Family("E", 2, indexed=True), Family("D", 2, indexed=True)))
    s = sig.symbol(1, 3)
    assert str(s) == "R1.3" and sig.from_id(s.id) == s
    assert not sig.finite
    with pytest.raises(FuelExhausted):
        sig.all_symbols()


def test_holds_rejects_wrong_arity_and_is_false_outside():
    p = finite_digraph([0, 1], [(0, 1)])
    e = DIGRAPH_SIG.symbol(0)
    with pytest.raises(ValueError):
        p.holds(e, (0,))
    assert p.holds(e, (0, 1)) and not p.holds(e, (0, 7))


def test_restrict_to_finite_omega():
    fp = restrict_to_finite(omega_order(), 4)
    assert fp.elements == (0, 1, 2, 3)
    assert {t for _, t in fp.facts} == {(a, b) for a in range(4) for b in range(4) if a < b}


def test_restrict_to_finite_integers():
    fp = restrict_to_finite(integers_order(), 3)
    # codes 0, 1, 2 are the integers 0, -1, 1
    assert {t for _, t in fp.facts} == {(1, 0), (0, 2), (1, 2)}


def test_restrict_rejects_nonpositive_bound():
    with pytest.raises(ValueError):
        restrict_to_finite(omega_order(), 0)


def test_fuel_runs_out():
    f = Fuel(3)
    f.spend()
    f.spend(2)
    with pytest.raises(FuelExhausted):
        f.spend()


def test_default_fuel_from_env(monkeypatch):
    monkeypatch.setenv("COMPSTRUCT_FUEL", "77")
    assert default_fuel_limit() == 77
    monkeypatch.delenv("COMPSTRUCT_FUEL")
    assert default_fuel_limit() == 10**6


def test_search_universe_exhausts_fuel():
    with pytest.raises(FuelExhausted):
        search_universe(omega_order(), lambda c: c < 0, Fuel(50), "negative")
    assert search_universe(omega_order(), lambda c: c > 9, Fuel(50), "big") == 10


digraphs = st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * n),
    )
)


def as_fp(n, edges, codes=None):
    codes = list(range(n)) if codes is None else codes
    p = finite_digraph(codes, [(codes[a], codes[b]) for a, b in edges])
    return restrict_to_finite(p, n)


@given(digraphs, st.randoms(use_true_random=False))
def test_brute_force_matches_naive(g, rnd):
    n, edges = g
    f1 = as_fp(n, edges)
    codes = list(range(10, 10 + n))
    rnd.shuffle(codes)
    f2 = as_fp(n, edges, codes)
    found = brute_force_isomorphisms(f1, f2)
    assert as_key_set(found) == as_key_set(naive_isomorphisms(f1, f2))
    assert found  # f2 is a relabelling of f1
    assert all(is_isomorphism(m, f1, f2) for m in found)


@given(digraphs, digraphs)
def test_brute_force_matches_naive_unrelated(g1, g2):
    f1, f2 = as_fp(*g1), as_fp(*g2)
    assert as_key_set(brute_force_isomorphisms(f1, f2)) == as_key_set(naive_isomorphisms(f1, f2))


def test_brute_force_results_in_lexicographic_order():
    f = as_fp(4, [])
    found = brute_force_isomorphisms(f, f)
    assert [tuple(m[k] for k in range(4)) for m in found] == list(itertools.permutations(range(4)))


def vectorised_automorphism_count(adj: np.ndarray) -> int:
    """Count permutations P with P A P^T = A by checking all of them at once."""
    n = adj.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    permuted = adj[perms[:, :, None], perms[:, None, :]]
    return int(np.all(permuted == adj, axis=(1, 2)).sum())


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_brute_force_against_vectorised_count_nine_elements(seed):
    rng = random.Random(seed)
    n = 9
    # sparse random digraph plus a symmetric cycle, so the group is nontrivial
    edges = {(k, (k + 1) % n) for k in range(n)} | {((k + 1) % n, k) for k in range(n)}
    if seed:
        edges |= {(rng.randrange(n), rng.randrange(n)) for _ in range(seed * 2)}
    f = as_fp(n, edges)
    adj = np.zeros((n, n), dtype=bool)
    for a, b in edges:
        adj[a, b] = True
    assert len(brute_force_isomorphisms(f, f)) == vectorised_automorphism_count(adj)


def test_brute_force_limit():
    f = as_fp(5, [])
    assert len(brute_force_isomorphisms(f, f, limit=7)) == 7


def test_check_iso_on_elements_reports_failure():
    shift = lambda c: c + 1  # noqa: E731
    assert check_iso_on_elements(shift, omega_order(), omega_order(), range(5), omega_order().signature.prefix(1)) is None
    assert check_iso_on_elements(lambda c: 4 - c, omega_order(), omega_order(), range(5), omega_order().signature.prefix(1))


def test_lazy_iso_memo_inverse_and_composition():
    calls = []

    def fwd(x):
        calls.append(x)
        return x + 3

    f = LazyIso(fwd, lambda y: y - 3)
    assert f.apply(2) == 5 and f.apply(2) == 5 and calls == [2]
    assert f.inverse().apply(5) == 2
    g = f.then(LazyIso.from_dict({5: 0, 0: 5}))
    assert g.apply(2) == 0 and g.inverse_apply(0) == 2


def test_oracle_session_logs_every_query():
    s = OracleSession.membership(lambda k: k % 2 == 0)
    assert [s.query(k) for k in (1, 2, 2)] == [False, True, True]
    assert s.log == [1, 2, 2]
    f = OracleSession.for_iso(LazyIso(lambda x: x + 1, lambda y: y - 1))
    assert f.as_iso().apply(3) == 4 and f.as_iso().inverse_apply(4) == 3
    assert f.log == [("f", 3), ("f_inv", 4)]
    with pytest.raises(ValueError):
        f.query(("g", 0))


def test_tagged_copy_and_transports():
    t = TaggedCopy(5, omega_order())
    c = t.tagged(3)
    assert decode_pair(c) == (5, 3) and t.untag(c) == 3
    with pytest.raises(TagMismatch):
        t.untag(encode_pair(4, 3))
    u, iso = retag_copy(t, 9)
    assert iso.apply(c) == u.tagged(3)
    assert transport(5, 9).inverse_apply(u.tagged(3)) == c
    doubled = tagged_map(LazyIso(lambda a: 2 * a, lambda b: b // 2), 5, 9)
    assert doubled.apply(c) == encode_pair(9, 6)


@pytest.mark.parametrize("name", sorted(PERMUTATIONS))
def test_block_rotations_are_bijections(name):
    perm = PERMUTATIONS[name]
    img = [perm(c) for c in range(4 * 7 * 16)]
    assert sorted(img) == list(range(4 * 7 * 16))
    assert all(perm.inverse(perm(c)) == c for c in range(500))


def test_block_rotation_shape():
    r = BlockRotation(4, 1)
    assert [r(c) for c in range(8)] == [1, 2, 3, 0, 5, 6, 7, 4]


def test_permuted_copy_is_isomorphic():
    p = finite_digraph(range(6), [(0, 1), (1, 2), (2, 0), (3, 4)])
    q = permuted_copy(p, PERMUTATIONS["rot4"])
    perm = PERMUTATIONS["rot4"]
    assert check_iso_on_elements(perm, p, q, range(6), DIGRAPH_SIG.prefix(1)) is None


def test_finite_presentation_rejects_dangling_fact():
    with pytest.raises(Exception):
        FinitePresentation((0,), frozenset({(DIGRAPH_SIG.symbol(0), (0, 1))}))
