import random

import pytest
from hypothesis import given, strategies as st

from compstruct.core import (
    PERMUTATIONS,
    FuelExhausted,
    InvariantViolation,
    LimitExceeded,
    permuted_copy,
    restrict_to_elements,
)
from compstruct.export import to_dot
from compstruct.hypercube import (
    D,
    E,
    Face,
    HAutomorphism,
    Vertex,
    classify_element,
    d_sym,
    decode_h,
    e_sym,
    enumerate_automorphisms_finite,
    h_apply,
    h_apply_code,
    h_compose,
    h_label,
    hcube,
    match_h_automorphism,
    recover_iso,
    truncation,
    truncation_elements,
)

from golden import GOLDEN_D, GOLDEN_E
from oracles import as_key_set, naive_isomorphisms

def edge_labels(fp, family, index):
    return {(h_label(a), h_label(b)) for s, (a, b) in fp.facts if s.family == family and s.index == index}


def test_codes():
    assert Vertex.of().code == 0 and Vertex.of(0, 2).code == 10
    assert Face(0, 0).code == 1 and Face(0, 1).code == 3 and Face(2, 1).code == 11
    assert decode_h(10) == Vertex.of(0, 2) and decode_h(11) == Face(2, 1)
    assert str(Vertex.of(1, 0)) == "{0,1}" and str(Face(3, 0)) == "(3,0)"


def test_three_dimensional_truncation_matches_drawings():
    t = truncation(3)
    vertices = [2 * m for m in range(8)]
    for i in range(3):
        undirected = {tuple(sorted(p, key=lambda s: (len(s), s))) for p in edge_labels(t, E, i)}
        assert undirected == {tuple(sorted(p, key=lambda s: (len(s), s))) for p in GOLDEN_E[i]}
        assert edge_labels(t, D, i) == GOLDEN_D[i]
    # E is symmetric, and every vertex has exactly one outgoing D_i edge
    for s, (a, b) in t.facts:
        if s.family == E:
            assert (s, (b, a)) in t.facts
    for v in vertices:
        for i in range(3):
            assert sum(1 for s, (a, _) in t.facts if s.family == D and s.index == i and a == v) == 1


def test_relations_reject_mixed_kinds():
    H = hcube()
    assert not H.holds(e_sym(0), (0, 1))  # vertex and face
    assert not H.holds(d_sym(0), (1, 0))  # wrong direction
    assert not H.holds(d_sym(1), (0, Face(0, 0).code))  # index mismatch
    assert H.holds(d_sym(4), (Vertex.of(4).code, Face(4, 1).code))


def test_h_apply_examples():
    X = {0, 2}
    assert h_apply(X, Vertex.of(0, 1)) == Vertex.of(1, 2)
    assert h_apply(X, Face(0, 0)) == Face(0, 1)
    assert h_apply(X, Face(1, 0)) == Face(1, 0)
    assert h_apply(X, Face(2, 1)) == Face(2, 0)
    assert h_apply(set(), Vertex.of(5)) == Vertex.of(5)


sets = st.frozensets(st.integers(0, 20), max_size=8)
codes = st.one_of(
    st.integers(0, 2**21).map(lambda m: 2 * m),
    st.tuples(st.integers(0, 25), st.integers(0, 1)).map(lambda t: Face(*t).code),
)


@given(sets, sets, codes)
def test_composition_law(X, Y, z):
    assert h_apply_code(X, h_apply_code(Y, z)) == h_apply_code(h_compose(X, Y), z)


@given(sets, codes)
def test_h_is_an_involution(X, z):
    assert h_apply_code(X, h_apply_code(X, z)) == z


@given(sets, codes, codes, st.integers(0, 21))
def test_h_preserves_relations(X, a, b, i):
    H = hcube()
    h = HAutomorphism(X)
    ha, hb = h.as_iso().apply(a), h.as_iso().apply(b)
    for sym in (e_sym(i), d_sym(i)):
        assert H.holds(sym, (a, b)) == H.holds(sym, (ha, hb))


@pytest.mark.parametrize("n,count", [(1, 2), (2, 4), (3, 8), (4, 16)])
def test_automorphism_counts_and_shape(n, count):
    autos = enumerate_automorphisms_finite(n)
    assert len(autos) == count
    found = {match_h_automorphism(m) for m in autos}
    assert None not in found
    assert found == {frozenset(i for i in range(n) if k >> i & 1) for k in range(2**n)}


@pytest.mark.parametrize("n", [1, 2])
def test_automorphisms_against_naive_oracle(n):
    t = truncation(n)
    assert as_key_set(enumerate_automorphisms_finite(n)) == as_key_set(naive_isomorphisms(t, t))


def test_brute_force_limit_guard():
    with pytest.raises(LimitExceeded):
        enumerate_automorphisms_finite(5)


def test_match_rejects_non_h_maps():
    assert match_h_automorphism({0: 2, 2: 2}) is None
    assert match_h_automorphism({0: 1}) is None
    assert match_h_automorphism({2: 0}) is None


def test_classify_on_h_itself():
    H = hcube()
    assert classify_element(H, Vertex.of(3, 5).code).kind == "vertex"
    assert classify_element(H, Face(6, 1).code) == ("face", 6)


def test_classify_runs_out_of_fuel():
    with pytest.raises(FuelExhausted):
        classify_element(hcube(), Face(30, 0).code, fuel=200)


def sample(rng, k):
    out = []
    for _ in range(k):
        if rng.random() < 0.6:
            out.append(2 * rng.randrange(1 << 10))
        else:
            out.append(Face(rng.randrange(10), rng.randrange(2)).code)
    return out


@pytest.mark.parametrize("name", ["rot4", "rot7", "rot16"])
def test_recover_reproduces_permutation(name):
    perm = PERMUTATIONS[name]
    copy = permuted_copy(hcube(), perm)
    f = recover_iso(copy, perm(0), fuel_per_query=10**5)
    for c in sample(random.Random(1), 30):
        assert f.apply(c) == perm(c)
        assert f.inverse_apply(perm(c)) == c
    assert f.recovery.max_fuel_used <= 10**5


def test_recover_from_another_vertex_gives_h_x_composed():
    # starting at the image of {1} instead of {} yields perm o h_{1}
    perm = PERMUTATIONS["rot4"]
    copy = permuted_copy(hcube(), perm)
    f = recover_iso(copy, perm(Vertex.of(1).code), fuel_per_query=10**5)
    for c in sample(random.Random(2), 20):
        assert f.apply(c) == perm(h_apply_code({1}, c))


def test_recover_refuses_a_face():
    with pytest.raises(InvariantViolation):
        recover_iso(hcube(), Face(0, 0).code)


def test_dot_export_of_truncation():
    dot = to_dot(truncation(2), directed={E: False, D: True}, labels=h_label, family_names={0: "E", 1: "D"})
    assert dot.count("dir=none") == 4  # one per undirected square edge
    assert 'n0 -> n1 [color="red", label="D0"];' in dot
    assert 'n0 -> n4 [color="blue", label="E1", dir=none];' in dot
