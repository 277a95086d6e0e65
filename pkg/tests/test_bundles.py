import random

import pytest
from hypothesis import given, settings, strategies as st

from k1hecke import poly
from k1hecke.bundles import (NotInvertible, act_map, birkhoff, canonical_form, delta_point, h0_dimension,
                             iota, iota_map, point_census, point_transition, random_positive_loop,
                             raw_transition_census, sigma_map, splitting_type, v_space)
from k1hecke.funspace import LinearMap
from k1hecke.groups import build_group, normalize_coweight, parabolic_datum, twisted_product
from k1hecke.loophecke import HeckeElement, hecke_basis, loop_matrix, random_loop_group_element


@settings(max_examples=40, deadline=None)
@given(case=st.sampled_from([(2, 2), (2, 3), (3, 2)]), seed=st.integers(0, 10 ** 6),
       lam=st.sampled_from([(2, 0, 0), (1, 1, 0), (1, 0, -1), (0, 0, 0), (3, 1, 1)]))
def test_birkhoff_type_matches_h0_oracle(case, seed, lam):
    N, q = case
    G = build_group(N, q)
    lam = lam[:N]
    lam = tuple(sorted(lam, reverse=True))
    rng = random.Random(seed)
    a = random_positive_loop(G, rng, steps=3, degree=2)
    a = poly.mat_mul(loop_matrix(G, rng.randrange(G.order)), a)
    g = poly.mat_mul(poly.mat_mul(a, poly.diag_monomials(G.F, lam)), loop_matrix(G, rng.randrange(G.order)))
    bk = birkhoff(g)
    assert tuple(sorted(bk.exps, reverse=True)) == lam
    assert splitting_type(G, g) == lam
    assert canonical_form(G, g)[0] == lam


@pytest.mark.parametrize("a,b", [(0, 0), (2, 0), (1, 1), (3, -1)])
def test_h0_of_split_bundles(a, b):
    G = build_group(2, 3)
    g = poly.diag_monomials(G.F, (a, b))
    for m in range(-5, 4):
        assert h0_dimension(G, g, m) == max(0, a + m + 1) + max(0, b + m + 1)


def test_birkhoff_rejects_non_monomial_determinant():
    G = build_group(2, 3)
    rng = random.Random(1)
    while True:
        g = random_loop_group_element(G, rng, 1)
        if not poly.det(g).is_monomial():
            break
    with pytest.raises(NotInvertible):
        birkhoff(g)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("lam", [(0, 0), (1, 0), (2, 0), (1, 1)])
def test_point_census(q, lam):
    G = build_group(2, q)
    r = point_census(G, lam)
    assert r["twisted_product"] == r["oracle"]


def test_raw_transition_census_gl2():
    G = build_group(2, 2)
    assert raw_transition_census(G, (1, 0), 1) == len(twisted_product(parabolic_datum((1, 0), G), "++"))


@pytest.mark.parametrize("kind", ["GL", "PGL"])
def test_point_transition_round_trip(kind):
    G = build_group(2, 3, kind)
    lam = normalize_coweight((2, 0), kind)
    for z0 in (1, 2):
        for pt in range(len(twisted_product(parabolic_datum(lam, G), "++"))):
            assert canonical_form(G, point_transition(G, lam, pt, z0), z0) == (lam, pt)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_positive_loops_give_trivial_bundles(seed):
    G = build_group(2, 3)
    g = random_positive_loop(G, random.Random(seed), steps=4, degree=2)
    assert splitting_type(G, g) == (0, 0)
    assert canonical_form(G, g) == delta_point(G)


@pytest.mark.parametrize("kind", ["GL", "PGL"])
@pytest.mark.parametrize("z0", [1, 2])
def test_act_invertible_and_sigma_involution(kind, z0):
    G = build_group(2, 3, kind)
    w = (normalize_coweight((1, 0), kind),)
    assert act_map(G, w, z0).is_invertible()
    S = sigma_map(G, w, z0)
    assert S.compose(S).matrix == LinearMap.identity(v_space(G, w)).matrix


@pytest.mark.parametrize("kind", ["GL", "PGL"])
def test_iota_is_an_involution(kind):
    G = build_group(2, 2, kind)
    w = (normalize_coweight((1, 0), kind),)
    I = iota_map(G, w)
    assert I.compose(I).matrix == LinearMap.identity(hecke_basis(G, w)).matrix
    B = hecke_basis(G, w)
    for key in B.points[:6]:
        a = HeckeElement(B, {key: 1})
        assert iota(iota(a)) == a
