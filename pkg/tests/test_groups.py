import pytest
from hypothesis import given, settings, strategies as st

from k1hecke.arith import tower
from k1hecke.groups import (BudgetExceeded, build_group, dominance_leq, dominant_below, elliptic_class,
                            gl_order, normalize_coweight, parabolic_datum, twisted_product, window_strata)

GROUPS = [(1, 2, "GL"), (1, 5, "GL"), (2, 2, "GL"), (2, 3, "GL"), (2, 3, "PGL"), (2, 4, "PGL"), (3, 2, "GL")]


def _gl_order_by_rows(N, q):
    # count bases row by row
    out = 1
    for i in range(N):
        out *= q ** N - q ** i
    return out


@pytest.mark.parametrize("N,q,kind", GROUPS)
def test_order(N, q, kind):
    G = build_group(N, q, kind)
    want = _gl_order_by_rows(N, q) // ((q - 1) if kind == "PGL" else 1)
    assert G.order == want
    assert gl_order(N, q) == _gl_order_by_rows(N, q)


@pytest.mark.parametrize("N,q,kind", GROUPS)
def test_class_equation(N, q, kind):
    G = build_group(N, q, kind)
    classes = G.conjugacy_classes
    assert sum(len(c) for c in classes) == G.order
    assert all(G.order % len(c) == 0 for c in classes)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_gl2_class_count(q):
    # GL(2, q) has q^2 - 1 conjugacy classes
    assert len(build_group(2, q).conjugacy_classes) == q * q - 1


@settings(max_examples=60, deadline=None)
@given(case=st.sampled_from(GROUPS), data=st.data())
def test_group_axioms(case, data):
    G = build_group(*case)
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    m = G.mul
    assert m[m[a, b], c] == m[a, m[b, c]]
    assert m[a, G.inv[a]] == G.identity
    assert G.from_matrix(G.matrix(a)) == a
    assert G.power(a, G.element_order(a)) == G.identity


def test_budget():
    with pytest.raises(BudgetExceeded):
        build_group(3, 3, budget=1000)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("lam", [(1, 0), (0, 0), (2, 0)])
def test_parabolic_orders(q, lam):
    G = build_group(2, q)
    d = parabolic_datum(lam, G)
    split = len(set(lam)) > 1
    assert len(d.U) == len(d.Um) == (q if split else 1)
    assert len(d.M) == ((q - 1) ** 2 if split else G.order)
    assert len(d.P) == len(d.M) * len(d.U)


@pytest.mark.parametrize("N,q,kind", [(2, 2, "GL"), (2, 3, "GL"), (2, 3, "PGL"), (3, 2, "GL")])
def test_twisted_product_orbit_count(N, q, kind):
    G = build_group(N, q, kind)
    for lam in [(1,) + (0,) * (N - 1), (0,) * N]:
        d = parabolic_datum(normalize_coweight(lam, kind), G)
        for sign in ("+-", "++"):
            X = twisted_product(d, sign)
            assert len(X) == X.expected_size()
            # the right group acts freely, so the base stabilizer has the complementary size
            assert len(X.stabilizer_of_base()) * len(X) == G.order ** 2


@pytest.mark.parametrize("q", [2, 3, 4])
def test_elliptic_classes(q):
    G = build_group(2, q)
    T = tower(q, 2)
    seen = set()
    for D in T.divisors_of_degree(2):
        Om = elliptic_class(D.rep, G, T)
        assert len(Om.members) == q * q - q
        # Frobenius conjugates give the same class
        assert elliptic_class(T.frob(D.rep), G, T).members == Om.members
        seen.add(Om.members)
    assert len(seen) == (q * q - q) // 2


def test_elliptic_class_rejects_base_field():
    G = build_group(2, 3)
    with pytest.raises(ValueError):
        elliptic_class(tower(3, 2).from_base(2), G)


def test_dominance():
    assert dominance_leq((1, 1), (2, 0))
    assert not dominance_leq((2, 0), (1, 1))
    assert not dominance_leq((1, 0), (2, 0))
    assert set(dominant_below((2, 0))) == {(1, 1), (2, 0)}
    assert set(window_strata(((0, 0), (2, 0)))) == {(0, 0), (1, 1), (2, 0)}
    # PGL coweights are taken modulo the diagonal
    assert normalize_coweight((3, 2), "PGL") == normalize_coweight((1, 0), "PGL")
