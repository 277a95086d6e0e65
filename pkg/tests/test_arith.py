import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF as SymGF, Poly, divisors, mobius, symbols

from k1hecke.arith import Scalar, gf, neg_inv_sqrt_q, tower
from k1hecke.arith import fqlinalg

QS = [2, 3, 4, 5, 7, 8, 9]


# -- finite fields -------------------------------------------------------------------

@pytest.mark.parametrize("q", QS)
def test_gf_field_axioms_exhaustive(q):
    F = gf(q)
    els = list(F.elements())
    assert len(els) == q
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, q - 1) == 1
    # the multiplicative group is cyclic: some element has order q - 1
    orders = {min(e for e in range(1, q) if F.pow(a, e) == 1) for a in F.nonzero()}
    assert q - 1 in orders


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_field_is_integers_mod_p(p):
    F = gf(p)
    for a in range(p):
        for b in range(p):
            assert F.add(a, b) == (a + b) % p
            assert F.mul(a, b) == (a * b) % p


@settings(max_examples=60, deadline=None)
@given(q=st.sampled_from(QS), data=st.data())
def test_gf_distributive(q, data):
    F = gf(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(a, b) == F.mul(b, a)


# -- towers --------------------------------------------------------------------------

def _irreducible_count(q, i):
    """Monic irreducibles of degree i over F_q other than z (necklace count)."""
    n = sum(mobius(d) * q ** (i // d) for d in divisors(i)) // i
    return n - (1 if i == 1 else 0)


@pytest.mark.parametrize("q,top", [(2, 4), (2, 6), (3, 4), (4, 2), (5, 2), (3, 3)])
def test_divisor_counts_match_necklace_formula(q, top):
    T = tower(q, top)
    for i in range(1, top + 1):
        if top % i == 0:
            Ds = T.divisors_of_degree(i)
            assert len(Ds) == _irreducible_count(q, i)
            assert all(len(set(D.orbit)) == i for D in Ds)


@pytest.mark.parametrize("q,top", [(2, 4), (3, 2), (5, 2), (3, 3)])
def test_minpoly_irreducible_by_sympy(q, top):
    z = symbols("z")
    T = tower(q, top)
    for i in range(1, top + 1):
        if top % i:
            continue
        for D in T.divisors_of_degree(i):
            c = D.minpoly()
            assert len(c) == i + 1 and c[-1] == 1
            P = Poly(list(reversed(c)), z, domain=SymGF(q))
            assert P.is_irreducible


@settings(max_examples=80, deadline=None)
@given(case=st.sampled_from([(2, 4), (2, 6), (3, 4), (4, 2), (3, 2)]), data=st.data())
def test_norm_multiplicative_and_transitive(case, data):
    q, top = case
    T = tower(q, top)
    units = T.subfield_units(top)
    x = data.draw(st.sampled_from(units))
    y = data.draw(st.sampled_from(units))
    big = T.big
    for j in range(1, top + 1):
        if top % j:
            continue
        nx = T.norm(x, top, j)
        assert T.in_subfield(nx, j)
        assert T.norm(big.mul(x, y), top, j) == big.mul(nx, T.norm(y, top, j))
        for k in range(1, j + 1):
            if j % k == 0:
                assert T.norm(nx, j, k) == T.norm(x, top, k)


@pytest.mark.parametrize("q,top", [(2, 4), (3, 4), (4, 2)])
def test_generators_are_norm_compatible(q, top):
    T = tower(q, top)
    for i in range(1, top + 1):
        if top % i:
            continue
        g = T.generator(i)
        assert T.log_in(g, i) == 1 % (q ** i - 1)
        assert len(set(T.subfield_units(i))) == q ** i - 1
        for j in range(1, i + 1):
            if i % j == 0:
                assert T.norm(g, i, j) == T.generator(j)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_base_field_embedding_is_a_homomorphism(q):
    T = tower(q, 2)
    k = gf(q)
    for a in range(q):
        assert T.to_base(T.from_base(a)) == a
        for b in range(q):
            assert T.from_base(k.mul(a, b)) == T.big.mul(T.from_base(a), T.from_base(b))
            assert T.from_base(k.add(a, b)) == T.big.add(T.from_base(a), T.from_base(b))


# -- scalars ------------------------------------------------------------------------

def _num(x):
    return complex(x)


scalars = st.builds(
    lambda m, cs: sum((Scalar.zeta(m, k) * Fraction(c, 3) for k, c in enumerate(cs)), Scalar(0)),
    st.sampled_from([1, 2, 3, 4, 5, 6, 8, 12]),
    st.lists(st.integers(-4, 4), min_size=1, max_size=5),
)


@settings(max_examples=100, deadline=None)
@given(a=scalars, b=scalars, c=scalars)
def test_scalar_ring_laws_against_complex(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert cmath.isclose(_num(a * b + c), _num(a) * _num(b) + _num(c), abs_tol=1e-9)


@settings(max_examples=60, deadline=None)
@given(a=scalars)
def test_scalar_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == 1
        assert cmath.isclose(_num(a.inverse()), 1 / _num(a), rel_tol=1e-9)


@settings(max_examples=60, deadline=None)
@given(a=scalars)
def test_conj_is_complex_conjugation(a):
    assert cmath.isclose(_num(a.conj()), _num(a).conjugate(), abs_tol=1e-9)
    assert a.conj().conj() == a


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 8, 9, 12])
def test_roots_of_unity(m):
    z = Scalar.zeta(m)
    assert z ** m == 1
    assert sum((Scalar.zeta(m, k) for k in range(m)), Scalar(0)) == (1 if m == 1 else 0)
    assert z ** -1 == Scalar.zeta(m, -1)


@pytest.mark.parametrize("q", [2, 3, 5, 9])
def test_sqrt_q(q):
    r = Scalar.sqrt_q(q)
    assert r * r == q
    c = neg_inv_sqrt_q(q)
    assert c * c == Fraction(1, q)
    assert complex(c).real < 0


def test_mixed_conductors_and_galois():
    a = Scalar.zeta(3) + Scalar.zeta(4)
    assert a.m == 12
    assert a.galois(5) == Scalar.zeta(3, 5) + Scalar.zeta(4, 5)
    assert Scalar.zeta(8) ** 2 == Scalar.zeta(4)


def test_scalar_unhashable():
    with pytest.raises(TypeError):
        hash(Scalar(1))


# -- F_q linear algebra --------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(q=st.sampled_from([2, 3, 4, 5]), data=st.data())
def test_fq_inverse_and_rank(q, data):
    F = gf(q)
    n = data.draw(st.integers(1, 3))
    A = [[data.draw(st.integers(0, q - 1)) for _ in range(n)] for _ in range(n)]
    r = fqlinalg.rank(F, A)
    if fqlinalg.det(F, A):
        assert r == n
        assert fqlinalg.mat_mul(F, A, fqlinalg.inverse(F, A)) == fqlinalg.identity(n)
    else:
        assert r < n
        assert len(fqlinalg.nullspace(F, A)) == n - r
