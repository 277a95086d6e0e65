import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from k1hecke.arith import Scalar
from k1hecke.funspace import (Fn, convolve, cuspidal_projector, e_fin, generating_set, radon, radon_data,
                              standard_coweights)
from k1hecke.groups import build_group, parabolic_datum


def _dense(L):
    n, m = L.matrix.nrows(), L.matrix.ncols()
    return np.array([[float(L.entry(i, j)) for j in range(m)] for i in range(n)])


@pytest.mark.parametrize("N,q", [(2, 2), (2, 3), (2, 4), (3, 2)])
def test_radon_invertible_by_two_routes(N, q):
    G = build_group(N, q)
    for lam in standard_coweights(N):
        R = radon(parabolic_datum(lam, G))
        assert R.is_invertible()
        # floating point rank as an independent route
        assert np.linalg.matrix_rank(_dense(R)) == R.matrix.nrows()


def test_standard_coweights_count():
    # one per composition of N
    assert [len(standard_coweights(N)) for N in (1, 2, 3, 4)] == [1, 2, 4, 8]


@pytest.mark.parametrize("q", [2, 3])
def test_radon_entries_count_intersections(q):
    G = build_group(2, q)
    d = parabolic_datum((1, 0), G)
    R = radon_data(d)
    U, Um = set(d.U), set(d.Um)
    for a in range(R.source.size):
        ra = R.source.reps[a]
        aUm = {int(G.mul[ra, u]) for u in Um}
        for g in range(R.target.size):
            gU = {int(G.mul[R.target.reps[g], u]) for u in U}
            assert R.map.entry(g, a) == len(aUm & gU)


@pytest.mark.parametrize("q", [2, 3])
def test_radon_equivariance(q):
    G = build_group(2, q)
    d = parabolic_datum((1, 0), G)
    assert radon_data(d).equivariance_failures(generating_set(G), generating_set(G, d.M)) == []


@pytest.mark.parametrize("N,q,kind", [(2, 2, "GL"), (2, 3, "GL"), (2, 3, "PGL")])
def test_generating_set_generates(N, q, kind):
    G = build_group(N, q, kind)
    gens = generating_set(G)
    span = {G.identity}
    frontier = [G.identity]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = int(G.mul[x, g])
            if y not in span:
                span.add(y)
                frontier.append(y)
    assert len(span) == G.order


@pytest.mark.parametrize("q,kind,rank", [(2, "GL", 1), (3, "GL", 12), (2, "PGL", 1), (3, "PGL", 4)])
def test_cuspidal_projector_rank(q, kind, rank):
    # GL(2, q): (q^2 - q)/2 cuspidals of dimension q - 1; PGL(2, 3): one of dimension 2
    P = cuspidal_projector(build_group(2, q, kind))
    assert P.rank() == rank
    assert P.compose(P).matrix == P.matrix


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_convolution_associative_and_unit(data):
    G = build_group(2, 2)
    fns = [Fn(G, {data.draw(st.integers(0, 5)): data.draw(st.integers(-2, 2)) for _ in range(2)})
           for _ in range(3)]
    a, b, c = fns
    assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))
    assert convolve(Fn.delta(G, G.identity), a) == a
    e = e_fin(G)
    assert convolve(e, e) == e
