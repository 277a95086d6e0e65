"""Cuspidal characters of GL(2)/PGL(2) over F_q and the η scalars of divisor operators.

Characters come from the Gelfand–Graev module F[G]·e_ψ, which is
multiplicity free: the commutant e_ψ F[G] e_ψ is commutative and split, so
its primitive idempotents cut out the generic irreducibles one by one.  The
linear algebra runs over F_P for a prime P ≡ 1 modulo the exponent, and
values are lifted to Z[ζ] from eigenvalue multiplicities.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np
from flint import nmod_mat, nmod_poly
from sympy import isprime
from sympy.ntheory import primitive_root

from .arith import Scalar, tower
from .bundles import central_point_element
from .groups import FiniteGroup, build_group, elliptic_class, normalize_coweight, parabolic_datum, twisted_product


class OracleDegenerate(RuntimeError):
    pass


class MatchError(RuntimeError):
    pass


class NotScalar(AssertionError):
    """The operator is not a scalar on an isotypic block."""


# -- pairs ------------------------------------------------------------------------

@dataclass(frozen=True)
class DLPair:
    """An elliptic torus k_n^× of the group over k_a (n = a·N) with θ(g_n^e) = ζ^{j e}.

    g_n is the tower generator of k_n^× and ζ = ζ_{q^n - 1}.  For PGL the
    character is trivial on k_a^×.
    """
    q: int
    N: int
    kind: str
    j: int
    a: int = 1

    @property
    def n(self) -> int:
        return self.a * self.N

    @property
    def order(self) -> int:
        return self.q ** self.n - 1

    def theta(self, y: int, T=None) -> Scalar:
        """θ at y ∈ k_n^×, y an element of the tower T (default tower(q, n)).

        Logs are taken against T's generator of k_n^×, so labels j are
        relative to the tower in use.
        """
        T = T or tower(self.q, self.n)
        e = T.log_in(y, self.n)
        return Scalar.zeta(self.order, self.j * e) if self.order > 1 else Scalar(1)

    def frobenius(self) -> "DLPair":
        """θ -> θ^Q with Q = q^a."""
        return DLPair(self.q, self.N, self.kind, (self.j * self.q ** self.a) % self.order, self.a)

    def is_cuspidal(self) -> bool:
        Q = self.q ** self.a
        return all((self.j * Q ** s - self.j) % self.order for s in range(1, self.N))

    def canonical(self) -> "DLPair":
        """The representative with the least exponent among θ^{Q^s}."""
        Q = self.q ** self.a
        js = {(self.j * Q ** s) % self.order for s in range(self.N)}
        return DLPair(self.q, self.N, self.kind, min(js), self.a)


def cuspidal_pairs(N: int, q: int, kind: str = "GL") -> list[DLPair]:
    if N != 2:
        raise NotImplementedError("cuspidal pairs are implemented for N = 2")
    m = q ** N - 1
    out = set()
    for j in range(m):
        if kind == "PGL" and j % (q - 1):
            continue
        P = DLPair(q, N, kind, j)
        if P.is_cuspidal():
            out.add(P.canonical())
    return sorted(out, key=lambda P: P.j)


def lift(pair: DLPair, a: int) -> DLPair:
    """θ_a = θ ∘ Norm_{aN, N} on k_{aN}^×, a torus of the group over k_a."""
    if a < 1:
        raise ValueError("a must be positive")
    n_new = pair.n * a
    scale = (pair.q ** n_new - 1) // pair.order if pair.order else 1
    return DLPair(pair.q, pair.N, pair.kind, (pair.j * scale) % (pair.q ** n_new - 1), pair.a * a)


def elliptic_value(pair: DLPair, x: int, T=None) -> Scalar:
    """-(θ(x) + θ(x)^q)."""
    t = pair.theta(x, T)
    return -(t + t ** pair.q)


def lifted_value(pair: DLPair, a: int, x: int, T=None) -> Scalar:
    """-(θ(Nx) + θ(Nx)^q), N = Norm_{aN, N}, for x ∈ k_{aN} ⊂ T."""
    T = T or tower(pair.q, a * pair.n)
    return elliptic_value(pair, T.norm(x, a * pair.n, pair.n), T)


def base_change_value(pair: DLPair, a: int, x: int, T=None) -> Scalar:
    """-(θ_a(x) + θ_a(x)^{q^a}), the Frobenius of the group over k_a."""
    T = T or tower(pair.q, a * pair.n)
    t = pair.theta(T.norm(x, a * pair.n, pair.n), T)
    return -(t + t ** (pair.q ** a))


# -- exact class functions ----------------------------------------------------------

@dataclass
class CharacterSheet:
    G: FiniteGroup
    values: list  # Scalar per conjugacy class
    dim: int
    pair: DLPair | None = None

    def __call__(self, g: int) -> Scalar:
        return self.values[self.G.class_of(g)]

    def inner(self, other: "CharacterSheet") -> Scalar:
        G = self.G
        tot = Scalar(0)
        for c, cls in enumerate(G.conjugacy_classes):
            tot = tot + self.values[c] * other.values[c].conj() * len(cls)
        return tot * Fraction(1, G.order)

    def is_cuspidal(self) -> bool:
        U = parabolic_datum((1,) + (0,) * (self.G.N - 1), self.G).U
        tot = Scalar(0)
        for u in U:
            tot = tot + self(u)
        return tot.is_zero()

    def table(self) -> list:
        return [{"class": c, "representative": cls[0], "size": len(cls), "value": self.values[c].to_dict()}
                for c, cls in enumerate(self.G.conjugacy_classes)]


def _exponent(G: FiniteGroup) -> int:
    e = 1
    for cls in G.conjugacy_classes:
        e = lcm(e, G.element_order(cls[0]))
    return e


def _prime(m: int, lower: int) -> int:
    P = m * (lower // m + 1) + 1
    while not isprime(P):
        P += m
    return P


class _Algebra:
    """F_P[G] as dense vectors."""

    def __init__(self, G: FiniteGroup, P: int):
        self.G, self.P = G, P
        self.mul = G.mul.astype(np.int64)

    def zero(self):
        return np.zeros(self.G.order, dtype=np.int64)

    def delta(self, g):
        v = self.zero()
        v[g] = 1
        return v

    def prod(self, a, b):
        out = self.zero()
        for g in np.nonzero(a)[0]:
            np.add.at(out, self.mul[g], a[g] * b)
            out %= self.P
        return out


def _trace_to_prime(F, b: int) -> int:
    t = 0
    x = b
    for _ in range(F.n):
        t = F.add(t, x)
        x = F.pow(x, F.p)
    if t >= F.p:
        raise AssertionError("trace left the prime field")
    return t


def _unipotent_parameters(G: FiniteGroup):
    """u -> b for u = [[1, b], [0, 1]] in the standard unipotent radical."""
    out = {}
    for b in range(G.q):
        out[G.from_matrix([[1, b], [0, 1]])] = b
    return out


@lru_cache(maxsize=None)
def gelfand_graev_characters(G: FiniteGroup, seed: int = 0) -> tuple:
    """All irreducible constituents of the Gelfand–Graev module, as exact characters."""
    if G.N != 2:
        raise NotImplementedError("Gelfand–Graev oracle implemented for N = 2")
    F = G.F
    p = F.p
    expo = _exponent(G)
    m = lcm(expo, p)
    P = _prime(m, 8 * G.order)
    w = primitive_root(P)
    omega = pow(w, (P - 1) // m, P)
    Alg = _Algebra(G, P)
    # e_ψ = |U|^{-1} Σ ψ(u)^{-1} u with ψ(u_b) = ω_p^{Tr b}
    Ub = _unipotent_parameters(G)
    inv_U = pow(len(Ub), P - 2, P)
    e = Alg.zero()
    for u, b in Ub.items():
        e[u] = (e[u] + inv_U * pow(omega, (m // p) * ((-_trace_to_prime(F, b)) % p), P)) % P
    if not np.array_equal(Alg.prod(e, e), e):
        raise AssertionError("e_ψ is not idempotent")
    # basis of H = e F[G] e
    vecs = []
    seen = set()
    for g in range(G.order):
        h = Alg.prod(Alg.prod(e, Alg.delta(g)), e)
        key = tuple(h.tolist())
        if any(h) and key not in seen:
            seen.add(key)
            vecs.append(h)
    M = nmod_mat([[int(x) for x in v] for v in vecs], P)
    R, rk = M.rref()
    basis = [np.array([int(R[i, j]) for j in range(G.order)], dtype=np.int64) for i in range(rk)]
    pivots = [next(j for j in range(G.order) if R[i, j] != 0) for i in range(rk)]
    rng = random.Random(seed)

    def coords(v):
        # basis is in reduced row echelon form: coordinates are the pivot entries
        c = [int(v[j]) for j in pivots]
        back = Alg.zero()
        for ci, b in zip(c, basis):
            back = (back + ci * b) % P
        if not np.array_equal(back, v % P):
            raise AssertionError("element outside the commutant")
        return c

    for _ in range(20):
        h = Alg.zero()
        for b in basis:
            h = (h + rng.randrange(P) * b) % P
        L = nmod_mat([[0] * rk for _ in range(rk)], P)
        for c, b in enumerate(basis):
            col = coords(Alg.prod(h, b))
            for r in range(rk):
                L[r, c] = col[r]
        cp = L.charpoly()
        fac = cp.factor()[1]
        roots = []
        ok = True
        for f, mult in fac:
            if f.degree() != 1 or mult != 1:
                ok = False
                break
            roots.append(int(-f[0] * pow(int(f[1]), P - 2, P)) % P)
        if ok:
            break
    else:
        raise OracleDegenerate("no generic element with split simple spectrum")
    idems = []
    for k, lk in enumerate(roots):
        E = e.copy()
        for l, ll in enumerate(roots):
            if l == k:
                continue
            inv = pow((lk - ll) % P, P - 2, P)
            E = Alg.prod(E, ((h - ll * e) % P) * inv % P)
        idems.append(E)
    if not np.array_equal(sum(idems) % P, e):
        raise OracleDegenerate("idempotents do not sum to e_ψ")
    classes = G.conjugacy_classes
    out = []
    for E in idems:
        if not np.array_equal(Alg.prod(E, E), E):
            raise OracleDegenerate("non-idempotent spectral projector")
        modp = []
        for cls in classes:
            g = cls[0]
            ginv = int(G.inv[g])
            s = 0
            for x in range(G.order):
                s += int(E[G.conj(int(G.inv[x]), ginv)])
            modp.append(s % P)
        out.append(_lift_character(G, modp, P, omega, m))
    return tuple(out)


def _lift_character(G: FiniteGroup, modp, P: int, omega: int, m: int) -> CharacterSheet:
    """Recover Z[ζ] values from χ mod P via eigenvalue multiplicities of each class."""
    d = modp[G.class_of(G.identity)]
    if d > P // 2:
        raise OracleDegenerate("dimension out of range")
    vals = []
    for cls in G.conjugacy_classes:
        g = cls[0]
        o = G.element_order(g)
        w_o = pow(omega, m // o, P)
        inv_o = pow(o, P - 2, P)
        mults = []
        for k in range(o):
            s = 0
            for jj in range(o):
                s += modp[G.class_of(G.power(g, jj))] * pow(w_o, (-jj * k) % o, P)
            a = s * inv_o % P
            if a > d:
                raise OracleDegenerate("eigenvalue multiplicity out of range")
            mults.append(a)
        if sum(mults) != d:
            raise OracleDegenerate("multiplicities do not add up to the dimension")
        v = Scalar(0)
        for k, a in enumerate(mults):
            if a:
                v = v + Scalar.zeta(o, k) * a if o > 1 else v + a
        vals.append(v)
    return CharacterSheet(G, vals, d)


@lru_cache(maxsize=None)
def cuspidal_characters(G: FiniteGroup, T=None) -> tuple:
    """Oracle constituents with zero U-average, each matched to its pair (T, θ).

    Pair labels are relative to the field tower T (default tower(q, N)).
    """
    cands = [c for c in gelfand_graev_characters(G) if c.is_cuspidal()]
    pairs = cuspidal_pairs(G.N, G.q, G.kind)
    T = T or tower(G.q, G.N)
    ell = [x for x in T.subfield_units(G.N) if T.degree(x) == G.N]
    out = []
    used = set()
    for P in pairs:
        hits = [k for k, c in enumerate(cands)
                if all(c(elliptic_class(x, G, T).representative) == elliptic_value(P, x, T) for x in ell)]
        if len(hits) != 1 or hits[0] in used:
            raise MatchError(f"pair {P} matches oracle components {hits}")
        used.add(hits[0])
        c = cands[hits[0]]
        out.append(CharacterSheet(G, c.values, c.dim, P))
    if len(used) != len(cands):
        raise MatchError("unmatched cuspidal oracle components")
    return tuple(out)


def cuspidal_character(pair: DLPair, T=None) -> CharacterSheet:
    if pair.a != 1:
        raise ValueError("cuspidal_character expects a pair over the base field")
    G = build_group(pair.N, pair.q, pair.kind)
    for c in cuspidal_characters(G, T):
        if c.pair == pair.canonical():
            return c
    raise MatchError(f"no cuspidal character for {pair}")


# -- class sums and η ---------------------------------------------------------------

def central_idempotent(chi: CharacterSheet) -> dict:
    """e_π(g) = (dim/|G|)·conj χ(g)."""
    G = chi.G
    f = Fraction(chi.dim, G.order)
    return {g: chi(g).conj() * f for g in range(G.order)}


def _convolve(G, a: dict, b: dict) -> dict:
    out = {}
    for g, x in a.items():
        if x.is_zero():
            continue
        for h, y in b.items():
            k = int(G.mul[g, h])
            out[k] = out[k] + x * y if k in out else x * y
    return out


def class_sum_scalar(chi: CharacterSheet, members) -> Scalar:
    """The scalar by which Σ_{g ∈ Ω} δ_g acts on the block of χ (from a convolution)."""
    G = chi.G
    e = central_idempotent(chi)
    prod = _convolve(G, {g: Scalar(1) for g in members}, e)
    c = prod.get(G.identity, Scalar(0)) / e[G.identity]
    for g in range(G.order):
        if prod.get(g, Scalar(0)) != c * e[g]:
            raise NotScalar("class sum is not scalar on the block")
    return c


def eta(op, chi: CharacterSheet) -> Scalar:
    """Scalar of op on the χ-block of V_cusp, with exact checks.

    e_π is placed on stratum 0 through g = g0·g∞; op(e_π) must vanish off the
    central strata and equal η·e_π on them.
    """
    G = chi.G
    if op.G is not G:
        raise ValueError("operator and character live on different groups")
    zero = normalize_coweight((0,) * G.N, G.kind)
    tp = twisted_product(parabolic_datum(zero, G), "++")
    e = central_idempotent(chi)
    v = {(zero, pt): e[central_point_element(G, zero, pt)] for pt in range(len(tp))}
    img = op.apply(v)
    on_centre = {}
    for (mu, pt), c in img.items():
        if c.is_zero():
            continue
        if len(set(mu)) != 1:
            raise NotScalar(f"image has a component on stratum {mu}")
        g = central_point_element(G, mu, pt)
        on_centre[(mu, g)] = c
    if not on_centre:
        return Scalar(0)
    mus = {mu for mu, _ in on_centre}
    if len(mus) != 1:
        raise NotScalar("image meets several central strata")
    mu = mus.pop()
    val = on_centre.get((mu, G.identity), Scalar(0)) / e[G.identity]
    for g in range(G.order):
        if on_centre.get((mu, g), Scalar(0)) != val * e[g]:
            raise NotScalar("operator is not scalar on the block")
    return val


def omega_size(N: int, q: int) -> int:
    """∏_{j=1}^{N-1} (q^N - q^j)."""
    out = 1
    for j in range(1, N):
        out *= q ** N - q ** j
    return out


def cuspidal_dim(N: int, q: int) -> int:
    out = 1
    for j in range(1, N):
        out *= q ** j - 1
    return out
