"""The Hecke algebra A of K_1-biinvariant functions on G(k((t))).

A double coset of type λ is K_1·u t^λ u'·K_1 with u, u' ∈ G(k); it is
labelled by the point (u'^{-1}, u) of the twisted product
G/U_λ ×_{M_λ} G/U_λ^- (sign "+-").  Arbitrary loop elements are labelled
through a local Smith reduction that only tracks reductions mod t.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import poly
from .arith import Scalar
from .arith import fqlinalg
from .groups import (normalize_window, window_strata, in_window, FiniteGroup, TwistedProductSpace, dominance_leq, dominant_below,
                     normalize_coweight, parabolic_datum, twisted_product)
from .poly import Laurent


class PrecisionError(RuntimeError):
    pass


class WindowOverflow(RuntimeError):
    pass


class CensusMismatch(RuntimeError):
    pass


# -- helpers on loop matrices ----------------------------------------------

def loop_matrix(G: FiniteGroup, g: int):
    return poly.from_constant(G.F, G.matrix(g))


def t_power(G: FiniteGroup, lam):
    return poly.diag_monomials(G.F, lam)


def standard_rep(G: FiniteGroup, lam, u: int, up: int):
    """u t^λ u' as a Laurent matrix."""
    return poly.mat_mul(poly.mat_mul(loop_matrix(G, u), t_power(G, lam)), loop_matrix(G, up))


def smith_reduce(kappa, P: int):
    """Local Smith form κ = L·diag(t^{e_1} ≤ ... ≤ t^{e_N})·R over O = k[[t]].

    Works modulo t^P on t^{-v}κ.  Returns (exponents ascending, L mod t, R mod t).
    """
    F = kappa[0][0].F
    n = len(kappa)
    v = poly.min_valuation(kappa)
    if v is None:
        raise ValueError("zero matrix")
    X = [[x.shift(-v).truncate(P) for x in row] for row in kappa]
    E = fqlinalg.identity(n)   # row operations mod t
    Fm = fqlinalg.identity(n)  # column operations mod t
    exps = []
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                x = X[i][j]
                if x.c and (best is None or x.val < best[0]):
                    best = (x.val, i, j)
        if best is None:
            raise PrecisionError(f"precision {P} too small for Smith reduction")
        a, r, c = best
        if r != k:
            X[k], X[r] = X[r], X[k]
            E[k], E[r] = E[r], E[k]
        if c != k:
            for row in X:
                row[k], row[c] = row[c], row[k]
            for row in Fm:
                row[k], row[c] = row[c], row[k]
        unit = X[k][k].shift(-a)
        winv = unit.series_inverse(P)
        w0inv = F.inv(unit.c[0])
        X[k] = [(x * winv).truncate(P) for x in X[k]]
        E[k] = [F.mul(w0inv, x) for x in E[k]]
        for i in range(k + 1, n):
            if X[i][k].c:
                cf = X[i][k].shift(-a)
                X[i] = [(X[i][j] - cf * X[k][j]).truncate(P) for j in range(n)]
                c0 = cf.coeff(0)
                if c0:
                    E[i] = [F.sub(x, F.mul(c0, y)) for x, y in zip(E[i], E[k])]
        for j in range(k + 1, n):
            if X[k][j].c:
                cf = X[k][j].shift(-a)
                for i in range(n):
                    X[i][j] = (X[i][j] - X[i][k] * cf).truncate(P)
                c0 = cf.coeff(0)
                if c0:
                    for row in Fm:
                        row[j] = F.sub(row[j], F.mul(row[k], c0))
        exps.append(a + v)
    L = fqlinalg.inverse(F, E)
    R = fqlinalg.inverse(F, Fm)
    return exps, L, R


def _default_precision(kappa) -> int:
    d = poly.det(kappa)
    if not d.c:
        raise ValueError("κ is not invertible over k((t))")
    v = poly.min_valuation(kappa)
    return d.val - len(kappa) * v + 2


def classify(G: FiniteGroup, kappa, P: int | None = None, check: bool = True):
    """(λ, point of twisted_product(λ, '+-')) of the double coset K_1 κ K_1."""
    P = P or _default_precision(kappa)
    res = _classify_at(G, kappa, P)
    if check:
        res2 = _classify_at(G, kappa, P + 1)
        if res2 != res:
            raise PrecisionError(f"classification unstable between precision {P} and {P + 1}")
    return res


def _classify_at(G, kappa, P):
    n = G.N
    exps, L, R = smith_reduce(kappa, P)
    lam = tuple(reversed(exps))
    J = [[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)]
    u = G.from_matrix(fqlinalg.mat_mul(G.F, L, J))
    up = G.from_matrix(fqlinalg.mat_mul(G.F, J, R))
    lam = normalize_coweight(lam, G.kind)
    tp = twisted_product(parabolic_datum(lam, G), "+-")
    return lam, tp.point(int(G.inv[up]), u)


def coset_count(lam) -> int:
    """log_q of |K_1 \\ K_1 t^λ K_1|: sum over i > j of n_j - n_i."""
    return sum(lam[j] - lam[i] for i in range(len(lam)) for j in range(i))


def coset_reps(G: FiniteGroup, lam, pt: int):
    """Representatives c with K_1 κ K_1 = ⊔ K_1 c (κ the standard representative)."""
    tp = twisted_product(parabolic_datum(lam, G), "+-")
    x, y = tp.points[pt]
    u, up = y, int(G.inv[x])
    F = G.F
    n = G.N
    slots = [(i, j, lam[j] - lam[i]) for i in range(n) for j in range(i) if lam[j] > lam[i]]
    left = poly.mat_mul(loop_matrix(G, u), t_power(G, lam))
    right = loop_matrix(G, up)
    out = []
    digit_count = sum(d for _, _, d in slots)
    for digits in itertools.product(range(G.q), repeat=digit_count):
        m = poly.identity(F, n)
        pos = 0
        for i, j, d in slots:
            m[i][j] = Laurent(F, digits[pos:pos + d], 1)
            pos += d
        out.append(poly.mat_mul(poly.mat_mul(left, m), right))
    return out


# -- bases of A --------------------------------------------------------------

class HeckeBasis:
    """Basis of A_{≤λ̄}: pairs (μ, point) for dominant μ ≤ λ̄."""

    def __init__(self, G: FiniteGroup, window):
        self.G = G
        self.window = normalize_window(window, G.kind)
        self.strata = window_strata(self.window, G.kind)
        self.points: list[tuple[tuple[int, ...], int]] = []
        self.offset = {}
        for mu in self.strata:
            tp = twisted_product(parabolic_datum(mu, G), "+-")
            self.offset[mu] = len(self.points)
            self.points += [(mu, p) for p in range(len(tp))]
        self.index = {b: i for i, b in enumerate(self.points)}
        self.size = len(self.points)
        self.key = ("A", G.key, self.window)

    def contains(self, mu) -> bool:
        return in_window(mu, self.window, self.G.kind)

    def rep(self, i: int):
        mu, pt = self.points[i]
        tp = twisted_product(parabolic_datum(mu, self.G), "+-")
        x, y = tp.points[pt]
        return standard_rep(self.G, mu, y, int(self.G.inv[x]))


_BASES: dict = {}


def hecke_basis(G: FiniteGroup, window) -> HeckeBasis:
    key = (G.key, normalize_window(window, G.kind))
    if key not in _BASES:
        _BASES[key] = HeckeBasis(G, window)
    return _BASES[key]


@dataclass
class HeckeElement:
    basis: HeckeBasis
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = {k: Scalar.coerce(v) for k, v in self.values.items()
                       if not Scalar.coerce(v).is_zero()}

    @classmethod
    def delta(cls, basis, mu, pt):
        return cls(basis, {(normalize_coweight(mu, basis.G.kind), pt): 1})

    def __add__(self, other):
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out[k] + v if k in out else v
        return HeckeElement(self.basis, out)

    def scale(self, c):
        c = Scalar.coerce(c)
        return HeckeElement(self.basis, {k: c * v for k, v in self.values.items()})

    def __eq__(self, other):
        keys = set(self.values) | set(other.values)
        z = Scalar(0)
        return all(self.values.get(k, z) == other.values.get(k, z) for k in keys)

    __hash__ = None

    def vector(self):
        return [self.values.get(b, Scalar(0)) for b in self.basis.points]


def group_element_delta(G: FiniteGroup, g: int, basis: HeckeBasis | None = None) -> HeckeElement:
    zero = (0,) * G.N
    basis = basis or hecke_basis(G, zero)
    tp = twisted_product(parabolic_datum(zero, G), "+-")
    # κ = g = u t^0 u' with u = g, u' = 1
    return HeckeElement(basis, {(zero, tp.point(G.identity, g)): 1})


def e_fin(G: FiniteGroup, basis=None) -> HeckeElement:
    zero = (0,) * G.N
    basis = basis or hecke_basis(G, zero)
    tp = twisted_product(parabolic_datum(zero, G), "+-")
    vals = {}
    for g in range(G.order):
        k = (zero, tp.point(G.identity, g))
        vals[k] = vals.get(k, Fraction(0)) + Fraction(1, G.order)
    return HeckeElement(basis, vals)


def _translate(G, mu, pt, g, h):
    """Label of K_1 g κ h K_1 for g, h ∈ G(k)."""
    tp = twisted_product(parabolic_datum(mu, G), "+-")
    # κ = u t^μ u' ↦ (g u) t^μ (u' h): point (u'^{-1}, u) ↦ (h^{-1} u'^{-1}, g u)
    return tp.act(int(G.inv[h]), g, pt)


def convolve_hecke(a: HeckeElement, b: HeckeElement, basis: HeckeBasis | None = None) -> HeckeElement:
    """a*b with the characteristic function of K_1 as unit."""
    G = a.basis.G
    if basis is None:
        win = tuple(tuple(x + y for x, y in zip(w1, w2))
                    for w1 in a.basis.window for w2 in b.basis.window)
        basis = hecke_basis(G, win)
    counts: dict = {}
    for (mu, p), av in a.values.items():
        for (nu, r), bv in b.values.items():
            for key, mult in _product_classes(G, mu, p, nu, r).items():
                if not basis.contains(key[0]):
                    raise WindowOverflow(f"product has type {key[0]} outside window {basis.window}")
                c = av * bv * mult
                counts[key] = counts[key] + c if key in counts else c
    return HeckeElement(basis, counts)


_PRODUCT_CACHE: dict = {}


def _product_classes(G, mu, p, nu, r) -> dict:
    """δ_D * δ_E as {class: coefficient}."""
    key = (G.key, mu, p, nu, r)
    if key in _PRODUCT_CACHE:
        return _PRODUCT_CACHE[key]
    zero = (0,) * G.N
    out: dict = {}
    if mu == zero or nu == zero:
        # one side is a finite group element: relabel
        if mu == zero:
            tp0 = twisted_product(parabolic_datum(zero, G), "+-")
            x, y = tp0.points[p]
            g = int(G.mul[y, G.inv[x]])
            out[(nu, _translate(G, nu, r, g, G.identity))] = Fraction(1)
        else:
            tp0 = twisted_product(parabolic_datum(zero, G), "+-")
            x, y = tp0.points[r]
            h = int(G.mul[y, G.inv[x]])
            out[(mu, _translate(G, mu, p, G.identity, h))] = Fraction(1)
    else:
        cs = coset_reps(G, mu, p)
        ds = coset_reps(G, nu, r)
        tally: dict = {}
        for c in cs:
            for d in ds:
                cl = classify(G, poly.mat_mul(c, d))
                tally[cl] = tally.get(cl, 0) + 1
        for cl, n in tally.items():
            out[cl] = Fraction(n, G.q ** coset_count(cl[0]))
    _PRODUCT_CACHE[key] = out
    return out


# -- censuses ----------------------------------------------------------------

def stabilizer_census_local(G: FiniteGroup, lam, M: int | None = None, budget: int = 2_000_000) -> int:
    """|K_1\\G(O)t^λG(O)/K_1| as |G|^2/|Stab|, from the definition at precision M.

    Stab = {(x mod t, t^λ x t^{-λ} mod t) : x ∈ G(O/t^M), t^λ x t^{-λ} integral}.
    """
    n, q, F = G.N, G.q, G.F
    spread = max(lam) - min(lam)
    M = M or spread + 1
    full = q ** (n * n * M) <= budget
    slots = []
    for i in range(n):
        for j in range(n):
            e = lam[i] - lam[j]
            need = sorted({0, max(-e, 0)}) if not full else list(range(M))
            slots.append((i, j, e, [d for d in need if d < M]))
    sizes = [len(s[3]) for s in slots]
    stab = set()
    for digits in itertools.product(range(q), repeat=sum(sizes)):
        pos = 0
        xbar = [[0] * n for _ in range(n)]
        ybar = [[0] * n for _ in range(n)]
        ok = True
        for (i, j, e, ds), sz in zip(slots, sizes):
            dig = dict(zip(ds, digits[pos:pos + sz]))
            pos += sz
            if any(dig.get(d, 0) for d in range(0, -e)):
                ok = False
                break
            xbar[i][j] = dig.get(0, 0)
            ybar[i][j] = dig.get(-e, 0) if e <= 0 else 0
        if not ok or not fqlinalg.det(F, xbar):
            continue
        stab.add((G.from_matrix(xbar), G.from_matrix(ybar)))
    return G.order ** 2 // len(stab)


def enumerate_double_cosets(G: FiniteGroup, window, P_extra: int = 0, samples: int | None = None,
                            seed: int = 0) -> dict:
    """Census of A_{≤window} by Smith classification of perturbed representatives.

    For each stratum μ the representatives u t^μ u' (u, u' ∈ G(k), optionally
    sampled) are multiplied by random elements of K_1 on both sides and
    classified at precision P and P+1.  Returns {μ: count}; raises if the
    census is unstable or disagrees with the twisted-product count.
    """
    rng = random.Random(seed)
    out = {}
    basis = hecke_basis(G, window)
    for mu in basis.strata:
        tp = twisted_product(parabolic_datum(mu, G), "+-")
        lift_mu = mu
        P = max(mu) - min(mu) + 2 + P_extra
        pairs = [(u, up) for u in range(G.order) for up in range(G.order)]
        if samples is not None and samples < len(pairs):
            pairs = rng.sample(pairs, samples)
        seen = set()
        for u, up in pairs:
            kappa = standard_rep(G, lift_mu, u, up)
            k1 = random_k1(G, rng, 2)
            k2 = random_k1(G, rng, 2)
            kappa = poly.mat_mul(poly.mat_mul(k1, kappa), k2)
            lam, pt = classify(G, kappa, P=P + 2 * (len(mu)) + 4)
            if lam != mu:
                raise CensusMismatch(f"representative of type {mu} classified as {lam}")
            expect = tp.point(int(G.inv[up]), u)
            if pt != expect:
                raise CensusMismatch("K_1-perturbed representative changed its label")
            seen.add(pt)
        if samples is None and len(seen) != len(tp):
            raise CensusMismatch(f"stratum {mu}: {len(seen)} classes vs {len(tp)} twisted-product points")
        out[mu] = len(seen)
    return out


def random_k1(G: FiniteGroup, rng: random.Random, degree: int):
    """A random element of K_1 (polynomial, ≡ 1 mod t)."""
    F, n = G.F, G.N
    while True:
        m = [[Laurent(F, [1 if i == j else 0] + [rng.randrange(G.q) for _ in range(degree)])
              for j in range(n)] for i in range(n)]
        d = poly.det(m)
        if d.c and d.val == 0:
            return m


def random_loop_group_element(G: FiniteGroup, rng: random.Random, degree: int):
    """A random polynomial matrix invertible mod t (an element of G(O) ∩ Mat(k[t]))."""
    F, n = G.F, G.N
    g = rng.randrange(G.order)
    base = G.matrix(g)
    m = [[Laurent(F, [base[i][j]] + [rng.randrange(G.q) for _ in range(degree)])
          for j in range(n)] for i in range(n)]
    return m


# -- Jantzen filtrations -----------------------------------------------------

@dataclass
class JantzenFlag:
    """W_i = {(s(0), (t^{-i}κ s)(0)) : s ∈ O^N, t^{-i}κ s ∈ O^N} for i in range(lo, hi+1).

    E_i = first projection of W_i (decreasing in i); the paired filtration
    E'_{-i} = second projection of W_i.  gr_i(E) = E_i/E_{i+1} is matched
    with gr_{-i}(E') = E'_{-i}/E'_{-i+1}.
    """
    N: int
    lo: int
    hi: int
    W: dict

    def E(self, i):
        i = min(max(i, self.lo), self.hi)
        return self._proj(self.W[i], 0)

    def Eprime(self, j):
        i = min(max(-j, self.lo), self.hi)
        return self._proj(self.W[i], 1)

    def _proj(self, rows, side):
        n = self.N
        vecs = [r[side * n:(side + 1) * n] for r in rows]
        return [v for v in vecs if any(v)]

    def gr_dims(self, F):
        E = {i: fqlinalg.rank(F, self.E(i)) for i in range(self.lo, self.hi + 1)}
        Ep = {i: fqlinalg.rank(F, self.Eprime(-i)) for i in range(self.lo, self.hi + 1)}
        grE = {i: E[i] - E[i + 1] for i in range(self.lo, self.hi)}
        grEp = {i: Ep[i] - Ep[i - 1] for i in range(self.lo + 1, self.hi + 1)}
        return grE, grEp

    def flag_type(self, F):
        grE, _ = self.gr_dims(F)
        lam = []
        for i in sorted(grE, reverse=True):
            lam += [i] * grE[i]
        return tuple(lam)


def jantzen_flag(G: FiniteGroup, kappa) -> JantzenFlag:
    F, n = G.F, G.N
    d = poly.det(kappa)
    if not d.c:
        raise ValueError("κ is not invertible over k((t))")
    v = poly.min_valuation(kappa)
    top = d.val - (n - 1) * v  # largest elementary divisor exponent is at most this
    lo, hi = v - 1, top + 1
    K = [[x.shift(-v) for x in row] for row in kappa]
    W = {}
    for i in range(lo, hi + 1):
        W[i] = _jantzen_space(F, n, K, i - v)
    return JantzenFlag(n, lo, hi, W)


def _jantzen_space(F, n, K, r):
    """W for the condition t^{-r}·K s ∈ O^N (K polynomial)."""
    if r < 0:
        rows = [[1 if c == k else 0 for c in range(n)] + [0] * n for k in range(n)]
        return fqlinalg.row_space(F, rows, 2 * n)
    coeff = lambda e: [[K[a][b].coeff(e) for b in range(n)] for a in range(n)]
    nd = r + 1
    nvar = n * nd
    cons = []
    for m in range(r):
        for a in range(n):
            row = [0] * nvar
            for dd in range(m + 1):
                Ke = coeff(m - dd)
                for b in range(n):
                    row[dd * n + b] = Ke[a][b]
            cons.append(row)
    null = fqlinalg.nullspace(F, cons, nvar)
    out_rows = []
    for vec in null:
        s0 = vec[:n]
        val = [0] * n
        for dd in range(nd):
            Ke = coeff(r - dd)
            sd = vec[dd * n:(dd + 1) * n]
            for a in range(n):
                for b in range(n):
                    if Ke[a][b] and sd[b]:
                        val[a] = F.add(val[a], F.mul(Ke[a][b], sd[b]))
        out_rows.append(list(s0) + val)
    return fqlinalg.row_space(F, out_rows, 2 * n)


def elementary_divisor_type(kappa) -> tuple[int, ...]:
    """Elementary divisors from valuations of minors (d_k = min val of k×k minors)."""
    n = len(kappa)
    d = [0]
    for k in range(1, n + 1):
        best = None
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(n), k):
                m = poly.det([[kappa[i][j] for j in cols] for i in rows])
                if m.c and (best is None or m.val < best):
                    best = m.val
        d.append(best)
    exps = [d[k] - d[k - 1] for k in range(1, n + 1)]
    return tuple(sorted(exps, reverse=True))


def subspace_image(F, M, rows):
    """RREF of {M v : v in span(rows)} (rows are vectors)."""
    imgs = [[sum_(F, (F.mul(M[a][b], v[b]) for b in range(len(v)))) for a in range(len(M))]
            for v in rows]
    return fqlinalg.row_space(F, imgs, len(M))


def sum_(F, it):
    s = 0
    for x in it:
        s = F.add(s, x)
    return s


def jantzen_key(G: FiniteGroup, kappa):
    J = jantzen_flag(G, kappa)
    return tuple((i, J.W[i]) for i in range(J.lo, J.hi + 1))


def graded_iso(G: FiniteGroup, lam) -> dict:
    """A_λ → twisted_product(λ, '+-') via Jantzen data.

    Each basis element's representative is matched, by its Jantzen subspaces
    W_i, with the twisted-product point whose pair (x, y) gives κ = y t^λ x^{-1}.
    Returns {basis index within the stratum: point}; raises unless bijective.
    """
    lam = normalize_coweight(lam, G.kind)
    tp = twisted_product(parabolic_datum(lam, G), "+-")
    table = {}
    for pt, (x, y) in enumerate(tp.points):
        key = jantzen_key(G, standard_rep(G, lam, y, int(G.inv[x])))
        if key in table:
            raise CensusMismatch("Jantzen data fails to separate twisted-product points")
        table[key] = pt
    basis = hecke_basis(G, lam)
    out = {}
    for idx, (mu, pt) in enumerate(basis.points):
        if mu != lam:
            continue
        key = jantzen_key(G, basis.rep(idx))
        if key not in table:
            raise CensusMismatch("basis element has no matching twisted-product point")
        out[pt] = table[key]
    if sorted(out.values()) != list(range(len(tp))):
        raise CensusMismatch("graded identification is not a bijection")
    return out
