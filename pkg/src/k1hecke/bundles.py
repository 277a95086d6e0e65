"""G-bundles on P^1 trivialized at 0 and ∞, via transition matrices.

A point is a transition matrix g ∈ G(k[z, z^{-1}]) modulo g ~ a·g·b with
a ∈ G(k[z]), a(0) = 1 and b ∈ G(k[z^{-1}]), b(∞) = 1.  Birkhoff
factorization g = A·z^λ·B reduces it to λ and the class of (A(0), B(∞)),
labelled by the point (A(0), B(∞)^{-1}) of G/U_λ ×_{M_λ} G/U_λ (sign "++").
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import poly
from .arith import fqlinalg
from .funspace import LinearMap, orthogonal_complement_projector, _proper_unipotents, cuspidal_projector
from .groups import (normalize_window, window_strata, in_window, FiniteGroup, dominance_leq, dominant_below, normalize_coweight,
                     parabolic_datum, twisted_product)
from .loophecke import (HeckeBasis, HeckeElement, WindowOverflow, coset_reps, hecke_basis,
                        loop_matrix)
from .poly import Laurent


class NotInvertible(ValueError):
    pass


@dataclass(frozen=True)
class Birkhoff:
    A: list
    exps: tuple
    B: list


def birkhoff(g) -> Birkhoff:
    """g = A·z^μ·B with A ∈ G(k[z]), B ∈ G(k[z^{-1}]); μ unsorted."""
    d = poly.det(g)
    if not d.is_monomial():
        raise NotInvertible("determinant is not a monomial in z")
    ginv = poly.inverse(g)
    shift = -poly.min_valuation(ginv)
    H = poly.mat_shift(ginv, shift)
    C, W, s = poly.column_reduce(H)
    n = len(g)
    # C = Ct·z^s with Ct ∈ G(k[z^{-1}]); g = W z^{shift - s} Ct^{-1}
    Ct = [[C[i][j].shift(-s[j]) for j in range(n)] for i in range(n)]
    B = poly.inverse(Ct)
    exps = tuple(shift - sj for sj in s)
    return Birkhoff(W, exps, B)


class VSpace:
    """Points of bpo of type ≤ window: pairs (λ, point of twisted_product(λ, '++'))."""

    def __init__(self, G: FiniteGroup, window):
        self.G = G
        self.window = normalize_window(window, G.kind)
        self.strata = window_strata(self.window, G.kind)
        self.points = []
        self.offset = {}
        for mu in self.strata:
            tp = twisted_product(parabolic_datum(mu, G), "++")
            self.offset[mu] = len(self.points)
            self.points += [(mu, p) for p in range(len(tp))]
        self.index = {b: i for i, b in enumerate(self.points)}
        self.size = len(self.points)
        self.key = ("V", G.key, self.window)

    def contains(self, mu) -> bool:
        return in_window(mu, self.window, self.G.kind)

    def stratum_indices(self, mu):
        mu = normalize_coweight(mu, self.G.kind)
        off = self.offset[mu]
        n = len(twisted_product(parabolic_datum(mu, self.G), "++"))
        return range(off, off + n)


_VSPACES: dict = {}


def v_space(G: FiniteGroup, window) -> VSpace:
    key = (G.key, normalize_window(window, G.kind))
    if key not in _VSPACES:
        _VSPACES[key] = VSpace(G, window)
    return _VSPACES[key]


def _z0_twist(G, lam, z0, inverse=False):
    F = G.F
    n = G.N
    e = [(-x if inverse else x) for x in lam]
    return [[F.pow(z0, e[i]) if i == j else 0 for j in range(n)] for i in range(n)]


def random_positive_loop(G: FiniteGroup, rng, steps: int = 3, degree: int = 1):
    """A random element of G_1[z]: product of elementary matrices 1 + z f(z) E_ij."""
    F, n = G.F, G.N
    m = poly.identity(F, n)
    if n == 1:
        return m
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        e = poly.identity(F, n)
        e[i][j] = Laurent(F, [0] + [rng.randrange(G.q) for _ in range(degree)])
        m = poly.mat_mul(m, e)
    return m


def canonical_form(G: FiniteGroup, g, z0: int = 1, verify: bool = True):
    """(λ, point) of the bundle with transition matrix g."""
    bk = birkhoff(g)
    n = G.N
    F = G.F
    if verify:
        back = poly.mat_mul(poly.mat_mul(bk.A, poly.diag_monomials(F, bk.exps)), bk.B)
        if not poly.mat_eq(back, g):
            raise AssertionError("Birkhoff factorization does not reproduce g")
    order = sorted(range(n), key=lambda j: (-bk.exps[j], j))
    lam = tuple(bk.exps[j] for j in order)
    # Q e_j = e_{pos(j)}, Q z^μ Q^{-1} = z^λ;  A z^μ B = (A Q^{-1}) z^λ (Q B)
    pos = {j: r for r, j in enumerate(order)}
    Q = [[1 if pos[j] == i else 0 for j in range(n)] for i in range(n)]
    Qinv = [[Q[j][i] for j in range(n)] for i in range(n)]
    A0 = poly.at_zero(bk.A)
    Binf = poly.at_infinity(bk.B)
    g0 = fqlinalg.mat_mul(F, A0, Qinv)
    ginf = fqlinalg.mat_mul(F, Q, Binf)
    if z0 != 1:
        g0 = fqlinalg.mat_mul(F, g0, _z0_twist(G, lam, z0))
    lam = normalize_coweight(lam, G.kind)
    tp = twisted_product(parabolic_datum(lam, G), "++")
    return lam, tp.point(G.from_matrix(g0), int(G.inv[G.from_matrix(ginf)]))


def point_transition(G: FiniteGroup, lam, pt: int, z0: int = 1):
    """A transition matrix g0·z^λ·g∞ presenting the point."""
    tp = twisted_product(parabolic_datum(lam, G), "++")
    a, b = tp.points[pt]
    g0 = G.matrix(a)
    if z0 != 1:
        g0 = fqlinalg.mat_mul(G.F, g0, _z0_twist(G, lam, z0, inverse=True))
    left = poly.mat_mul(poly.from_constant(G.F, g0), poly.diag_monomials(G.F, lam))
    return poly.mat_mul(left, loop_matrix(G, int(G.inv[b])))


def sigma_matrix(g):
    """g(z) -> g(z^{-1})^{-1}: pullback along z -> z^{-1}."""
    return poly.inverse(poly.invert_variable(g))


# -- independent type oracle --------------------------------------------------

def h0_dimension(G: FiniteGroup, g, m: int) -> int:
    """dim H^0(P^1, E(m)) for the bundle with transition g (sections s0 = z^m g s∞)."""
    F, n = G.F, G.N
    ginv = poly.inverse(g)
    D = m + (poly.max_degree(g) or 0)
    if D < 0:
        return 0
    # unknown s0 ∈ k[z]^n of degree ≤ D; need z^{-m} g^{-1} s0 to have no positive powers
    nvar = n * (D + 1)
    cons = {}
    for a in range(n):
        for b in range(n):
            h = ginv[a][b].shift(-m)
            for e in range(D + 1):
                for k, c in enumerate(h.c):
                    exp = h.val + k + e
                    if exp > 0 and c:
                        row = cons.setdefault((a, exp), [0] * nvar)
                        idx = e * n + b
                        row[idx] = F.add(row[idx], c)
    rows = list(cons.values())
    return nvar - fqlinalg.rank(F, rows) if rows else nvar


def splitting_type(G: FiniteGroup, g) -> tuple[int, ...]:
    """Grothendieck type from h^0 dimensions: Δh^0(m) = #{j : λ_j + m ≥ 0}."""
    hi = (poly.max_degree(g) or 0) + 1
    lo = -((poly.max_degree(poly.inverse(g)) or 0) + 1)
    lam = []
    prev = h0_dimension(G, g, -hi - 1)
    count = {}
    for m in range(-hi, -lo + 2):
        cur = h0_dimension(G, g, m)
        count[m] = cur - prev
        prev = cur
    # #{j : λ_j ≥ -m} = count[m]
    for j in range(G.N):
        # λ_(j) (j-th largest) = -min{m : count[m] ≥ j+1}
        mm = min(m for m in count if count[m] >= j + 1)
        lam.append(-mm)
    return tuple(lam)


# -- censuses ------------------------------------------------------------------

def stabilizer_census_global(G: FiniteGroup, lam) -> int:
    """|stratum λ| as |G|^2 / |Stab| with Stab = {(x(0), (z^{-λ} x z^λ)(∞))}.

    x runs over polynomial matrices with entries of degree ≤ n_1 - n_N whose
    conjugate z^{-λ} x z^λ is polynomial in z^{-1}, and constant determinant.
    """
    n, q, F = G.N, G.q, G.F
    D = max(lam) - min(lam)
    stab = set()
    for digits in itertools.product(range(q), repeat=n * n * (D + 1)):
        ok = True
        x0 = [[0] * n for _ in range(n)]
        xinf = [[0] * n for _ in range(n)]
        mat = []
        for i in range(n):
            row = []
            for j in range(n):
                base = (i * n + j) * (D + 1)
                cs = digits[base:base + D + 1]
                e = lam[i] - lam[j]  # allowed degree
                if any(cs[d] for d in range(max(e + 1, 0), D + 1)):
                    ok = False
                    break
                x0[i][j] = cs[0]
                xinf[i][j] = cs[e] if 0 <= e <= D else 0
                row.append(Laurent(F, cs))
            if not ok:
                break
            mat.append(row)
        if not ok:
            continue
        d = poly.det(mat)
        if not (d.is_monomial() and d.val == 0):
            continue
        stab.add((G.from_matrix(x0), G.from_matrix(xinf)))
    return G.order ** 2 // len(stab)


def raw_transition_census(G: FiniteGroup, lam, degree: int) -> int:
    """Distinct canonical forms of type λ among all polynomial g of bounded degree."""
    n, q, F = G.N, G.q, G.F
    target = normalize_coweight(lam, G.kind)
    seen = set()
    for digits in itertools.product(range(q), repeat=n * n * (degree + 1)):
        g = [[Laurent(F, digits[(i * n + j) * (degree + 1):(i * n + j + 1) * (degree + 1)])
              for j in range(n)] for i in range(n)]
        d = poly.det(g)
        if not d.is_monomial():
            continue
        if G.kind == "GL" and d.val != sum(lam):
            continue
        mu, pt = canonical_form(G, g, verify=False)
        if mu == target:
            seen.add(pt)
    return len(seen)


def point_census(G: FiniteGroup, lam) -> dict:
    lam = normalize_coweight(lam, G.kind)
    tp = len(twisted_product(parabolic_datum(lam, G), "++"))
    oracle = stabilizer_census_global(G, lam)
    if tp != oracle:
        raise AssertionError(f"stratum {lam}: twisted product {tp} vs oracle {oracle}")
    return {"lambda": lam, "twisted_product": tp, "oracle": oracle}


# -- Hecke actions ---------------------------------------------------------------

_CF_CACHE: dict = {}


def _cf(G, g, z0):
    key = (G.key, z0, poly.mat_key(g))
    r = _CF_CACHE.get(key)
    if r is None:
        r = canonical_form(G, g, z0)
        _CF_CACHE[key] = r
    return r


_REP_CACHE: dict = {}


def _reps(G, mu, p, side):
    key = (G.key, mu, p, side)
    if key not in _REP_CACHE:
        cs = coset_reps(G, mu, p)
        if side == "inf":
            cs = [poly.inverse(poly.invert_variable(c)) for c in cs]
        _REP_CACHE[key] = cs
    return _REP_CACHE[key]


def act_on_point(G: FiniteGroup, side: str, mu, p, lam, pt, z0: int = 1) -> dict:
    """δ_{K_1 κ K_1} ⋆_side δ_point as {(λ', pt'): multiplicity}."""
    g = point_transition(G, lam, pt, z0)
    out = {}
    if side == "0":
        for c in _reps(G, mu, p, "0"):
            key = _cf(G, poly.mat_mul(c, g), z0)
            out[key] = out.get(key, 0) + 1
    elif side == "inf":
        for c in _reps(G, mu, p, "inf"):
            key = _cf(G, poly.mat_mul(g, c), z0)
            out[key] = out.get(key, 0) + 1
    else:
        raise ValueError("side must be '0' or 'inf'")
    return out


def hecke_act(side: str, a: HeckeElement, v: dict, V: VSpace, z0: int = 1) -> dict:
    """a ⋆_side v for v a dict point-index -> coefficient of V; result on V."""
    G = V.G
    out = {}
    for (mu, p), av in a.values.items():
        for idx, coef in v.items():
            lam, pt = V.points[idx]
            for key, mult in act_on_point(G, side, mu, p, lam, pt, z0).items():
                if key not in V.index:
                    raise WindowOverflow(f"result of type {key[0]} outside V window {V.window}")
                j = V.index[key]
                out[j] = out.get(j, 0) + av * coef * mult
    return {k: c for k, c in out.items() if not (hasattr(c, "is_zero") and c.is_zero()) and c != 0}


def delta_point(G: FiniteGroup, z0: int = 1):
    n = G.N
    return canonical_form(G, poly.identity(G.F, n), z0)


def act_map(G: FiniteGroup, window, z0: int = 1) -> LinearMap:
    """Matrix of a -> a ⋆_0 δ from A_{≤window} to V_{≤window}."""
    Abasis = hecke_basis(G, window)
    V = v_space(G, window)
    cols = []
    for mu, p in Abasis.points:
        col = {}
        for c in _reps(G, mu, p, "0"):
            key = _cf(G, c, z0)
            if key not in V.index:
                raise WindowOverflow(f"act produced type {key[0]} outside window")
            col[V.index[key]] = col.get(V.index[key], 0) + 1
        cols.append(col)
    return LinearMap.from_columns(Abasis, V, cols)


def sigma_map(G: FiniteGroup, window, z0: int = 1) -> LinearMap:
    V = v_space(G, window)
    cols = []
    for lam, pt in V.points:
        key = _cf(G, sigma_matrix(point_transition(G, lam, pt, z0)), z0)
        cols.append({V.index[key]: 1})
    return LinearMap.from_columns(V, V, cols)


def iota_map(G: FiniteGroup, window, z0: int = 1) -> LinearMap:
    """ι = act^{-1} ∘ σ ∘ act: ι(a) ⋆_0 δ = a ⋆_∞ δ."""
    A = act_map(G, window, z0)
    if not A.is_invertible():
        raise ArithmeticError("act is singular on this window")
    return A.inverse().compose(sigma_map(G, window, z0)).compose(A)


def iota(a: HeckeElement, z0: int = 1) -> HeckeElement:
    B = a.basis
    I = iota_map(B.G, B.window, z0)
    out = {}
    for key, v in a.values.items():
        j = B.index[key]
        for i in range(B.size):
            c = I.entry(i, j)
            if c:
                k = B.points[i]
                out[k] = out[k] + v * c if k in out else v * c
    return HeckeElement(B, out)


# -- G×G action and cuspidal part ------------------------------------------------

def gxg_act(V: VSpace, h1: int, h2: int, idx: int) -> int:
    """(h1, h2)·point: change of trivializations g -> h1 g h2^{-1}."""
    lam, pt = V.points[idx]
    tp = twisted_product(parabolic_datum(lam, V.G), "++")
    return V.index[(lam, tp.act(h1, h2, pt))]


def v_cuspidal_projector(V: VSpace) -> LinearMap:
    """Orthogonal projector onto vectors killed by every U'-average on either side."""
    G = V.G
    vecs = []
    Us = _proper_unipotents(G)
    for idx in range(V.size):
        for U in Us:
            for side in (0, 1):
                vec = {}
                for u in U:
                    j = gxg_act(V, u, G.identity, idx) if side == 0 else gxg_act(V, G.identity, u, idx)
                    vec[j] = vec.get(j, 0) + 1
                vecs.append(vec)
    uniq = {tuple(sorted(v.items())): v for v in vecs}
    return orthogonal_complement_projector(V, list(uniq.values()))


def central_point_element(G: FiniteGroup, mu, pt: int) -> int:
    """For central μ = (d,...,d) the point g0·z^μ·g∞ is determined by g0·g∞ ∈ G(k)."""
    mu = normalize_coweight(mu, G.kind)
    if len(set(mu)) != 1:
        raise ValueError(f"{mu} is not central")
    a, b = twisted_product(parabolic_datum(mu, G), "++").points[pt]
    return int(G.mul[a, G.inv[b]])


def trivial_stratum_identification(V: VSpace) -> list[int]:
    """Point index on stratum 0 -> g = g0·g∞ ∈ G(k) (the transition matrix itself)."""
    G = V.G
    zero = normalize_coweight((0,) * G.N, G.kind)
    return [central_point_element(G, zero, V.points[idx][1]) for idx in V.stratum_indices(zero)]


def graded_act_matrix(G: FiniteGroup, lam, z0: int = 1) -> dict:
    """Block of act from A_λ to V_λ as {(A point, V point): multiplicity}."""
    lam = normalize_coweight(lam, G.kind)
    Abasis = hecke_basis(G, lam)
    V = v_space(G, lam)
    A = act_map(G, lam, z0)
    out = {}
    for j, (mu, p) in enumerate(Abasis.points):
        if mu != lam:
            continue
        for i in V.stratum_indices(lam):
            c = A.entry(i, j)
            if c:
                out[(p, V.points[i][1])] = c
    return out


def predicted_graded_act(G: FiniteGroup, lam) -> dict:
    """The intertwining operator on the u-slot: (x, y) ↦ Σ_{gU ∩ yU^- ≠ ∅} (g, x).

    An A_λ point (x, y) = (u'^{-1}, u) of G/U ×_M G/U^- goes to the V_λ points
    (g, x) of G/U ×_M G/U weighted by the Radon matrix entry between yU^- and gU.
    """
    from .funspace import radon_data
    lam = normalize_coweight(lam, G.kind)
    datum = parabolic_datum(lam, G)
    R = radon_data(datum)
    tpA = twisted_product(datum, "+-")
    tpV = twisted_product(datum, "++")
    out = {}
    for p, (x, y) in enumerate(tpA.points):
        a = int(R.source.coset_of[y])
        for c in range(R.target.size):
            w = R.map.entry(c, a)
            if w:
                key = (p, tpV.point(R.target.reps[c], x))
                out[key] = out.get(key, 0) + w
    return out
