"""Hecke operators at divisors of G_m away from 0 and ∞.

A divisor D of degree i is the Frobenius orbit of x ∈ k_i, cut out by its
minimal polynomial p(z).  An upper modification E ⊂ E' with E'/E = O_D is a
choice of k_i-line in the fibre E|_x; on lattices it enlarges k[z]^N by
w/p (w a vector lifting the line) and k[z^{-1}]^N compatibly.  The
trivializations at 0 and ∞ pass through the inclusion unchanged.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import poly
from .arith import Divisor, Scalar, neg_inv_sqrt_q, tower
from .arith import fqlinalg
from .bundles import _cf, point_transition, v_space, VSpace
from .funspace import LinearMap
from .groups import FiniteGroup, normalize_coweight, normalize_window, parabolic_datum, twisted_product
from .loophecke import WindowOverflow, hecke_basis, HeckeElement
from .poly import Laurent


class UnsupportedFunction(ValueError):
    pass


class ChoiceDependence(AssertionError):
    """eval_phi changed value under a different admissible (n, y)."""


# -- field helpers ----------------------------------------------------------------

def _poly_from_base(F, coeffs) -> Laurent:
    return Laurent(F, list(coeffs))


@lru_cache(maxsize=None)
def _interpolation_table(q: int, top: int, x: int, i: int) -> dict:
    """value in k_i -> coefficient tuple c (len i) with sum c_j x^j = value."""
    T = tower(q, top)
    big = T.big
    powers = [big.pow(x, j) if x else (1 if j == 0 else 0) for j in range(i)]
    images = [T.from_base(c) for c in range(q)]
    out = {}
    for cs in itertools.product(range(q), repeat=i):
        v = 0
        for c, pw in zip(cs, powers):
            if c:
                v = big.add(v, big.mul(images[c], pw))
        out[v] = cs
    return out


def _evaluate(T, f: Laurent, x: int) -> int:
    """f(x) in the big field; f has coefficients in k."""
    big = T.big
    v = 0
    for j, c in enumerate(f.c):
        if c:
            v = big.add(v, big.mul(T.from_base(c), big.pow(x, (f.val + j) % big.order)))
    return v


def _exact_div(f: Laurent, d: Laurent) -> Laurent:
    """f / d for a polynomial d with d(0) != 0, asserting divisibility."""
    if f.is_zero():
        return f
    v = f.val
    quo, rem = f.shift(-v).monic_divmod(d)
    if not rem.is_zero():
        raise ArithmeticError("modification is not integral: inexact division")
    return quo.shift(v)


def projective_lines(T, i: int, N: int):
    """Normalized representatives (first nonzero coordinate 1) of P^{N-1}(k_i)."""
    units = [0] + T.subfield_units(i)
    for lead in range(N):
        for tail in itertools.product(units, repeat=N - lead - 1):
            yield (0,) * lead + (1,) + tuple(tail)


def divisor_tower(D: Divisor):
    return D.tower


def modification_count(q: int, i: int, N: int) -> int:
    return (q ** (i * N) - 1) // (q ** i - 1)


# -- modifications ------------------------------------------------------------------

def modify(G: FiniteGroup, g, D: Divisor, line):
    """Transition matrix of the upper modification of g along the given line at D."""
    T = D.tower
    F = G.F
    N = G.N
    i = D.degree
    x = D.rep
    p = _poly_from_base(F, D.minpoly())
    p0 = p.coeff(0)
    xinv = T.big.inv(x)
    # w with w(x) = line, and w' (variable w = z^{-1}) with w'(x^{-1}) = g^{-1}(x)·line
    tab = _interpolation_table(T.q, T.top, x, i)
    wz = [_poly_from_base(F, tab[v]) for v in line]
    ginv = poly.inverse(g)
    big = T.big
    u = []
    for r in range(N):
        s = 0
        for c in range(N):
            if line[c]:
                s = big.add(s, big.mul(_evaluate(T, ginv[r][c], x), line[c]))
        u.append(s)
    tabinv = _interpolation_table(T.q, T.top, xinv, i)
    ww = [_poly_from_base(F, tabinv[v]) for v in u]
    # p~(w) = w^i p(1/w) / p(0), monic with constant term 1/p(0)
    pt = Laurent(F, [F.mul(c, F.inv(p0)) for c in reversed(p.c)])
    S0 = poly.column_hermite([[p if r == c else Laurent(F) for c in range(N)] + [wz[r]] for r in range(N)])
    Sw = poly.column_hermite([[pt if r == c else Laurent(F) for c in range(N)] + [ww[r]] for r in range(N)])
    d0 = poly.det(S0)
    pN = poly.one(F)
    for _ in range(N - 1):
        pN = pN * p
    quo, rem = d0.monic_divmod(pN)
    if not rem.is_zero() or not quo.is_monomial() or quo.val != 0:
        raise AssertionError("lattice index is not p^{N-1}")
    c0 = quo.c[0]
    M = poly.mat_mul(poly.mat_mul(poly.adjugate(S0), g), poly.invert_variable(Sw))
    M = [[_exact_div(e, pN) for e in row] for row in M]
    left = poly.from_constant(F, poly.at_zero(S0))
    right = poly.from_constant(F, fqlinalg.inverse(F, poly.at_zero(Sw)))
    out = poly.mat_mul(poly.mat_mul(left, M), right)
    scale = F.inv(F.mul(p0, c0))
    return poly.mat_shift(poly.mat_scale(out, scale), i)


def modifications(G: FiniteGroup, lam, pt: int, D: Divisor, z0: int = 1) -> dict:
    """Upper modifications of the point (λ, pt) at D: {(λ', pt'): multiplicity}."""
    lam = normalize_coweight(lam, G.kind)
    g = point_transition(G, lam, pt, z0)
    out = {}
    for line in projective_lines(D.tower, D.degree, G.N):
        key = _cf(G, modify(G, g, D, line), z0)
        out[key] = out.get(key, 0) + 1
    return out


# -- the operator ---------------------------------------------------------------

def normalization(q: int, N: int, i: int) -> Scalar:
    """(-q^{-1/2})^{(N-1) i}."""
    return neg_inv_sqrt_q(q) ** ((N - 1) * i)


def inline_normalization(q: int, N: int, i: int) -> Scalar:
    """The variant q^{-iN/2}, kept only to show it disagrees."""
    return Scalar.sqrt_q(q) ** (-(i * N))


def _parse_f(f, N):
    if f in ("std", "trace"):
        return ("std", 1)
    if isinstance(f, tuple) and len(f) == 2 and f[0] == "z":
        if N != 1:
            raise UnsupportedFunction("monomials z^m only make sense for GL(1)")
        return ("z", int(f[1]))
    raise UnsupportedFunction(f"unsupported f: {f!r}")


@dataclass
class DivisorHeckeOp:
    """h_{D,f} = c · (modification correspondence)^m, as a push-forward on V."""
    G: FiniteGroup
    D: Divisor
    f: tuple
    normalization: Scalar
    z0: int = 1
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def degree(self) -> int:
        return self.D.degree

    @property
    def power(self) -> int:
        return self.f[1]

    def _step(self, key):
        r = self._cache.get(key)
        if r is None:
            r = modifications(self.G, key[0], key[1], self.D, self.z0)
            self._cache[key] = r
        return r

    def apply_raw(self, v: dict) -> dict:
        """Unnormalized correspondence sum on a dict (λ, pt) -> coefficient."""
        for _ in range(self.power):
            out = {}
            for key, c in v.items():
                for k2, mult in self._step(key).items():
                    out[k2] = out.get(k2, 0) + c * mult
            v = {k: c for k, c in out.items() if c != 0}
        return v

    def apply(self, v: dict) -> dict:
        c = self.normalization ** self.power
        return {k: Scalar.coerce(a) * c for k, a in self.apply_raw(v).items()}

    def target_window(self, window):
        G = self.G
        shift = self.degree * self.power
        return tuple(normalize_coweight((mu[0] + shift,) + tuple(mu[1:]), G.kind)
                     for mu in normalize_window(window, G.kind))

    def matrix(self, window) -> LinearMap:
        """Unnormalized correspondence from V_window to V_{window + i}."""
        src = v_space(self.G, window)
        tgt = v_space(self.G, self.target_window(window))
        cols = []
        for key in src.points:
            col = {}
            for k2, c in self.apply_raw({key: 1}).items():
                if k2 not in tgt.index:
                    raise WindowOverflow(f"modification of type {k2[0]} outside {tgt.window}")
                col[tgt.index[k2]] = c
            cols.append(col)
        return LinearMap.from_columns(src, tgt, cols)


def divisor_hecke(G: FiniteGroup, D: Divisor, f="std", z0: int = 1, normalization_rule: str = "literal") -> DivisorHeckeOp:
    kind, m = _parse_f(f, G.N)
    if D.rep in (0,):
        raise ValueError("divisor must avoid 0 and ∞")
    if normalization_rule == "literal":
        c = normalization(G.q, G.N, D.degree)
    elif normalization_rule == "inline":
        c = inline_normalization(G.q, G.N, D.degree)
    else:
        raise ValueError(f"unknown normalization rule {normalization_rule!r}")
    return DivisorHeckeOp(G, D, (kind, m), c, z0)


def degree_of(G: FiniteGroup, key) -> int:
    return sum(key[0])


# -- parameters -------------------------------------------------------------------

SIGN_CONVENTIONS = ("none", "u", "trace", "s")


@dataclass(frozen=True)
class LanglandsParam:
    """(s, u) at level n: s a scaled cyclic permutation, u(γ) = diag(θ_j(γ)) for γ ∈ k_n^×.

    thetas[j] is an exponent e_j: θ_j(g_n^a) = ζ_{q^n-1}^{e_j a}, g_n the
    tower generator.  s e_j = e_{perm[j]}, scaled by s_scalar.  The sign
    (-1)^{N-1} of a cuspidal parameter is placed by sign_convention:
    "u" multiplies u(y), "trace" multiplies the value of f, "s" rescales s
    by ε = ζ_{2N}^{N-1} (so that ε^N = (-1)^{N-1} and s lands in SL(N)),
    "none" drops it.  For f the standard trace, "u" and "trace" agree.
    """
    q: int
    n: int
    thetas: tuple
    perm: tuple
    s_scalar: Scalar = field(default_factory=lambda: Scalar(1))
    sign_convention: str = "none"

    def __post_init__(self):
        if self.sign_convention not in SIGN_CONVENTIONS:
            raise ValueError(f"unknown sign convention {self.sign_convention!r}")

    @property
    def N(self):
        return len(self.thetas)

    def u(self, y: int) -> list:
        T = tower(self.q, self.n)
        a = T.log_in(y, self.n)
        m = self.q ** self.n - 1
        return [Scalar.zeta(m, (e * a) % m) if m > 1 else Scalar(1) for e in self.thetas]

    def check_relation(self) -> bool:
        """s u(γ) s^{-1} = u(γ^q): diagonal entries permute like Frobenius."""
        m = self.q ** self.n - 1
        return all((e - self.q * self.thetas[self.perm[j]]) % m == 0
                   for j, e in enumerate(self.thetas))

    def relevel(self, n2: int) -> "LanglandsParam":
        """Compose u with Norm_{n2, n}."""
        if n2 % self.n:
            raise ValueError("new level must be a multiple")
        m1 = self.q ** self.n - 1
        m2 = self.q ** n2 - 1
        # Norm(g_{n2}) = g_n, so exponents scale with the root-of-unity order
        scale = m2 // m1 if m1 else m2
        return LanglandsParam(self.q, n2, tuple(e * scale for e in self.thetas), self.perm,
                              self.s_scalar, self.sign_convention)

    def trace_s_power_u(self, i: int, y: int) -> Scalar:
        """tr(s^i u(y)) with the sign placed per the convention."""
        N = self.N
        perm = list(range(N))
        for _ in range(i):
            perm = [self.perm[j] for j in perm]
        vals = self.u(y)
        tr = Scalar(0)
        for j in range(N):
            if perm[j] == j:
                tr = tr + vals[j]
        tr = tr * self.s_scalar ** i
        if self.sign_convention in ("u", "trace") and N % 2 == 0:
            tr = -tr
        elif self.sign_convention == "s" and N > 1:
            tr = tr * Scalar.zeta(2 * N, (N - 1) * i)
        return tr


def cuspidal_parameter(q: int, N: int, j: int, sign_convention: str = "u") -> LanglandsParam:
    """Level-N parameter of a cuspidal pair θ = ζ^{j·log}: u = diag(θ, θ^q, ...), s cyclic."""
    m = q ** N - 1
    thetas = tuple((j * q ** r) % m for r in range(N))
    perm = tuple((r - 1) % N for r in range(N))
    return LanglandsParam(q, N, thetas, perm, Scalar(1), sign_convention)


def _witnesses(T_q: int, n: int, i: int, x: int, limit: int = 2):
    T = tower(T_q, n)
    out = []
    for y in T.subfield_units(n):
        if T.norm(y, n, i) == x:
            out.append(y)
            if len(out) >= limit:
                break
    return out


def eval_phi(param: LanglandsParam, D: Divisor, f="std") -> Scalar:
    """f(s^i u(y)) with Norm_{n,i}(y) = x, checked on a second witness (n, y) and on (2n, y')."""
    i = D.degree
    if param.n % i:
        raise ValueError("parameter level must be divisible by deg D")
    kind, m = _parse_f(f, param.N) if f != "const" else ("const", 0)
    x = D.rep
    vals = []
    for level in (param.n, 2 * param.n):
        P = param if level == param.n else param.relevel(level)
        T = tower(param.q, level)
        # x lives in the tower of D; move it into k_level ⊂ tower(q, level) via its log
        xl = _transport(D, T)
        ys = _witnesses(param.q, level, i, xl)
        if not ys:
            raise AssertionError("no y with the required norm")
        for y in ys:
            if kind == "const":
                vals.append(Scalar(1))
            else:
                vals.append(P.trace_s_power_u(i, y) ** m)
    for v in vals[1:]:
        if v != vals[0]:
            raise ChoiceDependence(f"φ depends on the choice of (n, y): {vals}")
    return vals[0]


def _transport(D: Divisor, T) -> int:
    """The image of D.rep in another tower, matched through discrete logs of k_i."""
    i = D.degree
    a = D.tower.log_in(D.rep, i)
    return T.big.exp[(a * (T.order // (T.q ** i - 1))) % T.order] if T.order > 1 else 1


# -- GL(1) ------------------------------------------------------------------------

def gl1_element(B, key):
    """A basis point of A for GL(1) as (n, c): the double coset of c·t^n."""
    kappa = B.rep(B.index[key])
    e = kappa[0][0]
    return e.val, e.c[0]


def gl1_character(G: FiniteGroup, s: Scalar, chi_exp: int):
    """A-character ψ_{s,u}(t^n c) = s^n u((-1)^n c^{-1}), u(g^a) = ζ_{q-1}^{chi_exp·a}."""
    T = tower(G.q, 1)
    F = G.F
    m = G.q - 1

    def u(c):
        a = T.log_in(T.from_base(c), 1)
        return Scalar.zeta(m, (chi_exp * a) % m) if m > 1 else Scalar(1)

    def psi(n, c):
        arg = F.inv(c)
        if n % 2:
            arg = F.neg(arg)
        return (s ** n) * u(arg)

    return psi


def hecke_element_of(G: FiniteGroup, op: DivisorHeckeOp) -> HeckeElement:
    """a_h with a_h ⋆_0 δ = h(δ) (GL(1): V is free of rank one over A)."""
    from .bundles import act_map, delta_point
    d = op.degree * op.power
    delta = delta_point(G, op.z0)
    img = op.apply({delta: 1})
    A = act_map(G, (d,), op.z0)
    Ainv = A.inverse()
    V = A.codomain
    B = A.domain
    out = {}
    for key, c in img.items():
        j = V.index[key]
        for r in range(B.size):
            w = Ainv.entry(r, j)
            if w:
                k = B.points[r]
                out[k] = out[k] + c * w if k in out else c * w
    return HeckeElement(B, out)


def gl1_centdiv_suite(q: int, i_max: int = 3, fs=(("z", 1), ("z", 2), "const"), s_values=None) -> dict:
    """Eigenvalues of h_{D,f} on every A-character vs φ_{D,f}(s, u), for GL(1)."""
    from .groups import build_group
    G = build_group(1, q)
    s_values = s_values or [Scalar(1), Scalar(2), Scalar(Fraction(-1, 3)), Scalar.zeta(5)]
    checks = []
    fails = []
    for i in range(1, i_max + 1):
        T = tower(q, i)
        for D in T.divisors_of_degree(i):
            for f in fs:
                if f == "const":
                    op = None
                else:
                    op = divisor_hecke(G, D, f)
                    a = hecke_element_of(G, op)
                for s in s_values:
                    for e in range(q - 1):
                        if op is None:
                            lhs = Scalar(1)
                        else:
                            psi = gl1_character(G, s, e)
                            lhs = Scalar(0)
                            for key, c in a.values.items():
                                n, cc = gl1_element(a.basis, key)
                                lhs = lhs + c * psi(n, cc)
                        P = LanglandsParam(q, 1, (e,), (0,), s).relevel(i)
                        rhs = eval_phi(P, D, f)
                        checks.append(1)
                        if lhs != rhs:
                            fails.append({"D": (i, D.rep), "f": str(f), "s": repr(s), "u": e,
                                          "eigenvalue": repr(lhs), "phi": repr(rhs)})
    return {"q": q, "checks": len(checks), "failures": fails}


# -- centrality ------------------------------------------------------------------

def _act_dict(G: FiniteGroup, side: str, a: dict, v: dict, z0: int = 1) -> dict:
    """a ⋆_side v on sparse dicts keyed by (λ, point)."""
    from .bundles import act_on_point
    out = {}
    for (mu, p), av in a.items():
        for (lam, pt), c in v.items():
            for key, mult in act_on_point(G, side, mu, p, lam, pt, z0).items():
                out[key] = out.get(key, 0) + av * c * mult
    return {k: c for k, c in out.items() if c != 0}


def _gxg_dict(G: FiniteGroup, h1: int, h2: int, v: dict) -> dict:
    out = {}
    for (lam, pt), c in v.items():
        tp = twisted_product(parabolic_datum(lam, G), "++")
        k = (lam, tp.act(h1, h2, pt))
        out[k] = out.get(k, 0) + c
    return out


def _clean(v):
    return {k: c for k, c in v.items() if c != 0}


def centrality_check(op: DivisorHeckeOp, window=None, samples: int = 3, seed: int = 0,
                     full_gxg: bool = True) -> dict:
    """Commutators of op with the A⊗A generators and with G(k)×G(k), on point deltas.

    The source window defaults to the trivial stratum and the (1,0) stratum.
    Every check is exact on integer correspondence counts (the normalization
    is a common scalar).  Hard failures carry a witness.
    """
    import random
    from .funspace import generating_set
    G = op.G
    N = G.N
    zero = normalize_coweight((0,) * N, G.kind)
    one = normalize_coweight((1,) + (0,) * (N - 1), G.kind)
    window = window or (zero, one)
    V = v_space(G, window)
    rng = random.Random(seed)
    checks = []

    def record(name, failures):
        checks.append({"name": name, "status": "fail" if failures else "pass",
                       "witness": failures[:1] or None})

    points = list(V.points)
    cache = {k: op.apply_raw({k: 1}) for k in points}

    def op_v(v):
        out = {}
        for k, c in v.items():
            img = cache.get(k)
            if img is None:
                img = cache[k] = op.apply_raw({k: 1})
            for k2, m in img.items():
                out[k2] = out.get(k2, 0) + c * m
        return _clean(out)

    # G(k) × G(k) on the trivial stratum (which holds V_cusp)
    trivial = [k for k in points if k[0] == zero]
    pairs = ([(h1, h2) for h1 in range(G.order) for h2 in range(G.order)] if full_gxg else
             [(g, G.identity) for g in generating_set(G)] + [(G.identity, g) for g in generating_set(G)])
    bad = []
    for h1, h2 in pairs:
        for k in trivial:
            lhs = op_v(_gxg_dict(G, h1, h2, {k: 1}))
            rhs = _gxg_dict(G, h1, h2, cache[k])
            if _clean(lhs) != _clean(rhs):
                bad.append({"h": (h1, h2), "point": k})
                break
        if bad:
            break
    record("GxG-equivariance on the trivial stratum", bad)

    # δ_{K_1 g K_1} at 0 and at ∞, g in a generating set, on every source point
    basis0 = hecke_basis(G, zero)
    gens = generating_set(G)
    for side in ("0", "inf"):
        bad = []
        for g in gens:
            from .loophecke import group_element_delta
            a = group_element_delta(G, g, basis0).values
            for k in points:
                lhs = op_v(_act_dict(G, side, a, {k: 1}, op.z0))
                rhs = _act_dict(G, side, a, cache[k], op.z0)
                if lhs != _clean(rhs):
                    bad.append({"g": g, "point": k})
                    break
        record(f"commutes with group deltas at {side}", bad)

    # A_{(1,0)}: the standard element plus random basis points, both sides
    B1 = hecke_basis(G, one)
    std = [k for k in B1.points if k[0] == one]
    from .loophecke import classify, t_power
    lam, pt = classify(G, t_power(G, one))
    chosen = [(lam, pt)] + rng.sample(std, min(samples, len(std)))
    for side in ("0", "inf"):
        bad = []
        for key in chosen:
            for k in points:
                lhs = op_v(_act_dict(G, side, {key: 1}, {k: 1}, op.z0))
                rhs = _act_dict(G, side, {key: 1}, cache[k], op.z0)
                if lhs != _clean(rhs):
                    bad.append({"a": key, "point": k})
                    break
        record(f"commutes with A_(1,0) generators at {side}", bad)

    # e_fin ⊗ e_fin: averaging over G × G on the whole source window
    bad = []
    for k in points:
        lhs = {}
        rhs = {}
        for h1 in range(G.order):
            for h2 in range(G.order):
                for kk, c in _gxg_dict(G, h1, h2, {k: 1}).items():
                    lhs[kk] = lhs.get(kk, 0) + c
        lhs = op_v(lhs)
        for h1 in range(G.order):
            for h2 in range(G.order):
                for kk, c in _gxg_dict(G, h1, h2, cache[k]).items():
                    rhs[kk] = rhs.get(kk, 0) + c
        if lhs != _clean(rhs):
            bad.append({"point": k})
            break
    record("commutes with e_fin ⊗ e_fin", bad)
    return {"D": {"degree": op.degree, "rep": op.D.rep}, "f": list(op.f), "window": [list(w) for w in V.window],
            "checks": checks, "passed": all(c["status"] == "pass" for c in checks)}
